#include <gtest/gtest.h>

#include "negforge/error.hpp"
#include "negforge/parser_provider.hpp"

using namespace negforge;

namespace {

const std::string kUdFile = std::string(NEGFORGE_FIXTURES) + "/conllu/ud_style.conllu";
const std::string kTestkit = NEGFORGE_TESTKIT;

}  // namespace

TEST(NegateText, BuiltinExamples) {
  EXPECT_EQ(negate_text("Ray Charles is legendary.").text, "Ray Charles isn't legendary.");
  EXPECT_EQ(negate_text("He does not run.").text, "He runs.");
  EXPECT_THROW((void)negate_text(""), InvalidArgument);
  EXPECT_THROW((void)negate_text("   "), InvalidArgument);
}

TEST(NegateText, StageLabels) {
  try {
    (void)negate_text("Wow !");
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), Stage::parse);
  }
  const ConlluFixtureParser fixture(std::vector<ParsedSentence>{
      ParsedSentence({Token{1, "Wow", "wow", Pos::OTHER, "UH", 0, "root", false}}, "Wow")});
  try {
    (void)negate_text("Wow", fixture, Negator());
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), Stage::negate);
  }
}

TEST(ConlluFixture, UniversalDependenciesStyleParses) {
  const ConlluFixtureParser parser(kUdFile);
  EXPECT_EQ(parser.size(), 4u);
  const Negator negator;
  EXPECT_EQ(negate_text("I'm very hungry.", parser, negator).text, "I'm not very hungry.");
  const auto affirm = negate_text("Ray Charles isn't legendary.", parser, negator);
  EXPECT_EQ(affirm.text, "Ray Charles is legendary.");
  EXPECT_EQ(affirm.branch, Branch::remove_cue);
  const auto likes = negate_text("She does not like tea.", parser, negator);
  EXPECT_EQ(likes.text, "She likes tea.");
  EXPECT_EQ(likes.branch, Branch::remove_do_support);
  const auto late = negate_text("They will be late.", parser, negator);
  EXPECT_EQ(late.text, "They won't be late.");
  EXPECT_EQ(late.branch, Branch::negate_first_aux);
}

TEST(ConlluFixture, UnknownSentenceIsAParseStageError) {
  const ConlluFixtureParser parser(kUdFile);
  try {
    (void)negate_text("Not in the file.", parser, Negator());
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), Stage::parse);
  }
}

TEST(ExternalCommand, RoundTripsThroughCoNLLU) {
  const ExternalCommandParser parser(kTestkit + " parse");
  const auto batch = parser.parse_batch({"I will be there.", "I'm very hungry.", "He does not run."});
  ASSERT_EQ(batch.size(), 3u);
  EXPECT_EQ(root_of(batch[0]).surface, "be");
  EXPECT_EQ(negate_text("I will be there.", parser, Negator()).text, "I won't be there.");
}

TEST(ExternalCommand, FailuresSurface) {
  EXPECT_THROW((void)ExternalCommandParser(kTestkit + " parse --fail").parse("I will be there."), Error);
  EXPECT_THROW((void)ExternalCommandParser(kTestkit + " parse --drop-last").parse_batch({"I ran.", "You ran."}),
               Error);
  EXPECT_THROW((void)ExternalCommandParser("sleep 5", std::chrono::milliseconds(200)).parse("I ran."), Error);
}

TEST(MakeParser, Factory) {
  EXPECT_NE(dynamic_cast<BuiltinParser*>(make_parser({}).get()), nullptr);
  ParserConfig cfg;
  cfg.kind = ParserKind::conllu_fixture;
  EXPECT_THROW((void)make_parser(cfg), InvalidArgument);
  cfg.conllu_path = kUdFile;
  EXPECT_NE(dynamic_cast<ConlluFixtureParser*>(make_parser(cfg).get()), nullptr);
  cfg.kind = ParserKind::external_command;
  EXPECT_THROW((void)make_parser(cfg), InvalidArgument);
  EXPECT_EQ(parser_kind_from_string("external-cmd"), ParserKind::external_command);
  EXPECT_EQ(parser_kind_from_string("conllu"), ParserKind::conllu_fixture);
  EXPECT_THROW((void)parser_kind_from_string("spacy"), InvalidArgument);
}
