#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "negforge/dataset.hpp"
#include "negforge/error.hpp"
#include "oracle_values.hpp"

using namespace negforge;
using namespace negforge::dataset;

namespace {

using Words = std::vector<std::string>;

SentencePair pair(std::string ref, std::string cand, double score = 0.0) {
  return {std::move(ref), std::move(cand), score, Source::other, Split::unassigned};
}

std::vector<SentencePair> numbered(std::size_t n) {
  std::vector<SentencePair> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pair("ref " + std::to_string(i), "cand " + std::to_string(i)));
  return out;
}

std::string key(const SentencePair& p) { return p.reference + "|" + p.candidate; }

}  // namespace

TEST(WhitespaceTokenize, Examples) {
  EXPECT_EQ(whitespace_tokenize("a b  c"), (Words{"a", "b", "c"}));
  EXPECT_TRUE(whitespace_tokenize("").empty());
  EXPECT_EQ(whitespace_tokenize("don't stop."), (Words{"don't", "stop."}));
  EXPECT_EQ(whitespace_tokenize("\tx \n y "), (Words{"x", "y"}));
  EXPECT_EQ(whitespace_tokenize("The the"), (Words{"The", "the"}));
}

TEST(Jaccard, Examples) {
  EXPECT_DOUBLE_EQ(jaccard({"a", "b"}, {"a", "b"}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard({"a"}, {"b"}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard({"the", "cat", "sat"}, {"the", "cat", "ran"}), oracle::kJaccardCatSat);
  EXPECT_DOUBLE_EQ(jaccard({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard({"a", "a", "b"}, {"a", "b", "b"}), 1.0);
}

TEST(Jaccard, SymmetricAndBounded) {
  std::mt19937 rng(11);
  const Words vocab{"a", "b", "c", "d", "e", "f"};
  for (int i = 0; i < 500; ++i) {
    Words x, y;
    for (unsigned k = rng() % 6; k > 0; --k) x.push_back(vocab[rng() % vocab.size()]);
    for (unsigned k = rng() % 6; k > 0; --k) y.push_back(vocab[rng() % vocab.size()]);
    const double j = jaccard(x, y);
    EXPECT_EQ(j, jaccard(y, x));
    EXPECT_GE(j, 0.0);
    EXPECT_LE(j, 1.0);
    if (!x.empty()) EXPECT_EQ(jaccard(x, x), 1.0);
  }
}

TEST(FilterPair, Examples) {
  const FilterConfig cfg;
  EXPECT_FALSE(filter_pair(pair("the cat sat", "the cat ran"), cfg));              // J = 0.5
  EXPECT_TRUE(filter_pair(pair("x y z", "x y z"), cfg));                           // J = 1
  // J = 0.9 (9 of 10 shared words) but 4 words longer
  EXPECT_FALSE(filter_pair(pair("a b c d e f g h i", "a b c d e f g h i i i i j"), cfg));
  EXPECT_TRUE(filter_pair(pair("a b c d e f g h i", "a b c d e f g h i i i j"), cfg));  // diff 3 kept
}

TEST(FilterConfig, Validation) {
  FilterConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.min_jaccard = 1.5;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.min_jaccard = -0.1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(BuildNegatedPairs, Examples) {
  NegationReport rep;
  const auto out = build_negated_pairs({"I will be there."}, FilterConfig{}, Source::sentiment, &rep);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].reference, "I will be there.");
  EXPECT_EQ(out[0].candidate, "I won't be there.");
  EXPECT_EQ(out[0].score, 0.0);
  EXPECT_EQ(out[0].source, Source::sentiment);

  EXPECT_TRUE(build_negated_pairs({"Wow !"}, FilterConfig{}, Source::other, &rep).empty());
  EXPECT_EQ(rep.failures.size(), 1u);
}

TEST(BuildNegatedPairs, Gates) {
  FilterConfig cfg;
  cfg.max_words = kSentimentMaxWords;
  cfg.require_auxiliary = true;
  std::string long_sentence = "I will";
  for (int i = 0; i < 32; ++i) long_sentence += " x";
  ASSERT_EQ(whitespace_tokenize(long_sentence).size(), 34u);
  NegationReport rep;
  EXPECT_TRUE(build_negated_pairs({long_sentence}, cfg, Source::sentiment, &rep).empty());
  EXPECT_EQ(rep.gated_length, 1u);
  EXPECT_TRUE(build_negated_pairs({"Dogs bark loudly."}, cfg, Source::sentiment, &rep).empty());
  EXPECT_EQ(rep.gated_auxiliary, 1u);
  EXPECT_EQ(build_negated_pairs({"Dogs can bark loudly."}, cfg, Source::sentiment, &rep).size(), 1u);
}

TEST(BuildNegatedPairs, ParallelMatchesSerial) {
  std::vector<std::string> sentences;
  for (const char* s : {"I will be there.", "Wow !", "She likes tea.", "I didn't know what to do.", "We ran home."})
    for (int i = 0; i < 10; ++i) sentences.emplace_back(s);
  NegationReport a, b;
  const auto serial = build_negated_pairs(sentences, FilterConfig{}, Source::other, &a, 1);
  const auto parallel = build_negated_pairs(sentences, FilterConfig{}, Source::other, &b, 4);
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(a.failures, b.failures);
}

TEST(AttachParaphrases, Examples) {
  const std::vector<SentencePair> one{pair("r", "neg r")};
  const auto out = attach_paraphrases(one, {{"r", "para r"}});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].candidate, "para r");
  EXPECT_EQ(out[1].score, 1.0);

  ParaphraseReport rep;
  EXPECT_EQ(attach_paraphrases(one, {}, MissingParaphrase::skip, &rep), one);
  EXPECT_EQ(rep.missing, 1u);
  EXPECT_THROW((void)attach_paraphrases(one, {}, MissingParaphrase::error), InvalidArgument);

  const std::vector<SentencePair> three{pair("a", "x"), pair("b", "y"), pair("c", "z"), pair("a", "w")};
  const auto full = attach_paraphrases(three, {{"a", "A"}, {"b", "B"}, {"c", "C"}}, MissingParaphrase::error, &rep);
  EXPECT_EQ(full.size(), 7u);
  EXPECT_EQ(rep.attached, 3u);
}

TEST(SwapAugment, Examples) {
  EXPECT_TRUE(swap_augment({}).empty());
  const auto out = swap_augment({pair("a", "b", 0.0)});
  EXPECT_EQ(out, (std::vector<SentencePair>{pair("a", "b", 0.0), pair("b", "a", 0.0)}));
  EXPECT_EQ(swap_augment(numbered(17351)).size(), 34702u);
}

TEST(SwapAugment, EveryOutputIsAnInputOrItsSwap) {
  const auto in = numbered(25);
  const auto out = swap_augment(in);
  ASSERT_EQ(out.size(), 2 * in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_EQ(out[i], in[i]);
    EXPECT_EQ(out[in.size() + i].reference, in[i].candidate);
    EXPECT_EQ(out[in.size() + i].candidate, in[i].reference);
    EXPECT_EQ(out[in.size() + i].score, in[i].score);
  }
}

TEST(MergeWmt, Examples) {
  WmtReport rep;
  const auto out = merge_wmt({{"r", "c", "-1.0"}, {"r", "c", "0.7"}, {"r", "c", "abc"}, {"r", "c", "-0.99"},
                              {"r", "c", "1.8"}},
                             FilterConfig{}, &rep);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].score, 0.7);
  EXPECT_EQ(out[0].source, Source::wmt);
  EXPECT_EQ(out[2].score, 1.8);  // not clipped
  EXPECT_EQ(rep.dropped, 1u);
  ASSERT_EQ(rep.rejected.size(), 1u);
  EXPECT_EQ(rep.rejected[0].first, 2u);
}

TEST(SplitDataset, Sizes) {
  const auto a = split_dataset(numbered(100), {}, 0);
  EXPECT_EQ(a.train.size(), 80u);
  EXPECT_EQ(a.dev.size(), 10u);
  EXPECT_EQ(a.test.size(), 10u);
  const auto b = split_dataset(numbered(10), {}, 0);
  EXPECT_EQ(b.train.size(), 8u);
  EXPECT_EQ(b.dev.size(), 1u);
  EXPECT_EQ(b.test.size(), 1u);
  const auto c = split_dataset(numbered(19), {}, 0);  // floor(1.9) = 1 each
  EXPECT_EQ(c.train.size(), 17u);
  EXPECT_EQ(c.dev.size(), 1u);
  EXPECT_EQ(c.test.size(), 1u);
  EXPECT_THROW((void)split_dataset(numbered(10), {70, 10, 10}, 0), InvalidArgument);
}

TEST(SplitDataset, SeededAndPartitioning) {
  const auto in = numbered(237);
  const auto a = split_dataset(in, {}, 42);
  const auto b = split_dataset(in, {}, 42);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.dev, b.dev);
  EXPECT_EQ(a.test, b.test);
  const auto c = split_dataset(in, {}, 43);
  EXPECT_NE(a.test, c.test);

  std::vector<std::string> all;
  for (const auto* part : {&a.train, &a.dev, &a.test})
    for (const auto& p : *part) all.push_back(key(p));
  std::vector<std::string> expected;
  for (const auto& p : in) expected.push_back(key(p));
  std::sort(all.begin(), all.end());
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(all, expected);
  for (const auto& p : a.train) EXPECT_EQ(p.split, Split::train);
  for (const auto& p : a.dev) EXPECT_EQ(p.split, Split::dev);
  for (const auto& p : a.test) EXPECT_EQ(p.split, Split::test);
}

TEST(SplitDataset, FixedSeedGivesAFixedOrder) {
  // Guards the portable shuffle: this must not change across toolchains.
  const auto s = split_dataset(numbered(10), {}, 0);
  std::vector<std::string> order;
  for (const auto* part : {&s.train, &s.dev, &s.test})
    for (const auto& p : *part) order.push_back(p.reference.substr(4));
  EXPECT_EQ(order, (std::vector<std::string>{"7", "2", "0", "8", "3", "9", "6", "1", "5", "4"}));
}

TEST(Dedup, RemovesLaterDuplicates) {
  std::vector<SentencePair> v{pair("a", "b", 0), pair("a", "b", 1), pair("b", "a", 0), pair("a", "b", 0)};
  EXPECT_EQ(dedup_exact(v), 2u);
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].score, 0.0);
}

TEST(PairsTsv, RoundTripWithEscapes) {
  std::vector<SentencePair> pairs{{"tab\there", "new\nline", 0.25, Source::wmt, Split::dev},
                                  {"back\\slash", "plain", 1.0, Source::nan_nli, Split::train},
                                  {"x", "y", -0.125, Source::other, Split::unassigned}};
  std::stringstream ss;
  write_pairs_tsv(ss, pairs);
  EXPECT_EQ(read_pairs_tsv(ss), pairs);
}

TEST(PairsTsv, BadRows) {
  std::stringstream short_row("a\tb\n");
  EXPECT_THROW((void)read_pairs_tsv(short_row), ParseError);
  std::stringstream bad_score("a\tb\tzero\n");
  EXPECT_THROW((void)read_pairs_tsv(bad_score), ParseError);
  std::stringstream bad_source("a\tb\t0\tnowhere\n");
  EXPECT_THROW((void)read_pairs_tsv(bad_source), ParseError);
}
