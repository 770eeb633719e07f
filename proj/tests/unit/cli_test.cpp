#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "negforge/dataset.hpp"
#include "negforge/subprocess.hpp"
#include "oracle_values.hpp"

using namespace negforge;

namespace {

const std::string kCli = NEGFORGE_CLI;
const std::string kFixtures = NEGFORGE_FIXTURES;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& input = "") {
  Subprocess p(kCli + " " + args + " 2>/dev/null");
  p.write(input);
  p.close_stdin();
  Run r;
  r.out = p.drain(Subprocess::Clock::now() + std::chrono::seconds(60)).value_or("<timeout>");
  const int status = p.terminate();
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("negforge_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(CliNegate, PreferContractions) {
  const auto r = run("negate --prefer-contractions", "I will be there.\n");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "I won't be there.\n");
  EXPECT_EQ(run("negate --no-contractions", "I enjoyed it so much.\n").out, "I did not enjoy it so much.\n");
}

TEST(CliNegate, UnknownFlagIsUsageError) { EXPECT_EQ(run("negate --bogus", "").code, 1); }

TEST(CliNegate, MissingSubcommandIsUsageError) { EXPECT_EQ(run("", "").code, 1); }

TEST(CliNegate, ErrorMarkersAndStrict) {
  const auto lax = run("negate", "Wow !\nI will be there.\n");
  EXPECT_EQ(lax.code, 0);
  EXPECT_EQ(lax.out.rfind("ERROR:", 0), 0u);
  EXPECT_NE(lax.out.find("\nI won't be there.\n"), std::string::npos);
  EXPECT_EQ(run("negate --strict", "Wow !\n").code, 2);
}

TEST(CliNegate, OneLinePerInputInOrderWithJobs) {
  std::string input;
  std::string expected;
  const std::pair<const char*, const char*> rows[] = {{"I will be there.", "I won't be there."},
                                                      {"Wow !", nullptr},
                                                      {"She likes tea.", "She doesn't like tea."},
                                                      {"I'm very hungry.", "I'm not very hungry."},
                                                      {"", nullptr},
                                                      {"He won't come.", "He will come."}};
  for (int rep = 0; rep < 7; ++rep)
    for (const auto& [in, out] : rows) {
      input += std::string(in) + "\n";
      expected += out ? std::string(out) + "\n" : std::string("ERROR:");
    }
  const auto serial = run("negate --jobs 1", input);
  const auto parallel = run("negate --jobs 4", input);
  EXPECT_EQ(serial.out, parallel.out);
  std::size_t lines = std::count(parallel.out.begin(), parallel.out.end(), '\n');
  EXPECT_EQ(lines, 42u);
}

TEST(CliNegate, TsvFormatAndParsers) {
  EXPECT_EQ(run("negate --format tsv", "I will be there.\n").out,
            "input\toutput\tbranch\nI will be there.\tI won't be there.\t4\n");
  const auto conllu = run("negate --parser conllu --conllu-file " + kFixtures + "/conllu/ud_style.conllu",
                          "She does not like tea.\n");
  EXPECT_EQ(conllu.out, "She likes tea.\n");
  const auto ext = run("negate --jobs 2 --parser external-cmd --external-parser-cmd '" + std::string(NEGFORGE_TESTKIT) +
                           " parse'",
                       "I will be there.\nHe does not run.\nWow !\n");
  EXPECT_EQ(ext.code, 0);
  EXPECT_NE(ext.out.find("I won't be there.\nHe runs.\n"), std::string::npos);
  EXPECT_EQ(run("negate --parser external-cmd", "x\n").code, 1);
}

TEST(CliBuildAndSplit, WritesBundle) {
  const auto dir = scratch("build");
  const auto r = run("build-dataset --config " + kFixtures + "/build/build.json --output " + dir.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(dataset::read_pairs_tsv_file((dir / "train.tsv").string()).size(), 27u);
  std::ifstream rep(dir / "report.json");
  EXPECT_EQ(nlohmann::json::parse(rep)["splits"]["test"], 2);

  const auto ex = scratch("build_ex");
  ASSERT_EQ(run("build-dataset --exclude wiki_factcheck --config " + kFixtures + "/build/build.json --output " +
                ex.string())
                .code,
            0);
  EXPECT_EQ(run("build-dataset --exclude nope --config " + kFixtures + "/build/build.json --output " + ex.string())
                .code,
            1);

  const auto sp = scratch("split");
  ASSERT_EQ(run("split --seed 3 --input " + (dir / "train.tsv").string() + " --output " + sp.string()).code, 0);
  EXPECT_EQ(dataset::read_pairs_tsv_file((sp / "test.tsv").string()).size(), 2u);
  EXPECT_EQ(run("split --ratios 50:50:50 --input " + (dir / "train.tsv").string() + " --output " + sp.string()).code,
            1);
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(ex);
  std::filesystem::remove_all(sp);
}

TEST(CliBuild, MissingSourceIsDataError) {
  const auto dir = scratch("missing");
  std::ofstream(dir / "cfg.json") << R"({"sources": [{"name": "gone", "path": "gone.tsv"}]})";
  EXPECT_EQ(run("build-dataset --config " + (dir / "cfg.json").string() + " --output " + (dir / "out").string()).code,
            2);
  std::filesystem::remove_all(dir);
}

TEST(CliEvaluate, SpearmanAgainstGold) {
  const auto dir = scratch("eval");
  std::vector<dataset::SentencePair> rows;
  for (const auto& r : oracle::kTestset) rows.push_back({r.reference, r.candidate, r.gold});
  dataset::write_pairs_tsv_file((dir / "test.tsv").string(), rows);
  const auto builtin = run("evaluate --metric-cmd builtin:jaccard --input " + (dir / "test.tsv").string());
  EXPECT_EQ(builtin.code, 0);
  EXPECT_EQ(builtin.out, "spearman\t" + dataset::format_score(oracle::kTestsetSpearman) + "\n");
  const auto adapter = run("evaluate --jobs 2 --metric-cmd '" + std::string(NEGFORGE_TESTKIT) +
                           " adapter --strategy jaccard' --input " + (dir / "test.tsv").string());
  EXPECT_EQ(adapter.out, builtin.out);
  const auto broken = run("evaluate --timeout 1 --metric-cmd '" + std::string(NEGFORGE_TESTKIT) +
                          " adapter --no-handshake' --input " + (dir / "test.tsv").string());
  EXPECT_EQ(broken.code, 3);
  const auto faulty = run("evaluate --metric-cmd '" + std::string(NEGFORGE_TESTKIT) +
                          " adapter --error-every 2' --input " + (dir / "test.tsv").string());
  EXPECT_EQ(faulty.code, 3);
  std::filesystem::remove_all(dir);
}

TEST(CliSensitivity, CsvReport) {
  const auto dir = scratch("sens");
  std::vector<dataset::SentencePair> rows;
  for (const char* s : {"I will be there.", "She likes green tea.", "We can go home early."})
    rows.push_back({s, s, 1.0});
  dataset::write_pairs_tsv_file((dir / "corpus.tsv").string(), rows);
  const auto r = run("sensitivity --metric-cmd builtin:exact --perturbation word_drop --perturbation negation "
                     "--degrees 1,2 --summary " +
                     (dir / "summary.json").string() + " --input " + (dir / "corpus.tsv").string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "kind,degree,item_count,mean_raw_difference,normalized_score\n"
            "word_drop,1,3,1,1\nword_drop,2,3,1,1\nnegation,1,3,1,1\n");
  std::ifstream summary(dir / "summary.json");
  EXPECT_EQ(nlohmann::json::parse(summary)["cells"].size(), 3u);
  EXPECT_EQ(run("sensitivity --degrees 0 --input " + (dir / "corpus.tsv").string()).code, 1);
  EXPECT_EQ(run("sensitivity --perturbation shuffle --input " + (dir / "corpus.tsv").string()).code, 1);
  const auto a = run("sensitivity --seed 4 --format tsv --input " + (dir / "corpus.tsv").string());
  const auto b = run("sensitivity --seed 4 --format tsv --input " + (dir / "corpus.tsv").string());
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("word_swap\t1\t"), std::string::npos);
  std::filesystem::remove_all(dir);
}
