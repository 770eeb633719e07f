#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "negforge/dataset.hpp"
#include "negforge/error.hpp"
#include "negforge/harness.hpp"
#include "oracle_values.hpp"

using namespace negforge;
using namespace negforge::harness;

namespace {

const std::string kAdapter = std::string(NEGFORGE_TESTKIT) + " adapter";

std::vector<ScorePair> identity_corpus() {
  std::vector<ScorePair> c;
  for (const char* s : {"I will be there.", "She likes green tea a lot.", "They are very happy today.",
                        "The dog barked at the mailman.", "We can go home early."})
    c.push_back({s, s});
  return c;
}

std::vector<dataset::SentencePair> testset_rows() {
  std::vector<dataset::SentencePair> rows;
  for (const auto& r : oracle::kTestset) rows.push_back({r.reference, r.candidate, r.gold});
  return rows;
}

}  // namespace

TEST(Spearman, Examples) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(spearman({1, 2, 2, 4}, {1, 3, 2, 4}), oracle::kSpearmanTies, 1e-12);
}

TEST(Spearman, Errors) {
  EXPECT_THROW((void)spearman({1, 2}, {1, 2, 3}), InvalidArgument);
  EXPECT_THROW((void)spearman({1}, {1}), InvalidArgument);
  EXPECT_THROW((void)spearman({2, 2, 2}, {1, 2, 3}), InvalidArgument);
  EXPECT_THROW((void)spearman({1, 2, 3}, {5, 5, 5}), InvalidArgument);
}

TEST(Spearman, AverageRanks) {
  EXPECT_EQ(average_ranks({10, 20, 20, 40}), (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_EQ(average_ranks({3, 1, 3, 3}), (std::vector<double>{3, 1, 3, 3}));
}

TEST(Spearman, MonotoneInvarianceAndSelfCorrelation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(20), y(20);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = std::round(u(rng));  // ties
    std::vector<double> lin, cube;
    for (double v : x) {
      lin.push_back(2 * v + 1);
      cube.push_back(v * v * v);
    }
    const double base = spearman(x, y);
    EXPECT_NEAR(spearman(lin, y), base, 1e-12);
    EXPECT_NEAR(spearman(cube, y), base, 1e-12);
    EXPECT_NEAR(spearman(x, x), 1.0, 1e-12);
    EXPECT_NEAR(spearman(x, y), spearman(y, x), 1e-12);
  }
}

TEST(Perturb, RepetitionEnumeration) {
  const std::set<std::string> allowed{"a a b c", "a b b c", "a b c c"};
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto p = perturb("a b c", Perturbation::repetition, 1, seed);
    EXPECT_TRUE(allowed.count(p.text)) << p.text;
    EXPECT_EQ(p.text, perturb("a b c", Perturbation::repetition, 1, seed).text);
    seen.insert(p.text);
  }
  EXPECT_EQ(seen, allowed);
}

TEST(Perturb, WordDropIsCapped) {
  const auto p = perturb("a b c d", Perturbation::word_drop, 4, 1);
  EXPECT_EQ(dataset::whitespace_tokenize(p.text).size(), 1u);
  EXPECT_TRUE(p.capped());
  EXPECT_EQ(p.applied, 3u);
  EXPECT_THROW((void)perturb("alone", Perturbation::word_drop, 1, 1), Error);
}

TEST(Perturb, ContentWordOnlyDrop) {
  PerturbOptions o;
  o.content_words_only = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = perturb("the cat sat on the mat", Perturbation::word_drop, 1, seed, o);
    const auto w = dataset::whitespace_tokenize(p.text);
    EXPECT_EQ(std::count(w.begin(), w.end(), "the"), 2);
    EXPECT_EQ(std::count(w.begin(), w.end(), "on"), 1);
  }
}

TEST(Perturb, WordSwapUsesDisjointAdjacentPairs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = perturb("a b c d e f", Perturbation::word_swap, 2, seed);
    EXPECT_EQ(p.applied, 2u);
    const auto w = dataset::whitespace_tokenize(p.text);
    std::size_t moved = 0;
    const std::vector<std::string> orig{"a", "b", "c", "d", "e", "f"};
    for (std::size_t i = 0; i < w.size(); ++i) moved += w[i] != orig[i];
    EXPECT_EQ(moved, 4u) << p.text;
  }
  const auto capped = perturb("a b c", Perturbation::word_swap, 5, 1);
  EXPECT_EQ(capped.applied, 1u);
  EXPECT_THROW((void)perturb("same same", Perturbation::word_swap, 1, 1), Error);
}

TEST(Perturb, Negation) {
  EXPECT_EQ(perturb("Ray Charles is legendary.", Perturbation::negation, 1, 0).text, "Ray Charles isn't legendary.");
  EXPECT_THROW((void)perturb("Ray Charles is legendary.", Perturbation::negation, 2, 0), InvalidArgument);
  EXPECT_THROW((void)perturb("Wow !", Perturbation::negation, 1, 0), Error);
}

TEST(Perturb, DegreeZeroIsInvalid) {
  for (auto k : {Perturbation::word_swap, Perturbation::word_drop, Perturbation::repetition, Perturbation::negation})
    EXPECT_THROW((void)perturb("a b c", k, 0, 0), InvalidArgument);
}

TEST(Sensitivity, ExactMatchOnIdentityCorpus) {
  SensitivityOptions o;
  o.degrees = {1, 2, 3};
  const auto rep = sensitivity(make_scorer_factory("builtin:exact"), identity_corpus(), o);
  EXPECT_EQ(rep.cells.size(), 10u);
  for (const auto& c : rep.cells) {
    EXPECT_EQ(c.mean_raw_difference, 1.0) << to_string(c.kind) << c.degree;
    EXPECT_EQ(c.normalized_score, c.mean_raw_difference);
    EXPECT_GT(c.item_count, 0u);
    EXPECT_LE(c.item_count, identity_corpus().size());
  }
}

TEST(Sensitivity, DegreeZeroAndEmptyCorpus) {
  SensitivityOptions o;
  o.degrees = {0};
  EXPECT_THROW((void)sensitivity(make_scorer_factory("builtin:exact"), identity_corpus(), o), InvalidArgument);
  EXPECT_THROW((void)sensitivity(make_scorer_factory("builtin:exact"), {}, {}), InvalidArgument);
}

TEST(Sensitivity, JaccardRepetitionFixture) {
  // Repetition never changes a word set, so every Jaccard difference is 0.
  const std::vector<ScorePair> corpus{
      {"the cat sat", "the cat ran"}, {"a dog barked loudly", "a dog barked"}, {"we went home", "we went home"}};
  SensitivityOptions o;
  o.kinds = {Perturbation::repetition};
  o.degrees = {1};
  const auto rep = sensitivity(make_scorer_factory("builtin:jaccard"), corpus, o);
  ASSERT_EQ(rep.cells.size(), 1u);
  EXPECT_EQ(rep.cells[0].item_count, 3u);
  EXPECT_EQ(rep.cells[0].mean_raw_difference, 0.0);
}

TEST(Sensitivity, ThroughTheAdapterMatchesInProcess) {
  SensitivityOptions o;
  o.seed = 9;
  o.jobs = 2;
  const auto local = sensitivity(make_scorer_factory("builtin:jaccard"), identity_corpus(), o);
  const auto remote = sensitivity(make_scorer_factory(kAdapter + " --strategy jaccard --shuffle"), identity_corpus(), o);
  ASSERT_EQ(local.cells.size(), remote.cells.size());
  for (std::size_t i = 0; i < local.cells.size(); ++i) {
    EXPECT_EQ(local.cells[i].mean_raw_difference, remote.cells[i].mean_raw_difference);
    EXPECT_EQ(local.cells[i].item_count, remote.cells[i].item_count);
  }
}

TEST(Sensitivity, FailedPerturbationsAreExcluded) {
  const std::vector<ScorePair> corpus{{"Wow !", "Wow !"}, {"I will be there.", "I will be there."}};
  SensitivityOptions o;
  o.kinds = {Perturbation::negation};
  const auto rep = sensitivity(make_scorer_factory("builtin:exact"), corpus, o);
  ASSERT_EQ(rep.cells.size(), 1u);
  EXPECT_EQ(rep.cells[0].item_count, 1u);
  EXPECT_EQ(rep.cells[0].skipped, 1u);
}

TEST(Sensitivity, LabelsCorrelation) {
  std::vector<ScorePair> corpus;
  std::vector<double> labels;
  for (const auto& r : oracle::kTestset) {
    corpus.push_back({r.reference, r.candidate});
    labels.push_back(r.gold);
  }
  SensitivityOptions o;
  o.kinds = {Perturbation::repetition};
  o.degrees = {1};
  o.labels = labels;
  const auto rep = sensitivity(make_scorer_factory("builtin:jaccard"), corpus, o);
  ASSERT_TRUE(rep.spearman_vs_labels);
  EXPECT_NEAR(*rep.spearman_vs_labels, oracle::kTestsetSpearman, 1e-12);
}

TEST(EvaluateTestset, EchoAndReversedGold) {
  const auto rows = testset_rows();
  std::map<std::pair<std::string, std::string>, double> gold;
  for (const auto& r : rows) gold[{r.reference, r.candidate}] = r.score;
  const ScorerFactory echo = [&] {
    return std::make_unique<FunctionScorer>([&](const ScorePair& p) { return gold.at({p.reference, p.candidate}); });
  };
  const ScorerFactory reversed = [&] {
    return std::make_unique<FunctionScorer>([&](const ScorePair& p) { return -gold.at({p.reference, p.candidate}); });
  };
  EXPECT_DOUBLE_EQ(evaluate_testset(echo, rows), 1.0);
  EXPECT_DOUBLE_EQ(evaluate_testset(reversed, rows), -1.0);
}

TEST(EvaluateTestset, JaccardFixtureMatchesOracle) {
  EXPECT_NEAR(evaluate_testset(make_scorer_factory("builtin:jaccard"), testset_rows()), oracle::kTestsetSpearman, 1e-12);
  EXPECT_NEAR(evaluate_testset(make_scorer_factory(kAdapter + " --strategy jaccard"), testset_rows(), 2),
              oracle::kTestsetSpearman, 1e-12);
}

TEST(Report, CsvAndTsv) {
  SensitivityReport r;
  r.cells.push_back({Perturbation::word_drop, 2, 5, 0.5, 0.25, 0, 0});
  std::stringstream csv, tsv;
  write_report_table(csv, r);
  write_report_table(tsv, r, '\t');
  EXPECT_EQ(csv.str(), "kind,degree,item_count,mean_raw_difference,normalized_score\nword_drop,2,5,0.5,0.25\n");
  EXPECT_EQ(tsv.str(), "kind\tdegree\titem_count\tmean_raw_difference\tnormalized_score\nword_drop\t2\t5\t0.5\t0.25\n");
}
