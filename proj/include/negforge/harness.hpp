#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "negforge/dataset.hpp"
#include "negforge/negator.hpp"
#include "negforge/scoring.hpp"

namespace negforge::harness {

// Average ranks (ties share the mean of their positions), 1-based.
std::vector<double> average_ranks(const std::vector<double>& values);

// Pearson correlation of average ranks. Throws InvalidArgument on length
// mismatch, fewer than two items, or a constant input.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

enum class Perturbation { word_swap, word_drop, repetition, negation };

const char* to_string(Perturbation p);
Perturbation perturbation_from_string(std::string_view name);

struct PerturbOptions {
  bool content_words_only = false;  // word_drop: only drop open-class words
  NegatorOptions negator{};
};

struct Perturbed {
  std::string text;
  std::size_t requested = 0;
  std::size_t applied = 0;
  [[nodiscard]] bool capped() const noexcept { return applied < requested; }
};

// Deterministic in (candidate, kind, degree, seed). Degree 0, or a negation
// degree other than 1, is an InvalidArgument. Throws Error when nothing can
// be changed or the negator fails.
Perturbed perturb(std::string_view candidate, Perturbation kind, std::size_t degree, std::uint64_t seed,
                  const PerturbOptions& options = {});

struct SensitivityCell {
  Perturbation kind = Perturbation::word_swap;
  std::size_t degree = 1;
  std::size_t item_count = 0;
  double mean_raw_difference = 0.0;
  double normalized_score = 0.0;
  std::size_t capped = 0;   // items where fewer edits than requested were possible
  std::size_t skipped = 0;  // perturbation or scoring failures
};

struct SensitivityReport {
  std::vector<SensitivityCell> cells;  // cells without items are left out
  double score_min = 0.0;
  double score_max = 0.0;
  std::size_t corpus_size = 0;
  std::optional<double> spearman_vs_labels;
  std::vector<std::string> notes;

  [[nodiscard]] const SensitivityCell* find(Perturbation kind, std::size_t degree) const;
  [[nodiscard]] std::string to_json() const;
};

struct SensitivityOptions {
  std::vector<Perturbation> kinds{Perturbation::word_swap, Perturbation::word_drop, Perturbation::repetition,
                                  Perturbation::negation};
  std::vector<std::size_t> degrees{1, 2, 3};  // negation always runs at degree 1 only
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  double max_error_fraction = 0.0;
  PerturbOptions perturb{};
  std::optional<std::vector<double>> labels;  // gold scores, one per corpus item
};

// Scores each original and perturbed pair. mean_raw_difference averages
// score(ref, cand) - score(ref, perturbed); normalized_score divides it by the
// spread (max - min) of every score observed in the run.
SensitivityReport sensitivity(const ScorerFactory& scorer, const std::vector<ScorePair>& corpus,
                              const SensitivityOptions& options = {});

// Spearman between metric scores and gold scores over successfully scored
// rows.
double evaluate_testset(const ScorerFactory& scorer, const std::vector<dataset::SentencePair>& rows, unsigned jobs = 1,
                        double max_error_fraction = 0.0);
double evaluate_testset(const ScorerFactory& scorer, const std::string& tsv_path, unsigned jobs = 1,
                        double max_error_fraction = 0.0);

// kind, degree, item_count, mean_raw_difference, normalized_score
void write_report_table(std::ostream& out, const SensitivityReport& report, char delimiter = ',');

}  // namespace negforge::harness
