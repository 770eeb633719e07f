#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "negforge/dataset.hpp"

namespace negforge::dataset {

enum class SourceMode { pairs, negate, wmt };
enum class SourceFormat { tsv, jsonl };

// Column reference: a header name, or a 0-based index for header-less TSV.
using Column = std::variant<std::string, std::size_t>;

struct SourceSpec {
  std::string name;
  Source tag = Source::other;
  std::string path;  // resolved against the config file's directory
  SourceFormat format = SourceFormat::tsv;
  bool header = true;
  SourceMode mode = SourceMode::pairs;
  std::optional<Column> reference;
  std::optional<Column> candidate;
  std::optional<Column> label;
  std::optional<Column> score;
  std::vector<std::string> label_filter;  // keep rows whose label is listed
  bool similarity_filter = true;          // pairs mode
  std::optional<std::size_t> max_words;   // negate mode gate
  bool require_auxiliary = false;         // negate mode gate
};

struct BuildConfig {
  std::vector<SourceSpec> sources;
  std::string paraphrase_path;  // TSV: reference, paraphrase
  MissingParaphrase missing_paraphrase = MissingParaphrase::error;
  FilterConfig filter;
  std::uint64_t seed = 0;
  std::vector<std::string> exclude;  // source names left out (ablation)
  // With exclusions, still build and split everything, then drop excluded
  // pairs from train and dev only, so ablations share one test set.
  bool ablation_preserve_test = false;
  unsigned jobs = 1;

  static BuildConfig from_json_text(const std::string& text, const std::string& base_dir = ".");
  static BuildConfig from_file(const std::string& path);
};

struct SourceReport {
  std::string name;
  std::string mode;
  bool excluded = false;
  std::size_t records_read = 0;
  std::size_t label_filtered = 0;
  std::size_t similarity_dropped = 0;
  std::size_t gated_length = 0;
  std::size_t gated_auxiliary = 0;
  std::size_t negation_failed = 0;
  std::size_t negated_pairs = 0;
  std::size_t paraphrases_attached = 0;
  std::size_t paraphrases_missing = 0;
  std::size_t wmt_kept = 0;
  std::size_t wmt_dropped = 0;
  std::size_t wmt_rejected = 0;
  std::size_t output_pairs = 0;
};

struct BuildReport {
  std::vector<SourceReport> sources;
  std::size_t dedup_removed = 0;
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
  std::size_t wmt_pairs = 0;
  std::size_t negation_pairs = 0;
  std::uint64_t seed = 0;

  [[nodiscard]] const SourceReport* find(const std::string& name) const;
  [[nodiscard]] std::string to_json() const;
};

struct DatasetBundle {
  SplitResult splits;
  BuildReport report;
};

// Missing source files raise an Error naming the source.
DatasetBundle build_cannot_wmt(const BuildConfig& config);

// Writes train.tsv, dev.tsv, test.tsv and report.json into `dir`.
void write_bundle(const std::string& dir, const DatasetBundle& bundle);

ParaphraseMap read_paraphrases(const std::string& path);

}  // namespace negforge::dataset
