#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace negforge::dataset {

enum class Source { nan_nli, wiki_factcheck, glue_diag, sentiment, wmt, other };
enum class Split { train, dev, test, unassigned };

const char* to_string(Source s);
const char* to_string(Split s);
Source source_from_string(std::string_view name);
Split split_from_string(std::string_view name);

struct SentencePair {
  std::string reference;
  std::string candidate;
  double score = 0.0;
  Source source = Source::other;
  Split split = Split::unassigned;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

inline constexpr std::size_t kSentimentMaxWords = 33;

struct FilterConfig {
  double min_jaccard = 0.55;
  std::size_t max_length_diff_words = 3;  // a difference of 4 or more is dropped
  std::optional<std::size_t> max_words;   // sentence gate, off unless set
  bool require_auxiliary = false;         // sentence gate
  double wmt_min_score_exclusive = -1.0;
  bool dedup_exact = false;

  // Throws InvalidArgument on out-of-range values.
  void validate() const;
};

std::vector<std::string> whitespace_tokenize(std::string_view text);
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);
bool filter_pair(const SentencePair& pair, const FilterConfig& cfg);

// Maps a sentence to its negated form; throws on failure.
using NegateFn = std::function<std::string(const std::string&)>;
// Returns true when the sentence has an auxiliary verb.
using AuxiliaryFn = std::function<bool(const std::string&)>;

struct NegationReport {
  std::size_t input = 0;
  std::size_t gated_length = 0;
  std::size_t gated_auxiliary = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // sentence, reason
  std::size_t produced = 0;
};

std::vector<SentencePair> build_negated_pairs(const std::vector<std::string>& sentences, const FilterConfig& cfg,
                                              const NegateFn& negate, const AuxiliaryFn& has_auxiliary,
                                              Source source = Source::other, NegationReport* report = nullptr,
                                              unsigned jobs = 1);
// Uses the builtin parser and negator with contractions on.
std::vector<SentencePair> build_negated_pairs(const std::vector<std::string>& sentences, const FilterConfig& cfg,
                                              Source source = Source::other, NegationReport* report = nullptr,
                                              unsigned jobs = 1);

enum class MissingParaphrase { error, skip };

struct ParaphraseReport {
  std::size_t attached = 0;
  std::size_t missing = 0;
};

using ParaphraseMap = std::map<std::string, std::string, std::less<>>;

// Appends (reference, paraphrase, 1) once per distinct reference, in order of
// first appearance.
std::vector<SentencePair> attach_paraphrases(const std::vector<SentencePair>& pairs, const ParaphraseMap& paraphrases,
                                             MissingParaphrase policy = MissingParaphrase::error,
                                             ParaphraseReport* report = nullptr);

std::vector<SentencePair> swap_augment(const std::vector<SentencePair>& pairs);

struct WmtRecord {
  std::string reference;
  std::string candidate;
  std::string score;  // raw field text
};

struct WmtReport {
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::vector<std::pair<std::size_t, std::string>> rejected;  // record index, reason
};

std::vector<SentencePair> merge_wmt(const std::vector<WmtRecord>& records, const FilterConfig& cfg,
                                    WmtReport* report = nullptr);

// Removes later duplicates of an identical (reference, candidate) pair.
// Returns the number removed.
std::size_t dedup_exact(std::vector<SentencePair>& pairs);

struct SplitRatios {
  unsigned train = 80;
  unsigned dev = 10;
  unsigned test = 10;
};

struct SplitResult {
  std::vector<SentencePair> train;
  std::vector<SentencePair> dev;
  std::vector<SentencePair> test;
};

// Seeded shuffle, then contiguous slices. dev and test get floor(n * r / 100)
// items each and train takes the rest.
SplitResult split_dataset(std::vector<SentencePair> pairs, SplitRatios ratios = {}, std::uint64_t seed = 0);

// TSV with columns reference, candidate, score, source, split. Tabs,
// newlines and backslashes inside fields are backslash-escaped.
void write_pairs_tsv(std::ostream& out, const std::vector<SentencePair>& pairs, bool header = true);
std::vector<SentencePair> read_pairs_tsv(std::istream& in);
std::vector<SentencePair> read_pairs_tsv_file(const std::string& path);
void write_pairs_tsv_file(const std::string& path, const std::vector<SentencePair>& pairs);

std::string escape_field(std::string_view field);
std::string unescape_field(std::string_view field);
std::vector<std::string> split_tsv_line(std::string_view line);
std::string format_score(double score);

}  // namespace negforge::dataset
