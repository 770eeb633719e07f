#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace negforge {

class Subprocess;

struct ScorePair {
  std::string reference;
  std::string candidate;
};

struct ItemError {
  std::size_t index = 0;
  std::string reason;
};

struct ScoreResult {
  std::vector<std::optional<double>> scores;  // one slot per input pair
  std::vector<ItemError> errors;

  [[nodiscard]] double error_fraction() const {
    return scores.empty() ? 0.0 : static_cast<double>(errors.size()) / static_cast<double>(scores.size());
  }
};

// Scores (reference, candidate) pairs. Implementations report per-item
// failures in the result rather than throwing; a Scorer instance is used by
// one thread at a time.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual ScoreResult score(const std::vector<ScorePair>& pairs) = 0;
};

class ExactMatchScorer : public Scorer {
 public:
  ScoreResult score(const std::vector<ScorePair>& pairs) override;
};

// Jaccard over whitespace tokens.
class JaccardScorer : public Scorer {
 public:
  ScoreResult score(const std::vector<ScorePair>& pairs) override;
};

class FunctionScorer : public Scorer {
 public:
  explicit FunctionScorer(std::function<double(const ScorePair&)> fn) : fn_(std::move(fn)) {}
  ScoreResult score(const std::vector<ScorePair>& pairs) override;

 private:
  std::function<double(const ScorePair&)> fn_;
};

struct AdapterOptions {
  std::chrono::milliseconds timeout = std::chrono::seconds(60);  // per batch, and for the handshake
  std::size_t batch_size = 256;
};

// External scorer speaking the line-delimited JSON protocol:
//   -> {"cmd":"ping"}                       <- {"ok":true}
//   -> {"id":..,"reference":..,"candidate":..}  <- {"id":..,"score":..}
// Responses may come in any order. A batch that times out restarts the
// process before the next batch.
class ProcessAdapter : public Scorer {
 public:
  explicit ProcessAdapter(std::string command, AdapterOptions options = {});
  ~ProcessAdapter() override;

  ScoreResult score(const std::vector<ScorePair>& pairs) override;

 private:
  void start();
  void score_batch(const std::vector<ScorePair>& pairs, std::size_t begin, std::size_t end, ScoreResult& out);

  std::string command_;
  AdapterOptions options_;
  std::unique_ptr<Subprocess> process_;
  unsigned long long next_id_ = 0;
};

using ScorerFactory = std::function<std::unique_ptr<Scorer>()>;

// "builtin:exact" and "builtin:jaccard" name the in-process scorers; any
// other string is a shell command for ProcessAdapter.
ScorerFactory make_scorer_factory(const std::string& spec, AdapterOptions options = {});

// Scores with `jobs` scorer instances on disjoint contiguous shards. Throws
// AdapterError when the error fraction exceeds max_error_fraction.
ScoreResult score_pairs(const ScorerFactory& factory, const std::vector<ScorePair>& pairs, unsigned jobs = 1,
                        double max_error_fraction = 0.0);
ScoreResult score_pairs(Scorer& scorer, const std::vector<ScorePair>& pairs, double max_error_fraction = 0.0);

}  // namespace negforge
