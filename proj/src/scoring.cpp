#include "negforge/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <thread>

#include "json.hpp"
#include "negforge/dataset.hpp"
#include "negforge/error.hpp"
#include "negforge/subprocess.hpp"

namespace negforge {

using nlohmann::json;

ScoreResult ExactMatchScorer::score(const std::vector<ScorePair>& pairs) {
  ScoreResult r;
  r.scores.reserve(pairs.size());
  for (const auto& p : pairs) r.scores.emplace_back(p.reference == p.candidate ? 1.0 : 0.0);
  return r;
}

ScoreResult JaccardScorer::score(const std::vector<ScorePair>& pairs) {
  ScoreResult r;
  r.scores.reserve(pairs.size());
  for (const auto& p : pairs)
    r.scores.emplace_back(
        dataset::jaccard(dataset::whitespace_tokenize(p.reference), dataset::whitespace_tokenize(p.candidate)));
  return r;
}

ScoreResult FunctionScorer::score(const std::vector<ScorePair>& pairs) {
  ScoreResult r;
  r.scores.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      const double v = fn_(pairs[i]);
      if (std::isfinite(v)) {
        r.scores[i] = v;
      } else {
        r.errors.push_back({i, "non-finite score"});
      }
    } catch (const std::exception& e) {
      r.errors.push_back({i, e.what()});
    }
  }
  return r;
}

ProcessAdapter::ProcessAdapter(std::string command, AdapterOptions options)
    : command_(std::move(command)), options_(options) {
  if (options_.batch_size == 0) throw InvalidArgument("adapter batch size must be positive");
  start();
}

ProcessAdapter::~ProcessAdapter() = default;

void ProcessAdapter::start() {
  process_ = std::make_unique<Subprocess>(command_);
  process_->write(R"({"cmd":"ping"})"
                  "\n");
  const auto line = process_->read_line(Subprocess::Clock::now() + options_.timeout);
  if (!line) {
    process_.reset();
    throw AdapterError("adapter did not answer the handshake: " + command_);
  }
  const auto reply = json::parse(*line, nullptr, false);
  if (!reply.is_object() || !reply.contains("ok") || reply["ok"] != true) {
    process_.reset();
    throw AdapterError("bad handshake reply '" + *line + "' from " + command_);
  }
}

void ProcessAdapter::score_batch(const std::vector<ScorePair>& pairs, std::size_t begin, std::size_t end,
                                 ScoreResult& out) {
  if (!process_) start();
  std::map<std::string, std::size_t> pending;
  std::string payload;
  for (std::size_t i = begin; i < end; ++i) {
    std::string id = std::to_string(next_id_++);
    payload += json{{"id", id}, {"reference", pairs[i].reference}, {"candidate", pairs[i].candidate}}.dump();
    payload += '\n';
    pending.emplace(std::move(id), i);
  }
  process_->write(payload);

  const auto deadline = Subprocess::Clock::now() + options_.timeout;
  while (!pending.empty()) {
    const auto line = process_->read_line(deadline);
    if (!line) break;
    if (line->empty()) continue;
    const auto msg = json::parse(*line, nullptr, false);
    if (!msg.is_object()) {
      // Salvage the id, if any, so the item fails now instead of timing out.
      static const std::regex id_field(R"re("id"\s*:\s*"([^"]*)")re");
      std::smatch m;
      if (std::regex_search(*line, m, id_field)) {
        if (const auto it = pending.find(m[1].str()); it != pending.end()) {
          out.errors.push_back({it->second, "malformed response line"});
          pending.erase(it);
        }
      }
      continue;
    }
    if (!msg.contains("id")) continue;  // its item fails when the batch deadline passes
    const auto& jid = msg["id"];
    const std::string id = jid.is_string() ? jid.get<std::string>() : jid.dump();
    const auto it = pending.find(id);
    if (it == pending.end()) continue;  // stale or unknown id
    const std::size_t index = it->second;
    pending.erase(it);
    if (msg.contains("error")) {
      const auto& e = msg["error"];
      out.errors.push_back({index, "adapter error: " + (e.is_string() ? e.get<std::string>() : e.dump())});
    } else if (!msg.contains("score") || !msg["score"].is_number()) {
      out.errors.push_back({index, "response without numeric score"});
    } else if (const double v = msg["score"].get<double>(); !std::isfinite(v)) {
      out.errors.push_back({index, "non-finite score"});
    } else {
      out.scores[index] = v;
    }
  }
  if (pending.empty()) return;
  const std::string reason = process_->output_closed() ? "adapter exited before responding" : "adapter timed out";
  for (const auto& [id, index] : pending) out.errors.push_back({index, reason});
  process_.reset();  // restarted for the next batch
}

ScoreResult ProcessAdapter::score(const std::vector<ScorePair>& pairs) {
  ScoreResult out;
  out.scores.resize(pairs.size());
  for (std::size_t b = 0; b < pairs.size(); b += options_.batch_size)
    score_batch(pairs, b, std::min(pairs.size(), b + options_.batch_size), out);
  std::sort(out.errors.begin(), out.errors.end(), [](const ItemError& a, const ItemError& b) { return a.index < b.index; });
  return out;
}

ScorerFactory make_scorer_factory(const std::string& spec, AdapterOptions options) {
  if (spec == "builtin:exact") return [] { return std::make_unique<ExactMatchScorer>(); };
  if (spec == "builtin:jaccard") return [] { return std::make_unique<JaccardScorer>(); };
  if (spec.empty()) throw InvalidArgument("empty metric command");
  return [spec, options] { return std::make_unique<ProcessAdapter>(spec, options); };
}

namespace {

void check_error_budget(const ScoreResult& r, double max_error_fraction) {
  if (r.errors.empty() || r.error_fraction() <= max_error_fraction) return;
  throw AdapterError(std::to_string(r.errors.size()) + " of " + std::to_string(r.scores.size()) +
                     " items failed (first: item " + std::to_string(r.errors.front().index) + ": " +
                     r.errors.front().reason + ")");
}

}  // namespace

ScoreResult score_pairs(Scorer& scorer, const std::vector<ScorePair>& pairs, double max_error_fraction) {
  auto r = scorer.score(pairs);
  if (r.scores.size() != pairs.size()) throw AdapterError("scorer returned a wrong number of scores");
  check_error_budget(r, max_error_fraction);
  return r;
}

ScoreResult score_pairs(const ScorerFactory& factory, const std::vector<ScorePair>& pairs, unsigned jobs,
                        double max_error_fraction) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(pairs.size(), 1))));
  if (jobs == 1) {
    auto scorer = factory();
    return score_pairs(*scorer, pairs, max_error_fraction);
  }
  const std::size_t chunk = (pairs.size() + jobs - 1) / jobs;
  std::vector<std::vector<ScorePair>> shards;
  for (std::size_t b = 0; b < pairs.size(); b += chunk)
    shards.emplace_back(pairs.begin() + static_cast<std::ptrdiff_t>(b),
                        pairs.begin() + static_cast<std::ptrdiff_t>(std::min(pairs.size(), b + chunk)));
  std::vector<ScoreResult> results(shards.size());
  std::vector<std::exception_ptr> failures(shards.size());
  std::vector<std::thread> pool;
  for (std::size_t s = 0; s < shards.size(); ++s) {
    pool.emplace_back([&, s] {
      try {
        auto scorer = factory();
        results[s] = scorer->score(shards[s]);
      } catch (...) {
        failures[s] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  ScoreResult merged;
  merged.scores.reserve(pairs.size());
  for (std::size_t s = 0; s < shards.size(); ++s) {
    if (results[s].scores.size() != shards[s].size()) throw AdapterError("scorer returned a wrong number of scores");
    for (const auto& e : results[s].errors) merged.errors.push_back({e.index + s * chunk, e.reason});
    merged.scores.insert(merged.scores.end(), results[s].scores.begin(), results[s].scores.end());
  }
  check_error_budget(merged, max_error_fraction);
  return merged;
}

}  // namespace negforge
