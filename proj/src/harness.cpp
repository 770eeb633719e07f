#include "negforge/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "negforge/error.hpp"
#include "negforge/parser_provider.hpp"
#include "negforge/rng.hpp"
#include "negforge/shallow_parser.hpp"

namespace negforge::harness {

using nlohmann::json;

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 (0-based) share rank mean((i+1)..j)
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("spearman: inputs differ in length");
  if (x.size() < 2) throw InvalidArgument("spearman: need at least two items");
  for (const auto* v : {&x, &y}) {
    if (std::any_of(v->begin(), v->end(), [](double d) { return std::isnan(d); }))
      throw InvalidArgument("spearman: NaN in input");
    if (std::all_of(v->begin(), v->end(), [&](double d) { return d == v->front(); }))
      throw InvalidArgument("spearman: constant input");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

constexpr std::pair<Perturbation, const char*> kKinds[] = {{Perturbation::word_swap, "word_swap"},
                                                           {Perturbation::word_drop, "word_drop"},
                                                           {Perturbation::repetition, "repetition"},
                                                           {Perturbation::negation, "negation"}};

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// k distinct indices out of `pool`, in pool order after a partial shuffle.
std::vector<std::size_t> sample(std::vector<std::size_t> pool, std::size_t k, SeededRng& rng) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

bool is_function_word(const std::string& word) {
  std::string w = morph::to_lower(word);
  while (!w.empty() && std::ispunct(static_cast<unsigned char>(w.back()))) w.pop_back();
  while (!w.empty() && std::ispunct(static_cast<unsigned char>(w.front()))) w.erase(0, 1);
  if (w.empty()) return true;
  const auto& lex = Lexicons::builtin();
  return lex.closed_class.count(w) || lex.pronouns.count(w) || lex.auxiliaries.count(w) || lex.negation_cues.count(w);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  // splitmix64 finalizer over the combined inputs
  std::uint64_t z = seed;
  for (std::uint64_t v : {a, b, c}) {
    z += 0x9E3779B97F4A7C15ULL + v;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
  }
  return z;
}

}  // namespace

const char* to_string(Perturbation p) {
  for (const auto& [k, name] : kKinds)
    if (k == p) return name;
  return "word_swap";
}

Perturbation perturbation_from_string(std::string_view name) {
  for (const auto& [k, n] : kKinds)
    if (name == n) return k;
  throw InvalidArgument("unknown perturbation: " + std::string(name));
}

Perturbed perturb(std::string_view candidate, Perturbation kind, std::size_t degree, std::uint64_t seed,
                  const PerturbOptions& options) {
  if (degree == 0) throw InvalidArgument("perturbation degree must be at least 1");
  Perturbed out;
  out.requested = degree;

  if (kind == Perturbation::negation) {
    if (degree != 1) throw InvalidArgument("negation only supports degree 1");
    out.text = negate_text(candidate, options.negator).text;
    out.applied = 1;
    if (out.text == candidate) throw Error("negation left the sentence unchanged");
    return out;
  }

  auto words = dataset::whitespace_tokenize(candidate);
  const std::string original = join(words);
  const std::size_t n = words.size();
  if (n == 0) throw Error("empty candidate");
  SeededRng rng(seed);

  switch (kind) {
    case Perturbation::word_swap: {
      std::vector<bool> used(n, false);
      for (std::size_t d = 0; d < degree; ++d) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i + 1 < n; ++i)
          if (!used[i] && !used[i + 1]) open.push_back(i);
        if (open.empty()) break;
        const auto i = open[rng.below(open.size())];
        used[i] = used[i + 1] = true;
        std::swap(words[i], words[i + 1]);
        ++out.applied;
      }
      break;
    }
    case Perturbation::word_drop: {
      std::vector<std::size_t> pool;
      for (std::size_t i = 0; i < n; ++i)
        if (!options.content_words_only || !is_function_word(words[i])) pool.push_back(i);
      auto drop = sample(pool, std::min(degree, n - 1), rng);
      std::sort(drop.begin(), drop.end());
      for (auto it = drop.rbegin(); it != drop.rend(); ++it) words.erase(words.begin() + static_cast<std::ptrdiff_t>(*it));
      out.applied = drop.size();
      break;
    }
    case Perturbation::repetition: {
      std::vector<std::size_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      auto dup = sample(all, degree, rng);
      std::vector<bool> twice(n, false);
      for (auto i : dup) twice[i] = true;
      std::vector<std::string> grown;
      for (std::size_t i = 0; i < n; ++i) {
        grown.push_back(words[i]);
        if (twice[i]) grown.push_back(words[i]);
      }
      words = std::move(grown);
      out.applied = dup.size();
      break;
    }
    case Perturbation::negation:
      break;
  }
  out.text = join(words);
  if (out.applied == 0) throw Error(std::string(to_string(kind)) + ": no position available");
  if (out.text == original) throw Error(std::string(to_string(kind)) + " left the sentence unchanged");
  return out;
}

const SensitivityCell* SensitivityReport::find(Perturbation kind, std::size_t degree) const {
  for (const auto& c : cells)
    if (c.kind == kind && c.degree == degree) return &c;
  return nullptr;
}

std::string SensitivityReport::to_json() const {
  json j;
  j["corpus_size"] = corpus_size;
  j["score_min"] = score_min;
  j["score_max"] = score_max;
  j["spearman_vs_labels"] = spearman_vs_labels ? json(*spearman_vs_labels) : json(nullptr);
  j["cells"] = json::array();
  for (const auto& c : cells) {
    j["cells"].push_back({{"kind", to_string(c.kind)},
                          {"degree", c.degree},
                          {"item_count", c.item_count},
                          {"mean_raw_difference", c.mean_raw_difference},
                          {"normalized_score", c.normalized_score},
                          {"capped", c.capped},
                          {"skipped", c.skipped}});
  }
  j["notes"] = notes;
  return j.dump(2);
}

SensitivityReport sensitivity(const ScorerFactory& scorer, const std::vector<ScorePair>& corpus,
                              const SensitivityOptions& options) {
  if (corpus.empty()) throw InvalidArgument("sensitivity: empty corpus");
  if (options.degrees.empty()) throw InvalidArgument("sensitivity: no degrees requested");
  for (auto d : options.degrees)
    if (d == 0) throw InvalidArgument("sensitivity: degree 0 is not a perturbation");
  if (options.labels && options.labels->size() != corpus.size())
    throw InvalidArgument("sensitivity: label count differs from corpus size");

  struct Pending {
    std::size_t cell;
    std::size_t item;
    std::size_t slot;  // index into the scoring batch
  };
  SensitivityReport report;
  report.corpus_size = corpus.size();
  std::vector<ScorePair> batch(corpus.begin(), corpus.end());
  std::vector<Pending> pending;

  for (const auto kind : options.kinds) {
    const std::vector<std::size_t> degrees =
        kind == Perturbation::negation ? std::vector<std::size_t>{1} : options.degrees;
    for (const auto degree : degrees) {
      SensitivityCell cell;
      cell.kind = kind;
      cell.degree = degree;
      const std::size_t cell_index = report.cells.size();
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        try {
          const auto p = perturb(corpus[i].candidate, kind, degree,
                                 mix_seed(options.seed, i, static_cast<std::uint64_t>(kind), degree), options.perturb);
          if (p.capped()) ++cell.capped;
          pending.push_back({cell_index, i, batch.size()});
          batch.push_back({corpus[i].reference, p.text});
        } catch (const std::exception&) {
          ++cell.skipped;
        }
      }
      report.cells.push_back(cell);
    }
  }

  const auto scored = score_pairs(scorer, batch, options.jobs, options.max_error_fraction);
  const auto& s = scored.scores;

  bool any = false;
  for (const auto& v : s) {
    if (!v) continue;
    report.score_min = any ? std::min(report.score_min, *v) : *v;
    report.score_max = any ? std::max(report.score_max, *v) : *v;
    any = true;
  }
  const double range = report.score_max - report.score_min;

  std::vector<double> sums(report.cells.size(), 0.0);
  for (const auto& p : pending) {
    auto& cell = report.cells[p.cell];
    if (!s[p.item] || !s[p.slot]) {
      ++cell.skipped;
      continue;
    }
    sums[p.cell] += *s[p.item] - *s[p.slot];
    ++cell.item_count;
  }
  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    auto& cell = report.cells[c];
    if (cell.item_count == 0) continue;
    cell.mean_raw_difference = sums[c] / static_cast<double>(cell.item_count);
    cell.normalized_score = range > 0 ? cell.mean_raw_difference / range : 0.0;
  }
  for (const auto& cell : report.cells)
    if (cell.item_count == 0)
      report.notes.push_back(std::string(to_string(cell.kind)) + " degree " + std::to_string(cell.degree) +
                             ": no scorable items");
  std::erase_if(report.cells, [](const SensitivityCell& c) { return c.item_count == 0; });
  if (range <= 0) report.notes.push_back("all observed scores equal; normalized scores set to 0");

  if (options.labels) {
    std::vector<double> metric, gold;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!s[i]) continue;
      metric.push_back(*s[i]);
      gold.push_back((*options.labels)[i]);
    }
    try {
      report.spearman_vs_labels = spearman(metric, gold);
    } catch (const InvalidArgument& e) {
      report.notes.push_back(std::string("spearman_vs_labels unavailable: ") + e.what());
    }
  }
  return report;
}

double evaluate_testset(const ScorerFactory& scorer, const std::vector<dataset::SentencePair>& rows, unsigned jobs,
                        double max_error_fraction) {
  std::vector<ScorePair> pairs;
  pairs.reserve(rows.size());
  for (const auto& r : rows) pairs.push_back({r.reference, r.candidate});
  const auto scored = score_pairs(scorer, pairs, jobs, max_error_fraction);
  std::vector<double> metric, gold;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!scored.scores[i]) continue;
    metric.push_back(*scored.scores[i]);
    gold.push_back(rows[i].score);
  }
  return spearman(metric, gold);
}

double evaluate_testset(const ScorerFactory& scorer, const std::string& tsv_path, unsigned jobs,
                        double max_error_fraction) {
  return evaluate_testset(scorer, dataset::read_pairs_tsv_file(tsv_path), jobs, max_error_fraction);
}

void write_report_table(std::ostream& out, const SensitivityReport& report, char delimiter) {
  const char d = delimiter;
  out << "kind" << d << "degree" << d << "item_count" << d << "mean_raw_difference" << d << "normalized_score\n";
  for (const auto& c : report.cells) {
    out << to_string(c.kind) << d << c.degree << d << c.item_count << d << dataset::format_score(c.mean_raw_difference)
        << d << dataset::format_score(c.normalized_score) << '\n';
  }
}

}  // namespace negforge::harness
