#include "negforge/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_set>

#include "negforge/error.hpp"
#include "negforge/parser_provider.hpp"
#include "negforge/rng.hpp"

namespace negforge::dataset {

namespace {

constexpr std::pair<Source, const char*> kSources[] = {
    {Source::nan_nli, "nan_nli"},     {Source::wiki_factcheck, "wiki_factcheck"}, {Source::glue_diag, "glue_diag"},
    {Source::sentiment, "sentiment"}, {Source::wmt, "wmt"},                       {Source::other, "other"},
};

constexpr std::pair<Split, const char*> kSplits[] = {
    {Split::train, "train"}, {Split::dev, "dev"}, {Split::test, "test"}, {Split::unassigned, "unassigned"}};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

const char* to_string(Source s) {
  for (const auto& [k, name] : kSources)
    if (k == s) return name;
  return "other";
}

const char* to_string(Split s) {
  for (const auto& [k, name] : kSplits)
    if (k == s) return name;
  return "unassigned";
}

Source source_from_string(std::string_view name) {
  for (const auto& [k, n] : kSources)
    if (name == n) return k;
  throw InvalidArgument("unknown source tag: " + std::string(name));
}

Split split_from_string(std::string_view name) {
  for (const auto& [k, n] : kSplits)
    if (name == n) return k;
  throw InvalidArgument("unknown split tag: " + std::string(name));
}

void FilterConfig::validate() const {
  if (!(min_jaccard >= 0.0 && min_jaccard <= 1.0)) throw InvalidArgument("min_jaccard must lie in [0, 1]");
  if (max_words && *max_words == 0) throw InvalidArgument("max_words must be positive");
  if (!std::isfinite(wmt_min_score_exclusive)) throw InvalidArgument("wmt_min_score_exclusive must be finite");
}

std::vector<std::string> whitespace_tokenize(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::unordered_set<std::string> sa(a.begin(), a.end());
  const std::unordered_set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& w : sa) inter += sb.count(w);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

bool filter_pair(const SentencePair& pair, const FilterConfig& cfg) {
  const auto ref = whitespace_tokenize(pair.reference);
  const auto cand = whitespace_tokenize(pair.candidate);
  const std::size_t diff = ref.size() > cand.size() ? ref.size() - cand.size() : cand.size() - ref.size();
  return jaccard(ref, cand) >= cfg.min_jaccard && diff <= cfg.max_length_diff_words;
}

std::vector<SentencePair> build_negated_pairs(const std::vector<std::string>& sentences, const FilterConfig& cfg,
                                              const NegateFn& negate, const AuxiliaryFn& has_auxiliary, Source source,
                                              NegationReport* report, unsigned jobs) {
  enum class Fate { kept, gated_length, gated_auxiliary, failed };
  struct Slot {
    Fate fate = Fate::failed;
    std::string text;  // negation or failure reason
  };
  std::vector<Slot> slots(sentences.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& s = sentences[i];
      if (cfg.max_words && whitespace_tokenize(s).size() > *cfg.max_words) {
        slots[i].fate = Fate::gated_length;
        continue;
      }
      try {
        if (cfg.require_auxiliary && !has_auxiliary(s)) {
          slots[i].fate = Fate::gated_auxiliary;
          continue;
        }
        slots[i].text = negate(s);
        slots[i].fate = Fate::kept;
      } catch (const std::exception& e) {
        slots[i].fate = Fate::failed;
        slots[i].text = e.what();
      }
    }
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, sentences.size()))));
  if (jobs == 1) {
    work(0, sentences.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (sentences.size() + jobs - 1) / jobs;
    for (std::size_t b = 0; b < sentences.size(); b += chunk)
      pool.emplace_back(work, b, std::min(sentences.size(), b + chunk));
    for (auto& t : pool) t.join();
  }

  NegationReport local;
  local.input = sentences.size();
  std::vector<SentencePair> out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    switch (slots[i].fate) {
      case Fate::kept:
        out.push_back({sentences[i], std::move(slots[i].text), 0.0, source, Split::unassigned});
        break;
      case Fate::gated_length:
        ++local.gated_length;
        break;
      case Fate::gated_auxiliary:
        ++local.gated_auxiliary;
        break;
      case Fate::failed:
        local.failures.emplace_back(sentences[i], std::move(slots[i].text));
        break;
    }
  }
  local.produced = out.size();
  if (report) *report = std::move(local);
  return out;
}

std::vector<SentencePair> build_negated_pairs(const std::vector<std::string>& sentences, const FilterConfig& cfg,
                                              Source source, NegationReport* report, unsigned jobs) {
  static const BuiltinParser parser;
  static const Negator negator;
  static const ShallowParser shallow;
  return build_negated_pairs(
      sentences, cfg, [](const std::string& s) { return negate_text(s, parser, negator).text; },
      [](const std::string& s) { return shallow.has_auxiliary(s); }, source, report, jobs);
}

std::vector<SentencePair> attach_paraphrases(const std::vector<SentencePair>& pairs, const ParaphraseMap& paraphrases,
                                             MissingParaphrase policy, ParaphraseReport* report) {
  std::vector<SentencePair> out = pairs;
  std::set<std::string, std::less<>> seen;
  ParaphraseReport local;
  for (const auto& p : pairs) {
    if (!seen.insert(p.reference).second) continue;
    const auto it = paraphrases.find(p.reference);
    if (it == paraphrases.end()) {
      if (policy == MissingParaphrase::error) throw InvalidArgument("no paraphrase for reference: " + p.reference);
      ++local.missing;
      continue;
    }
    out.push_back({p.reference, it->second, 1.0, p.source, p.split});
    ++local.attached;
  }
  if (report) *report = local;
  return out;
}

std::vector<SentencePair> swap_augment(const std::vector<SentencePair>& pairs) {
  std::vector<SentencePair> out;
  out.reserve(pairs.size() * 2);
  out.insert(out.end(), pairs.begin(), pairs.end());
  for (const auto& p : pairs) out.push_back({p.candidate, p.reference, p.score, p.source, p.split});
  return out;
}

std::vector<SentencePair> merge_wmt(const std::vector<WmtRecord>& records, const FilterConfig& cfg, WmtReport* report) {
  std::vector<SentencePair> out;
  WmtReport local;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto score = parse_double(r.score);
    if (!score || !std::isfinite(*score)) {
      local.rejected.emplace_back(i, "non-numeric score '" + r.score + "'");
      continue;
    }
    if (r.reference.empty() || r.candidate.empty()) {
      local.rejected.emplace_back(i, "empty reference or candidate");
      continue;
    }
    if (*score > cfg.wmt_min_score_exclusive) {
      out.push_back({r.reference, r.candidate, *score, Source::wmt, Split::unassigned});
      ++local.kept;
    } else {
      ++local.dropped;
    }
  }
  if (report) *report = std::move(local);
  return out;
}

std::size_t dedup_exact(std::vector<SentencePair>& pairs) {
  std::set<std::pair<std::string, std::string>> seen;
  const auto before = pairs.size();
  std::erase_if(pairs, [&](const SentencePair& p) { return !seen.emplace(p.reference, p.candidate).second; });
  return before - pairs.size();
}

SplitResult split_dataset(std::vector<SentencePair> pairs, SplitRatios ratios, std::uint64_t seed) {
  if (ratios.train + ratios.dev + ratios.test != 100) throw InvalidArgument("split ratios must sum to 100");
  SeededRng rng(seed);
  rng.shuffle(pairs);
  const std::size_t n = pairs.size();
  const std::size_t n_dev = n * ratios.dev / 100;
  const std::size_t n_test = n * ratios.test / 100;
  const std::size_t n_train = n - n_dev - n_test;
  SplitResult out;
  auto take = [&](std::vector<SentencePair>& dst, std::size_t from, std::size_t count, Split tag) {
    dst.reserve(count);
    for (std::size_t i = from; i < from + count; ++i) {
      pairs[i].split = tag;
      dst.push_back(std::move(pairs[i]));
    }
  };
  take(out.train, 0, n_train, Split::train);
  take(out.dev, n_train, n_dev, Split::dev);
  take(out.test, n_train + n_dev, n_test, Split::test);
  return out;
}

std::string escape_field(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\' || i + 1 == field.size()) {
      out += field[i];
      continue;
    }
    switch (field[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '\\': out += '\\'; break;
      default: out += '\\'; out += field[i];
    }
  }
  return out;
}

std::vector<std::string> split_tsv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string format_score(double score) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, score);
  return std::string(buf, ptr);
}

void write_pairs_tsv(std::ostream& out, const std::vector<SentencePair>& pairs, bool header) {
  if (header) out << "reference\tcandidate\tscore\tsource\tsplit\n";
  for (const auto& p : pairs) {
    out << escape_field(p.reference) << '\t' << escape_field(p.candidate) << '\t' << format_score(p.score) << '\t'
        << to_string(p.source) << '\t' << to_string(p.split) << '\n';
  }
}

std::vector<SentencePair> read_pairs_tsv(std::istream& in) {
  std::vector<SentencePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("reference\tcandidate", 0) == 0) continue;
    const auto f = split_tsv_line(line);
    if (f.size() < 3) throw ParseError(line_no, "expected at least 3 tab-separated columns");
    const auto score = parse_double(f[2]);
    if (!score || !std::isfinite(*score)) throw ParseError(line_no, "bad score '" + f[2] + "'");
    SentencePair p{unescape_field(f[0]), unescape_field(f[1]), *score, Source::other, Split::unassigned};
    try {
      if (f.size() > 3 && !f[3].empty()) p.source = source_from_string(f[3]);
      if (f.size() > 4 && !f[4].empty()) p.split = split_from_string(f[4]);
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<SentencePair> read_pairs_tsv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_pairs_tsv(in);
}

void write_pairs_tsv_file(const std::string& path, const std::vector<SentencePair>& pairs) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_pairs_tsv(out, pairs);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace negforge::dataset
