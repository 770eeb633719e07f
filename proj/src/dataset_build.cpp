#include "negforge/dataset_build.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "negforge/error.hpp"

namespace negforge::dataset {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// One input record with named or positional field access.
class RecordTable {
 public:
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> tsv_rows;
  std::vector<json> json_rows;
  bool is_json = false;

  [[nodiscard]] std::size_t size() const { return is_json ? json_rows.size() : tsv_rows.size(); }

  std::optional<std::string> get(std::size_t row, const Column& col) const {
    if (is_json) {
      const auto* name = std::get_if<std::string>(&col);
      if (!name) throw InvalidArgument("jsonl sources need named columns");
      const auto& obj = json_rows[row];
      const auto it = obj.find(*name);
      if (it == obj.end() || it->is_null()) return std::nullopt;
      return it->is_string() ? it->get<std::string>() : it->dump();
    }
    std::size_t idx;
    if (const auto* name = std::get_if<std::string>(&col)) {
      const auto it = std::find(header.begin(), header.end(), *name);
      if (it == header.end()) throw InvalidArgument("no column named '" + *name + "'");
      idx = static_cast<std::size_t>(it - header.begin());
    } else {
      idx = std::get<std::size_t>(col);
    }
    const auto& r = tsv_rows[row];
    if (idx >= r.size()) return std::nullopt;
    return r[idx];
  }
};

RecordTable load_records(const SourceSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw Error("source '" + spec.name + "': cannot open " + spec.path);
  RecordTable table;
  table.is_json = spec.format == SourceFormat::jsonl;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.is_json) {
      try {
        auto obj = json::parse(line);
        if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");
        table.json_rows.push_back(std::move(obj));
      } catch (const json::exception& e) {
        throw ParseError(line_no, "source '" + spec.name + "': " + e.what());
      }
      continue;
    }
    auto fields = split_tsv_line(line);
    for (auto& f : fields) f = unescape_field(f);
    if (first && spec.header) {
      table.header = std::move(fields);
    } else {
      table.tsv_rows.push_back(std::move(fields));
    }
    first = false;
  }
  return table;
}

std::string required(const RecordTable& t, std::size_t row, const std::optional<Column>& col, const char* what,
                     const SourceSpec& spec) {
  if (!col) throw InvalidArgument("source '" + spec.name + "' has no '" + what + "' column");
  auto v = t.get(row, *col);
  return v ? *v : std::string();
}

bool label_passes(const RecordTable& t, std::size_t row, const SourceSpec& spec) {
  if (spec.label_filter.empty()) return true;
  if (!spec.label) throw InvalidArgument("source '" + spec.name + "' filters labels but has no label column");
  const auto v = t.get(row, *spec.label);
  return v && std::find(spec.label_filter.begin(), spec.label_filter.end(), *v) != spec.label_filter.end();
}

Column parse_column(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  throw InvalidArgument("column must be a name or a non-negative index");
}

SourceMode parse_mode(const std::string& s) {
  if (s == "pairs") return SourceMode::pairs;
  if (s == "negate") return SourceMode::negate;
  if (s == "wmt") return SourceMode::wmt;
  throw InvalidArgument("unknown source mode '" + s + "'");
}

const char* to_string(SourceMode m) {
  switch (m) {
    case SourceMode::pairs: return "pairs";
    case SourceMode::negate: return "negate";
    case SourceMode::wmt: return "wmt";
  }
  return "pairs";
}

std::string resolve(const std::string& base, const std::string& path) {
  if (path.empty()) return path;
  const fs::path p(path);
  return p.is_absolute() ? path : (fs::path(base) / p).lexically_normal().string();
}

// Pairs-mode source: label filter, then the similarity filter; score 0.
std::vector<SentencePair> contradiction_pairs(const SourceSpec& spec, const RecordTable& t, const FilterConfig& filter,
                                              SourceReport& rep) {
  std::vector<SentencePair> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!label_passes(t, i, spec)) {
      ++rep.label_filtered;
      continue;
    }
    SentencePair p{required(t, i, spec.reference, "reference", spec), required(t, i, spec.candidate, "candidate", spec),
                   0.0, spec.tag, Split::unassigned};
    if (p.reference.empty() || p.candidate.empty() || (spec.similarity_filter && !filter_pair(p, filter))) {
      ++rep.similarity_dropped;
      continue;
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

BuildConfig BuildConfig::from_json_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("build config: ") + e.what());
  }
  BuildConfig cfg;
  try {
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.jobs = j.value("jobs", 1u);
    cfg.paraphrase_path = resolve(base_dir, j.value("paraphrases", std::string()));
    const auto missing = j.value("missing_paraphrase", std::string("error"));
    if (missing == "skip") {
      cfg.missing_paraphrase = MissingParaphrase::skip;
    } else if (missing != "error") {
      throw InvalidArgument("missing_paraphrase must be 'error' or 'skip'");
    }
    cfg.exclude = j.value("exclude", std::vector<std::string>{});
    cfg.ablation_preserve_test = j.value("ablation_preserve_test", false);
    if (j.contains("filter")) {
      const auto& f = j.at("filter");
      cfg.filter.min_jaccard = f.value("min_jaccard", cfg.filter.min_jaccard);
      cfg.filter.max_length_diff_words = f.value("max_length_diff_words", cfg.filter.max_length_diff_words);
      cfg.filter.wmt_min_score_exclusive = f.value("wmt_min_score_exclusive", cfg.filter.wmt_min_score_exclusive);
      cfg.filter.dedup_exact = f.value("dedup_exact", false);
    }
    cfg.filter.dedup_exact = j.value("dedup_exact", cfg.filter.dedup_exact);
    cfg.filter.validate();
    for (const auto& s : j.at("sources")) {
      SourceSpec spec;
      spec.name = s.at("name").get<std::string>();
      const auto tag = s.value("tag", spec.name);
      try {
        spec.tag = source_from_string(tag);
      } catch (const InvalidArgument&) {
        spec.tag = Source::other;
      }
      spec.path = resolve(base_dir, s.at("path").get<std::string>());
      const auto format = s.value("format", std::string("tsv"));
      if (format == "jsonl") {
        spec.format = SourceFormat::jsonl;
      } else if (format != "tsv") {
        throw InvalidArgument("source '" + spec.name + "': unknown format '" + format + "'");
      }
      spec.header = s.value("header", true);
      spec.mode = parse_mode(s.value("mode", std::string("pairs")));
      if (spec.mode == SourceMode::wmt) spec.tag = Source::wmt;
      if (s.contains("columns")) {
        const auto& c = s.at("columns");
        if (c.contains("reference")) spec.reference = parse_column(c.at("reference"));
        if (c.contains("candidate")) spec.candidate = parse_column(c.at("candidate"));
        if (c.contains("label")) spec.label = parse_column(c.at("label"));
        if (c.contains("score")) spec.score = parse_column(c.at("score"));
      }
      spec.label_filter = s.value("label_filter", std::vector<std::string>{});
      spec.similarity_filter = s.value("similarity_filter", true);
      if (s.contains("max_words")) spec.max_words = s.at("max_words").get<std::size_t>();
      spec.require_auxiliary = s.value("require_auxiliary", false);
      cfg.sources.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("build config: ") + e.what());
  }
  std::set<std::string> names;
  for (const auto& s : cfg.sources)
    if (!names.insert(s.name).second) throw InvalidArgument("duplicate source name '" + s.name + "'");
  for (const auto& e : cfg.exclude)
    if (!names.count(e)) throw InvalidArgument("excluded source '" + e + "' is not configured");
  return cfg;
}

BuildConfig BuildConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), fs::path(path).parent_path().string());
}

ParaphraseMap read_paraphrases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open paraphrase file " + path);
  ParaphraseMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_tsv_line(line);
    if (f.size() < 2) throw ParseError(line_no, "paraphrase rows need reference and paraphrase");
    map.emplace(unescape_field(f[0]), unescape_field(f[1]));
  }
  return map;
}

const SourceReport* BuildReport::find(const std::string& name) const {
  for (const auto& s : sources)
    if (s.name == name) return &s;
  return nullptr;
}

std::string BuildReport::to_json() const {
  json j;
  j["seed"] = seed;
  j["splits"] = {{"train", train}, {"dev", dev}, {"test", test}};
  j["total"] = train + dev + test;
  j["negation_pairs"] = negation_pairs;
  j["wmt_pairs"] = wmt_pairs;
  const auto total = negation_pairs + wmt_pairs;
  j["wmt_fraction"] = total ? static_cast<double>(wmt_pairs) / static_cast<double>(total) : 0.0;
  j["dedup_removed"] = dedup_removed;
  j["sources"] = json::array();
  for (const auto& s : sources) {
    j["sources"].push_back({{"name", s.name},
                            {"mode", s.mode},
                            {"excluded", s.excluded},
                            {"records_read", s.records_read},
                            {"label_filtered", s.label_filtered},
                            {"similarity_dropped", s.similarity_dropped},
                            {"gated_length", s.gated_length},
                            {"gated_auxiliary", s.gated_auxiliary},
                            {"negation_failed", s.negation_failed},
                            {"negated_pairs", s.negated_pairs},
                            {"paraphrases_attached", s.paraphrases_attached},
                            {"paraphrases_missing", s.paraphrases_missing},
                            {"wmt_kept", s.wmt_kept},
                            {"wmt_dropped", s.wmt_dropped},
                            {"wmt_rejected", s.wmt_rejected},
                            {"output_pairs", s.output_pairs}});
  }
  return j.dump(2);
}

DatasetBundle build_cannot_wmt(const BuildConfig& config) {
  config.filter.validate();
  const std::set<std::string> excluded(config.exclude.begin(), config.exclude.end());
  const bool build_excluded = config.ablation_preserve_test;

  ParaphraseMap paraphrases;
  if (!config.paraphrase_path.empty()) paraphrases = read_paraphrases(config.paraphrase_path);

  DatasetBundle bundle;
  auto& report = bundle.report;
  report.seed = config.seed;
  std::vector<SentencePair> negation;
  std::vector<SentencePair> wmt;
  // Pairs from excluded sources, when they are built only to keep the test
  // split stable. Removed from train and dev after splitting.
  std::set<std::pair<std::string, std::string>> excluded_keys;

  for (const auto& spec : config.sources) {
    SourceReport rep;
    rep.name = spec.name;
    rep.mode = to_string(spec.mode);
    rep.excluded = excluded.count(spec.name) > 0;
    if (rep.excluded && !build_excluded) {
      report.sources.push_back(std::move(rep));
      continue;
    }
    const auto table = load_records(spec);
    rep.records_read = table.size();

    std::vector<SentencePair> produced;
    if (spec.mode == SourceMode::wmt) {
      std::vector<WmtRecord> records;
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (!label_passes(table, i, spec)) {
          ++rep.label_filtered;
          continue;
        }
        records.push_back({required(table, i, spec.reference, "reference", spec),
                           required(table, i, spec.candidate, "candidate", spec),
                           required(table, i, spec.score, "score", spec)});
      }
      WmtReport wr;
      produced = merge_wmt(records, config.filter, &wr);
      rep.wmt_kept = wr.kept;
      rep.wmt_dropped = wr.dropped;
      rep.wmt_rejected = wr.rejected.size();
    } else {
      std::vector<SentencePair> negated;
      if (spec.mode == SourceMode::pairs) {
        negated = contradiction_pairs(spec, table, config.filter, rep);
      } else {
        std::vector<std::string> sentences;
        for (std::size_t i = 0; i < table.size(); ++i) {
          if (!label_passes(table, i, spec)) {
            ++rep.label_filtered;
            continue;
          }
          auto s = required(table, i, spec.reference, "reference", spec);
          if (!s.empty()) sentences.push_back(std::move(s));
        }
        FilterConfig gates = config.filter;
        gates.max_words = spec.max_words;
        gates.require_auxiliary = spec.require_auxiliary;
        NegationReport nr;
        negated = build_negated_pairs(sentences, gates, spec.tag, &nr, config.jobs);
        rep.gated_length = nr.gated_length;
        rep.gated_auxiliary = nr.gated_auxiliary;
        rep.negation_failed = nr.failures.size();
      }
      rep.negated_pairs = negated.size();
      ParaphraseReport pr;
      produced = swap_augment(attach_paraphrases(negated, paraphrases, config.missing_paraphrase, &pr));
      rep.paraphrases_attached = pr.attached;
      rep.paraphrases_missing = pr.missing;
    }
    rep.output_pairs = produced.size();
    if (rep.excluded)
      for (const auto& p : produced) excluded_keys.emplace(p.reference, p.candidate);
    auto& dst = spec.mode == SourceMode::wmt ? wmt : negation;
    dst.insert(dst.end(), std::make_move_iterator(produced.begin()), std::make_move_iterator(produced.end()));
    report.sources.push_back(std::move(rep));
  }

  if (config.filter.dedup_exact) report.dedup_removed = dedup_exact(negation) + dedup_exact(wmt);

  auto neg = split_dataset(std::move(negation), {}, config.seed);
  auto w = split_dataset(std::move(wmt), {}, config.seed);
  auto& out = bundle.splits;
  auto merge = [](std::vector<SentencePair>& dst, std::vector<SentencePair>& a, std::vector<SentencePair>& b) {
    dst = std::move(a);
    dst.insert(dst.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
  };
  merge(out.train, neg.train, w.train);
  merge(out.dev, neg.dev, w.dev);
  merge(out.test, neg.test, w.test);
  if (!excluded_keys.empty()) {
    auto drop = [&](std::vector<SentencePair>& v) {
      std::erase_if(v, [&](const SentencePair& p) { return excluded_keys.count({p.reference, p.candidate}) > 0; });
    };
    drop(out.train);
    drop(out.dev);
  }

  report.train = out.train.size();
  report.dev = out.dev.size();
  report.test = out.test.size();
  for (const auto* part : {&out.train, &out.dev, &out.test})
    for (const auto& p : *part) (p.source == Source::wmt ? report.wmt_pairs : report.negation_pairs)++;
  return bundle;
}

void write_bundle(const std::string& dir, const DatasetBundle& bundle) {
  fs::create_directories(dir);
  write_pairs_tsv_file((fs::path(dir) / "train.tsv").string(), bundle.splits.train);
  write_pairs_tsv_file((fs::path(dir) / "dev.tsv").string(), bundle.splits.dev);
  write_pairs_tsv_file((fs::path(dir) / "test.tsv").string(), bundle.splits.test);
  std::ofstream rep((fs::path(dir) / "report.json").string());
  if (!rep) throw Error("cannot write report.json in " + dir);
  rep << bundle.report.to_json() << '\n';
}

}  // namespace negforge::dataset
