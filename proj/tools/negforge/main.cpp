#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "negforge/dataset.hpp"
#include "negforge/dataset_build.hpp"
#include "negforge/error.hpp"
#include "negforge/harness.hpp"
#include "negforge/parser_provider.hpp"

namespace {

namespace fs = std::filesystem;
using namespace negforge;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAdapter = 3;

// Thrown for bad flag combinations found after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// Output goes to --output when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("cannot write " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<std::size_t> parse_degrees(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      if (v == 0) throw UsageError("--degrees: degree 0 is not a perturbation");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw UsageError("--degrees: not a non-negative integer: '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--degrees: empty list");
  return out;
}

struct NegateArgs {
  std::string input;
  std::string output;
  std::string parser = "builtin";
  std::string conllu_file;
  std::string external_cmd;
  bool prefer_contractions = true;
  bool strict = false;
  unsigned jobs = 1;
  std::string format = "text";
  double timeout_s = 60;
};

int run_negate(const NegateArgs& a) {
  ParserConfig pc;
  pc.kind = parser_kind_from_string(a.parser);
  pc.conllu_path = a.conllu_file;
  pc.external_command = a.external_cmd;
  pc.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout_s * 1000));
  if (pc.kind == ParserKind::conllu_fixture && pc.conllu_path.empty())
    throw UsageError("--parser conllu needs --conllu-file");
  if (pc.kind == ParserKind::external_command && pc.external_command.empty())
    throw UsageError("--parser external-cmd needs --external-parser-cmd");
  const auto parser = make_parser(pc);
  const Negator negator(NegatorOptions{a.prefer_contractions});

  std::vector<std::string> lines;
  if (a.input.empty() || a.input == "-") {
    lines = read_lines(std::cin);
  } else {
    std::ifstream in(a.input);
    if (!in) throw Error("cannot open " + a.input);
    lines = read_lines(in);
  }

  struct Result {
    std::optional<NegationOutcome> outcome;
    std::string error;
  };
  std::vector<Result> results(lines.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    // The external parser runs once per shard; others parse line by line.
    std::vector<std::optional<ParsedSentence>> parsed(end - begin);
    std::vector<std::string> parse_errors(end - begin);
    if (pc.kind == ParserKind::external_command) {
      std::vector<std::string> batch;
      std::vector<std::size_t> where;
      for (std::size_t i = begin; i < end; ++i) {
        if (lines[i].find_first_not_of(" \t") == std::string::npos) {
          parse_errors[i - begin] = "empty input sentence";
          continue;
        }
        batch.push_back(lines[i]);
        where.push_back(i - begin);
      }
      try {
        auto sentences = parser->parse_batch(batch);
        for (std::size_t k = 0; k < where.size(); ++k) parsed[where[k]].emplace(std::move(sentences[k]));
      } catch (const std::exception& e) {
        for (auto k : where) parse_errors[k] = std::string("parse: ") + e.what();
      }
      for (std::size_t i = begin; i < end; ++i) {
        auto& r = results[i];
        if (!parsed[i - begin]) {
          r.error = parse_errors[i - begin];
          continue;
        }
        try {
          r.outcome = negator.negate(*parsed[i - begin]);
        } catch (const std::exception& e) {
          r.error = std::string("negate: ") + e.what();
        }
      }
      return;
    }
    for (std::size_t i = begin; i < end; ++i) {
      try {
        results[i].outcome = negate_text(lines[i], *parser, negator);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(a.jobs, static_cast<unsigned>(std::max<std::size_t>(lines.size(), 1))));
  if (jobs == 1) {
    work(0, lines.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (lines.size() + jobs - 1) / jobs;
    for (std::size_t b = 0; b < lines.size(); b += chunk) pool.emplace_back(work, b, std::min(lines.size(), b + chunk));
    for (auto& t : pool) t.join();
  }

  Sink sink(a.output);
  auto& out = sink.out();
  if (a.format == "tsv") out << "input\toutput\tbranch\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& r = results[i];
    if (!r.outcome) {
      ++failures;
      if (a.strict) {
        out.flush();
        std::cerr << "negforge: line " << (i + 1) << ": " << r.error << '\n';
        return kExitData;
      }
      std::string reason = r.error;
      std::replace(reason.begin(), reason.end(), '\n', ' ');
      if (a.format == "tsv") {
        out << dataset::escape_field(lines[i]) << '\t' << "ERROR:" << dataset::escape_field(reason) << "\t-\n";
      } else {
        out << "ERROR:" << reason << '\n';
      }
      continue;
    }
    if (a.format == "tsv") {
      out << dataset::escape_field(lines[i]) << '\t' << dataset::escape_field(r.outcome->text) << '\t'
          << r.outcome->branch_number() << '\n';
    } else {
      out << r.outcome->text << '\n';
    }
  }
  out.flush();
  if (failures > 0) std::cerr << "negforge: " << failures << " of " << lines.size() << " lines failed\n";
  return kExitOk;
}

struct BuildArgs {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> exclude;
  bool dedup = false;
  bool preserve_test = false;
  unsigned jobs = 1;
};

int run_build(const BuildArgs& a) {
  auto cfg = dataset::BuildConfig::from_file(a.config);
  if (a.seed) cfg.seed = *a.seed;
  for (const auto& e : a.exclude) {
    if (std::none_of(cfg.sources.begin(), cfg.sources.end(), [&](const auto& s) { return s.name == e; }))
      throw UsageError("--exclude: no source named '" + e + "'");
    cfg.exclude.push_back(e);
  }
  if (a.dedup) cfg.filter.dedup_exact = true;
  if (a.preserve_test) cfg.ablation_preserve_test = true;
  cfg.jobs = a.jobs;
  const auto bundle = dataset::build_cannot_wmt(cfg);
  dataset::write_bundle(a.output, bundle);
  std::cerr << "negforge: train " << bundle.report.train << ", dev " << bundle.report.dev << ", test "
            << bundle.report.test << " -> " << a.output << '\n';
  return kExitOk;
}

struct SplitArgs {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  std::string ratios = "80:10:10";
};

int run_split(const SplitArgs& a) {
  dataset::SplitRatios r;
  char c1 = 0, c2 = 0;
  std::stringstream ss(a.ratios);
  if (!(ss >> r.train >> c1 >> r.dev >> c2 >> r.test) || c1 != ':' || c2 != ':' || !ss.eof() ||
      r.train + r.dev + r.test != 100)
    throw UsageError("--ratios must look like 80:10:10 and sum to 100");
  auto pairs = dataset::read_pairs_tsv_file(a.input);
  const auto s = dataset::split_dataset(std::move(pairs), r, a.seed);
  fs::create_directories(a.output);
  dataset::write_pairs_tsv_file((fs::path(a.output) / "train.tsv").string(), s.train);
  dataset::write_pairs_tsv_file((fs::path(a.output) / "dev.tsv").string(), s.dev);
  dataset::write_pairs_tsv_file((fs::path(a.output) / "test.tsv").string(), s.test);
  std::cerr << "negforge: " << s.train.size() << "/" << s.dev.size() << "/" << s.test.size() << '\n';
  return kExitOk;
}

struct MetricArgs {
  std::string metric = "builtin:jaccard";
  unsigned jobs = 1;
  double timeout_s = 60;
  std::size_t batch = 256;
  double max_error_fraction = 0.0;

  ScorerFactory factory() const {
    AdapterOptions o;
    o.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
    o.batch_size = batch;
    return make_scorer_factory(metric, o);
  }
};

void add_metric_options(CLI::App* cmd, MetricArgs& m) {
  cmd->add_option("--metric-cmd", m.metric, "adapter command, or builtin:exact / builtin:jaccard");
  cmd->add_option("--jobs", m.jobs, "adapter processes")->check(CLI::PositiveNumber);
  cmd->add_option("--timeout", m.timeout_s, "seconds per batch")->check(CLI::PositiveNumber);
  cmd->add_option("--batch-size", m.batch)->check(CLI::PositiveNumber);
  cmd->add_option("--max-error-fraction", m.max_error_fraction)->check(CLI::Range(0.0, 1.0));
}

int run_evaluate(const std::string& input, const MetricArgs& m, const std::string& output) {
  const double rho = harness::evaluate_testset(m.factory(), input, m.jobs, m.max_error_fraction);
  Sink sink(output);
  sink.out() << "spearman\t" << dataset::format_score(rho) << '\n';
  return kExitOk;
}

struct SensitivityArgs {
  std::string input;
  std::string output;
  std::string summary;
  std::vector<std::string> kinds;
  std::string degrees = "1,2,3";
  std::uint64_t seed = 0;
  std::string format = "csv";
  bool labels = false;
  bool content_words_only = false;
  bool prefer_contractions = true;
};

int run_sensitivity(const SensitivityArgs& a, const MetricArgs& m) {
  harness::SensitivityOptions o;
  if (!a.kinds.empty()) {
    o.kinds.clear();
    for (const auto& k : a.kinds) o.kinds.push_back(harness::perturbation_from_string(k));
  }
  o.degrees = parse_degrees(a.degrees);
  o.seed = a.seed;
  o.jobs = m.jobs;
  o.max_error_fraction = m.max_error_fraction;
  o.perturb.content_words_only = a.content_words_only;
  o.perturb.negator.prefer_contractions = a.prefer_contractions;
  const auto rows = dataset::read_pairs_tsv_file(a.input);
  std::vector<ScorePair> corpus;
  std::vector<double> gold;
  for (const auto& r : rows) {
    corpus.push_back({r.reference, r.candidate});
    gold.push_back(r.score);
  }
  if (a.labels) o.labels = gold;
  const auto report = harness::sensitivity(m.factory(), corpus, o);
  Sink sink(a.output);
  harness::write_report_table(sink.out(), report, a.format == "tsv" ? '\t' : ',');
  if (!a.summary.empty()) {
    std::ofstream s(a.summary);
    if (!s) throw Error("cannot write " + a.summary);
    s << report.to_json() << '\n';
  }
  for (const auto& n : report.notes) std::cerr << "negforge: " << n << '\n';
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Rule-based sentence negation, negation dataset builder and metric sensitivity harness"};
  app.name("negforge");
  app.require_subcommand(1, 1);

  NegateArgs neg;
  auto* negate = app.add_subcommand("negate", "negate one sentence per input line");
  negate->add_option("--input,-i", neg.input, "input file (default stdin)");
  negate->add_option("--output,-o", neg.output, "output file (default stdout)");
  negate->add_option("--parser", neg.parser)->check(CLI::IsMember({"builtin", "conllu", "external-cmd"}));
  negate->add_option("--conllu-file", neg.conllu_file, "pre-parsed sentences for --parser conllu");
  negate->add_option("--external-parser-cmd", neg.external_cmd, "command emitting CoNLL-U for raw lines");
  negate->add_option("--parser-timeout", neg.timeout_s, "seconds")->check(CLI::PositiveNumber);
  negate->add_flag("--prefer-contractions,!--no-contractions", neg.prefer_contractions);
  negate->add_flag("--strict", neg.strict, "abort on the first failing line (exit 2)");
  negate->add_option("--jobs", neg.jobs)->check(CLI::PositiveNumber);
  negate->add_option("--format", neg.format)->check(CLI::IsMember({"text", "tsv"}));

  BuildArgs build;
  auto* bd = app.add_subcommand("build-dataset", "build train/dev/test TSVs from a JSON config");
  bd->add_option("--config", build.config)->required()->check(CLI::ExistingFile);
  bd->add_option("--output,-o", build.output, "output directory")->required();
  bd->add_option("--seed", build.seed);
  bd->add_option("--exclude", build.exclude, "leave a source out (repeatable)");
  bd->add_flag("--dedup", build.dedup, "drop exact duplicate pairs");
  bd->add_flag("--preserve-test", build.preserve_test, "keep excluded sources in the test split");
  bd->add_option("--jobs", build.jobs)->check(CLI::PositiveNumber);

  SplitArgs split;
  auto* sp = app.add_subcommand("split", "shuffle and split a pair TSV");
  sp->add_option("--input,-i", split.input)->required()->check(CLI::ExistingFile);
  sp->add_option("--output,-o", split.output, "output directory")->required();
  sp->add_option("--seed", split.seed);
  sp->add_option("--ratios", split.ratios);

  MetricArgs eval_metric;
  std::string eval_input;
  std::string eval_output;
  auto* ev = app.add_subcommand("evaluate", "Spearman of metric scores against gold scores");
  ev->add_option("--input,-i", eval_input)->required()->check(CLI::ExistingFile);
  ev->add_option("--output,-o", eval_output);
  add_metric_options(ev, eval_metric);

  MetricArgs sens_metric;
  SensitivityArgs sens;
  auto* se = app.add_subcommand("sensitivity", "perturbation sensitivity of a metric");
  se->add_option("--input,-i", sens.input, "TSV of reference, candidate[, score]")->required()->check(CLI::ExistingFile);
  se->add_option("--output,-o", sens.output);
  se->add_option("--summary", sens.summary, "JSON summary path");
  se->add_option("--perturbation", sens.kinds, "repeatable; default all")
      ->check(CLI::IsMember({"word_swap", "word_drop", "repetition", "negation"}));
  se->add_option("--degrees", sens.degrees, "comma-separated, e.g. 1,2,3");
  se->add_option("--seed", sens.seed);
  se->add_option("--format", sens.format)->check(CLI::IsMember({"csv", "tsv"}));
  se->add_flag("--labels", sens.labels, "correlate original scores with the score column");
  se->add_flag("--content-words-only", sens.content_words_only, "word_drop skips function words");
  se->add_flag("--prefer-contractions,!--no-contractions", sens.prefer_contractions);
  add_metric_options(se, sens_metric);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "negforge: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (negate->parsed()) return run_negate(neg);
    if (bd->parsed()) return run_build(build);
    if (sp->parsed()) return run_split(split);
    if (ev->parsed()) return run_evaluate(eval_input, eval_metric, eval_output);
    return run_sensitivity(sens, sens_metric);
  } catch (const UsageError& e) {
    std::cerr << "negforge: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AdapterError& e) {
    std::cerr << "negforge: adapter: " << e.what() << '\n';
    return kExitAdapter;
  } catch (const std::exception& e) {
    std::cerr << "negforge: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
