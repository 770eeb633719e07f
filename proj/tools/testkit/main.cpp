// Stand-in external processes for tests: a scoring adapter with fault
// injection, and a CoNLL-U emitting parser backed by the builtin analyzer.

#include <poll.h>
#include <unistd.h>

#include <algorithm>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "negforge/conllu.hpp"
#include "negforge/dataset.hpp"
#include "negforge/shallow_parser.hpp"

namespace {

using nlohmann::json;

struct AdapterFaults {
  std::string strategy = "exact";
  double constant = 0.5;
  bool shuffle = false;
  std::size_t malformed_every = 0;
  std::size_t nan_every = 0;
  std::size_t drop_id_every = 0;
  std::size_t error_every = 0;
  std::size_t hang_after = 0;
  std::size_t exit_after = 0;
  bool no_handshake = false;
  bool bad_handshake = false;
  unsigned seed = 7;
};

void emit(const std::string& line) {
  std::string out = line + "\n";
  const char* p = out.data();
  std::size_t left = out.size();
  while (left > 0) {
    const ssize_t n = ::write(STDOUT_FILENO, p, left);
    if (n <= 0) std::exit(0);
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

double score_pair(const AdapterFaults& f, const std::string& ref, const std::string& cand) {
  if (f.strategy == "exact") return ref == cand ? 1.0 : 0.0;
  if (f.strategy == "jaccard")
    return negforge::dataset::jaccard(negforge::dataset::whitespace_tokenize(ref),
                                      negforge::dataset::whitespace_tokenize(cand));
  return f.constant;
}

int run_adapter(const AdapterFaults& f) {
  std::mt19937 rng(f.seed);
  std::string buffer;
  std::size_t served = 0;
  bool handshaken = false;
  char chunk[65536];
  while (true) {
    const ssize_t got = ::read(STDIN_FILENO, chunk, sizeof chunk);
    if (got <= 0) return 0;
    buffer.append(chunk, static_cast<std::size_t>(got));
    // Answer every complete line in this chunk together, so --shuffle
    // reorders within what the harness sent in one go.
    std::vector<std::string> replies;
    std::size_t nl;
    while ((nl = buffer.find('\n')) != std::string::npos) {
      const std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (line.empty()) continue;
      const auto msg = json::parse(line, nullptr, false);
      if (!handshaken) {
        handshaken = true;
        if (f.no_handshake) continue;
        emit(f.bad_handshake ? R"({"ok":false})" : R"({"ok":true})");
        continue;
      }
      if (!msg.is_object() || !msg.contains("id")) {
        replies.push_back(json{{"id", nullptr}, {"error", "malformed request"}}.dump());
        continue;
      }
      ++served;
      if (f.exit_after && served > f.exit_after) {
        for (const auto& r : replies) emit(r);
        std::exit(0);
      }
      if (f.hang_after && served > f.hang_after) {
        for (const auto& r : replies) emit(r);
        std::this_thread::sleep_for(std::chrono::hours(1));
      }
      const auto id = msg["id"];
      if (!msg.contains("reference") || !msg.contains("candidate") || !msg["reference"].is_string() ||
          !msg["candidate"].is_string()) {
        replies.push_back(json{{"id", id}, {"error", "request needs reference and candidate strings"}}.dump());
        continue;
      }
      const double s = score_pair(f, msg["reference"], msg["candidate"]);
      if (f.malformed_every && served % f.malformed_every == 0) {
        replies.push_back("{\"id\": " + id.dump() + ", \"score\": ");
      } else if (f.nan_every && served % f.nan_every == 0) {
        replies.push_back("{\"id\": " + id.dump() + ", \"score\": NaN}");
      } else if (f.drop_id_every && served % f.drop_id_every == 0) {
        replies.push_back(json{{"score", s}}.dump());
      } else if (f.error_every && served % f.error_every == 0) {
        replies.push_back(json{{"id", id}, {"error", "injected failure"}}.dump());
      } else {
        replies.push_back(json{{"id", id}, {"score", s}}.dump());
      }
    }
    if (f.shuffle) std::shuffle(replies.begin(), replies.end(), rng);
    for (const auto& r : replies) emit(r);
  }
}

int run_parse(bool fail, bool drop_last) {
  if (fail) {
    std::cerr << "testkit parse: asked to fail\n";
    return 1;
  }
  negforge::conllu::Document doc;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    doc.sentences.push_back(negforge::analyze(line));
  }
  if (drop_last && !doc.sentences.empty()) doc.sentences.pop_back();
  std::cout << negforge::conllu::emit(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"negforge test kit"};
  app.require_subcommand(1);

  AdapterFaults faults;
  auto* adapter = app.add_subcommand("adapter", "line-delimited JSON scorer");
  adapter->add_option("--strategy", faults.strategy)->check(CLI::IsMember({"exact", "jaccard", "constant"}));
  adapter->add_option("--value", faults.constant, "score for the constant strategy");
  adapter->add_flag("--shuffle", faults.shuffle, "answer each chunk out of order");
  adapter->add_option("--malformed-every", faults.malformed_every);
  adapter->add_option("--nan-every", faults.nan_every);
  adapter->add_option("--drop-id-every", faults.drop_id_every);
  adapter->add_option("--error-every", faults.error_every);
  adapter->add_option("--hang-after", faults.hang_after);
  adapter->add_option("--exit-after", faults.exit_after);
  adapter->add_flag("--no-handshake", faults.no_handshake);
  adapter->add_flag("--bad-handshake", faults.bad_handshake);
  adapter->add_option("--seed", faults.seed);

  bool fail = false;
  bool drop_last = false;
  auto* parse = app.add_subcommand("parse", "raw sentences in, CoNLL-U out");
  parse->add_flag("--fail", fail);
  parse->add_flag("--drop-last", drop_last);

  CLI11_PARSE(app, argc, argv);
  try {
    if (adapter->parsed()) return run_adapter(faults);
    return run_parse(fail, drop_last);
  } catch (const std::exception& e) {
    std::cerr << "testkit: " << e.what() << '\n';
    return 2;
  }
}
