#include "negforge/conllu.hpp"

#include <charconv>
#include <sstream>
#include <string_view>

#include "negforge/error.hpp"

namespace negforge::conllu {

namespace {

constexpr std::string_view kTextPrefix = "# text = ";

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return cols;
}

bool parse_size(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool misc_has_no_space(std::string_view misc) {
  std::size_t start = 0;
  while (start <= misc.size()) {
    auto bar = misc.find('|', start);
    if (bar == std::string_view::npos) bar = misc.size();
    if (misc.substr(start, bar - start) == "SpaceAfter=No") return true;
    start = bar + 1;
  }
  return false;
}

struct Pending {
  std::vector<std::string> comments;
  std::vector<Token> tokens;
  std::size_t first_line = 0;

  [[nodiscard]] bool empty() const { return comments.empty() && tokens.empty(); }
};

void flush(Pending& p, Document& doc) {
  if (p.empty()) return;
  if (p.tokens.empty()) {
    throw ParseError(p.first_line, "comment block without token rows");
  }
  std::string text;
  for (const auto& c : p.comments) {
    if (c.starts_with(kTextPrefix)) text = c.substr(kTextPrefix.size());
  }
  if (text.empty()) text = detokenize(p.tokens);
  try {
    doc.sentences.emplace_back(std::move(p.tokens), std::move(text));
  } catch (const Error& e) {
    throw ParseError(p.first_line, e.what());
  }
  doc.comments.push_back(std::move(p.comments));
  p = Pending{};
}

}  // namespace

Document parse(std::istream& in) {
  Document doc;
  Pending pending;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      flush(pending, doc);
      continue;
    }
    if (pending.empty()) pending.first_line = lineno;
    if (line.front() == '#') {
      if (!pending.tokens.empty()) throw ParseError(lineno, "comment line inside token rows");
      pending.comments.emplace_back(line);
      continue;
    }
    const auto cols = split_tabs(line);
    if (cols.size() != 10) {
      throw ParseError(lineno, "expected 10 tab-separated columns, found " + std::to_string(cols.size()));
    }
    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos) continue;
    if (id.find('.') != std::string_view::npos) throw ParseError(lineno, "empty nodes are not supported: " + std::string(id));
    Token t;
    if (!parse_size(id, t.index) || t.index == 0) throw ParseError(lineno, "non-numeric ID '" + std::string(id) + "'");
    if (t.index != pending.tokens.size() + 1) {
      throw ParseError(lineno, "expected ID " + std::to_string(pending.tokens.size() + 1) + ", found " + std::string(id));
    }
    if (!parse_size(cols[6], t.head)) throw ParseError(lineno, "non-numeric HEAD '" + std::string(cols[6]) + "'");
    t.surface = std::string(cols[1]);
    if (t.surface.empty() || t.surface == "_") throw ParseError(lineno, "empty FORM");
    t.lemma = cols[2] == "_" ? std::string() : std::string(cols[2]);
    t.coarse_pos = pos_from_string(cols[3]);
    t.fine_tag = cols[4] == "_" ? std::string() : std::string(cols[4]);
    t.deprel = cols[7] == "_" ? std::string() : std::string(cols[7]);
    t.space_after = !misc_has_no_space(cols[9]);
    pending.tokens.push_back(std::move(t));
  }
  flush(pending, doc);
  return doc;
}

Document parse(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

std::string emit(const Document& doc) {
  std::string out;
  auto field = [](const std::string& s) -> const std::string& {
    static const std::string kUnset = "_";
    return s.empty() ? kUnset : s;
  };
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    if (i < doc.comments.size()) {
      for (const auto& c : doc.comments[i]) out += c + '\n';
    }
    for (const Token& t : doc.sentences[i].tokens()) {
      out += std::to_string(t.index);
      out += '\t' + t.surface;
      out += '\t' + field(t.lemma);
      out += '\t';
      out += to_string(t.coarse_pos);
      out += '\t' + field(t.fine_tag);
      out += "\t_\t" + std::to_string(t.head);
      out += '\t' + field(t.deprel);
      out += "\t_\t";
      out += t.space_after ? "_" : "SpaceAfter=No";
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

}  // namespace negforge::conllu
