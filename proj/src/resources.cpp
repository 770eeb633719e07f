#include "negforge/resources.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "negforge/error.hpp"

namespace negforge {

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string load_lexicon_file(std::string_view name, const std::optional<std::filesystem::path>& dir) {
  std::optional<std::filesystem::path> search = dir;
  if (!search) {
    if (const char* env = std::getenv(kLexiconDirEnv); env != nullptr && *env != '\0') search = env;
  }
  if (search) {
    if (auto content = read_file(*search / std::string(name))) return *content;
  }
  const auto& files = detail::embedded_lexicons();
  const auto it = files.find(name);
  if (it == files.end()) throw InvalidArgument("unknown lexicon file '" + std::string(name) + "'");
  return std::string(it->second);
}

std::vector<std::vector<std::string>> parse_tsv_rows(std::string_view content, std::string_view name,
                                                     std::size_t min_columns) {
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() < min_columns) {
      throw InvalidArgument(std::string(name) + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(min_columns) + " columns, found " + std::to_string(cols.size()));
    }
    rows.push_back(std::move(cols));
  }
  return rows;
}

}  // namespace negforge
