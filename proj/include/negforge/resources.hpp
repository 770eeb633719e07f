#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace negforge {

// Environment variable that points the lexicon loaders at a directory of
// replacement TSV files.
inline constexpr const char* kLexiconDirEnv = "NEGFORGE_LEXICON_DIR";

// Returns the contents of a lexicon file. Lookup order: `dir` when given, then
// $NEGFORGE_LEXICON_DIR, then the copy compiled into the binary. A directory
// that lacks the file falls through to the bundled copy.
std::string load_lexicon_file(std::string_view name, const std::optional<std::filesystem::path>& dir = std::nullopt);

// Non-empty, non-comment lines split on tabs. Throws InvalidArgument with the
// file name and line number when a row has fewer than `min_columns` fields.
std::vector<std::vector<std::string>> parse_tsv_rows(std::string_view content, std::string_view name,
                                                     std::size_t min_columns);

namespace detail {
const std::map<std::string_view, std::string_view>& embedded_lexicons();
}

}  // namespace negforge
