#pragma once

#include <istream>
#include <string>
#include <vector>

#include "negforge/sentence.hpp"

namespace negforge::conllu {

struct Document {
  std::vector<ParsedSentence> sentences;
  // comments[i] holds the "#" lines preceding sentences[i], verbatim.
  std::vector<std::vector<std::string>> comments;

  bool operator==(const Document&) const = default;
};

// Multiword range rows ("3-4") are skipped; empty nodes ("5.1") are rejected.
// Sentence text comes from a "# text = ..." comment when present.
Document parse(std::istream& in);
Document parse(const std::string& text);

std::string emit(const Document& doc);

}  // namespace negforge::conllu
