#pragma once

// Frozen output of tests/oracle/compute_oracles.py (exact fractions, naive
// ranking). Regenerate there, never from the library under test.

namespace negforge::oracle {

inline constexpr double kSpearmanTies = 0.9486832980505138;  // [1,2,2,4] vs [1,3,2,4]
inline constexpr double kJaccardCatSat = 0.5;                 // "the cat sat" vs "the cat ran"
inline constexpr double kTestsetSpearman = 0.7964328705698839;

struct GoldRow {
  const char* reference;
  const char* candidate;
  double gold;
  double jaccard;
};

inline constexpr GoldRow kTestset[] = {
    {"the cat sat on the mat", "the cat sat on the mat", 1.0, 1.0},
    {"the cat sat on the mat", "the cat sat on a mat", 0.9, 5.0 / 6.0},
    {"a dog barked loudly", "a dog barked", 0.8, 0.75},
    {"I will be there.", "I won't be there.", 0.0, 0.6},
    {"she likes green tea", "she likes tea", 0.7, 0.75},
    {"we went home early", "we went home late", 0.3, 0.6},
    {"he plays the piano", "he played the piano", 0.6, 0.6},
    {"they are very happy", "they are not very happy", 0.1, 0.8},
    {"birds fly south", "fish swim north", 0.05, 0.0},
    {"the sun is bright", "the sun is bright today", 0.85, 0.8},
};

}  // namespace negforge::oracle
