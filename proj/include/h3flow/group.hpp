#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "h3flow/moebius.hpp"

namespace h3flow {

/// One letter of a group word: generator index with exponent +1 or -1.
struct Letter {
  int gen = 0;
  int exp = 1;

  /// Canonical letter order: generator index, then +1 before -1.
  int code() const { return 2 * gen + (exp < 0 ? 1 : 0); }
  Letter inverse() const { return {gen, -exp}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Reduced word; composition reads left to right as maps, so the word
/// (g1, g2) denotes g1 o g2.
struct GroupWord {
  std::vector<Letter> letters;

  std::size_t length() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  bool is_reduced() const;

  /// Canonical order: shorter first, then lexicographic by letter code.
  friend bool operator<(const GroupWord& u, const GroupWord& v);
  friend bool operator==(const GroupWord&, const GroupWord&) = default;
};

GroupWord concat(const GroupWord& u, const GroupWord& v);
GroupWord inverse(const GroupWord& w);

struct GroupPresentation {
  std::vector<MoebiusMap> generators;
  /// 2 * generators.size() labels: generator g at 2g, its inverse at 2g+1.
  std::vector<std::string> labels;

  /// Labels default to T1, T1^-1, T2, ... when `names` is empty.
  static GroupPresentation make(std::vector<MoebiusMap> generators,
                                std::vector<std::string> names = {});

  std::size_t rank() const { return generators.size(); }
  MoebiusMap letter_matrix(Letter l) const;
  const std::string& label(Letter l) const { return labels.at(l.code()); }
  /// Looks a label up; throws ConfigError when unknown.
  Letter letter(const std::string& label) const;
};

MoebiusMap word_matrix(const GroupPresentation& G, const GroupWord& w);
std::string to_string(const GroupPresentation& G, const GroupWord& w);
/// Parses space-separated letter labels; "I" or "" is the identity.
GroupWord parse_word(const GroupPresentation& G, const std::string& text);

struct BallEntry {
  GroupWord word;
  MoebiusMap matrix;
};

/// Distinct group elements of word length <= radius, canonical order.
struct WordBall {
  std::vector<BallEntry> entries;
  int radius = 0;

  std::size_t size() const { return entries.size(); }
  /// Index of the entry whose matrix equals T up to scalar, or -1.
  std::ptrdiff_t find(const MoebiusMap& T, double tol = 1e-9) const;
};

/// Breadth-first enumeration of reduced words of length <= N with matrices
/// merged up to scalar (keeping the canonically smaller word). Child
/// matrices of each level are computed in parallel; merging is sequential
/// in canonical order, so the result is independent of the thread count.
WordBall enumerate_ball(const GroupPresentation& G, int N, double tol = 1e-9);

/// Single-threaded reference for enumerate_ball.
WordBall enumerate_ball_serial(const GroupPresentation& G, int N,
                               double tol = 1e-9);

}  // namespace h3flow
