#include "h3flow/group.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "h3flow/errors.hpp"

namespace h3flow {

bool GroupWord::is_reduced() const {
  for (std::size_t i = 1; i < letters.size(); ++i) {
    if (letters[i] == letters[i - 1].inverse()) return false;
  }
  return true;
}

bool operator<(const GroupWord& u, const GroupWord& v) {
  if (u.length() != v.length()) return u.length() < v.length();
  for (std::size_t i = 0; i < u.length(); ++i) {
    const int cu = u.letters[i].code();
    const int cv = v.letters[i].code();
    if (cu != cv) return cu < cv;
  }
  return false;
}

GroupWord concat(const GroupWord& u, const GroupWord& v) {
  GroupWord out = u;
  for (const Letter& l : v.letters) {
    if (!out.letters.empty() && out.letters.back() == l.inverse()) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return out;
}

GroupWord inverse(const GroupWord& w) {
  GroupWord out;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    out.letters.push_back(it->inverse());
  }
  return out;
}

GroupPresentation GroupPresentation::make(std::vector<MoebiusMap> generators,
                                          std::vector<std::string> names) {
  GroupPresentation G;
  for (const MoebiusMap& T : generators) {
    if (T.det() == Complex{}) throw ConfigError("generator with zero determinant");
  }
  if (!names.empty() && names.size() != generators.size()) {
    throw ConfigError("one name per generator required");
  }
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const std::string base = names.empty() ? "T" + std::to_string(g + 1) : names[g];
    G.labels.push_back(base);
    G.labels.push_back(base + "^-1");
  }
  std::vector<std::string> sorted = G.labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("generator labels must be unique");
  }
  G.generators = std::move(generators);
  return G;
}

MoebiusMap GroupPresentation::letter_matrix(Letter l) const {
  const MoebiusMap& T = generators.at(static_cast<std::size_t>(l.gen));
  return l.exp > 0 ? T : inverse(T);
}

Letter GroupPresentation::letter(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) {
      return {static_cast<int>(i / 2), (i % 2 == 0) ? 1 : -1};
    }
  }
  throw ConfigError("unknown generator label '" + label + "'");
}

MoebiusMap word_matrix(const GroupPresentation& G, const GroupWord& w) {
  MoebiusMap M = MoebiusMap::identity();
  for (const Letter& l : w.letters) M = compose(M, G.letter_matrix(l));
  return M;
}

std::string to_string(const GroupPresentation& G, const GroupWord& w) {
  if (w.empty()) return "I";
  std::string out;
  for (const Letter& l : w.letters) {
    if (!out.empty()) out += ' ';
    out += G.label(l);
  }
  return out;
}

GroupWord parse_word(const GroupPresentation& G, const std::string& text) {
  GroupWord w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "I") continue;
    w = concat(w, GroupWord{{G.letter(tok)}});
  }
  return w;
}

namespace {

// Dedup index keyed on sign-invariant features of the det-1 matrix: the
// squares a^2, b^2, c^2, d^2 do not change under the +-I ambiguity.
// Candidates found in a cell are confirmed with equal_up_to_scalar. A
// coordinate that sits near a cell boundary is looked up on both sides.
class MatrixIndex {
 public:
  explicit MatrixIndex(double tol) : tol_(tol) {}

  std::ptrdiff_t find(const std::vector<BallEntry>& entries,
                      const MoebiusMap& T) const {
    const Features f = features(T);
    std::array<std::int64_t, 8> key{};
    return probe(entries, T, f, key, 0);
  }

  void insert(const MoebiusMap& T, std::size_t index) {
    const Features f = features(T);
    std::array<std::int64_t, 8> key{};
    for (int i = 0; i < 8; ++i) key[i] = static_cast<std::int64_t>(std::floor(f[i] / kCell));
    cells_[key].push_back(index);
  }

 private:
  using Features = std::array<double, 8>;
  static constexpr double kCell = 1e-3;

  struct KeyHash {
    std::size_t operator()(const std::array<std::int64_t, 8>& k) const {
      std::size_t h = 1469598103934665603ull;
      for (std::int64_t v : k) {
        h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      }
      return h;
    }
  };

  static Features features(const MoebiusMap& T) {
    const MoebiusMap N = normalize(T);
    const Complex sq[4] = {N.a * N.a, N.b * N.b, N.c * N.c, N.d * N.d};
    Features f{};
    for (int i = 0; i < 4; ++i) {
      f[2 * i] = sq[i].real();
      f[2 * i + 1] = sq[i].imag();
    }
    return f;
  }

  std::ptrdiff_t probe(const std::vector<BallEntry>& entries, const MoebiusMap& T,
                       const Features& f, std::array<std::int64_t, 8>& key,
                       int dim) const {
    if (dim == 8) {
      auto it = cells_.find(key);
      if (it == cells_.end()) return -1;
      for (std::size_t idx : it->second) {
        if (equal_up_to_scalar(entries[idx].matrix, T, tol_)) {
          return static_cast<std::ptrdiff_t>(idx);
        }
      }
      return -1;
    }
    // Every cell the tolerance window around f[dim] touches.
    const double slack = 10.0 * tol_ * std::max(1.0, std::abs(f[dim]));
    const auto first = static_cast<std::int64_t>(std::floor((f[dim] - slack) / kCell));
    const auto last = static_cast<std::int64_t>(std::floor((f[dim] + slack) / kCell));
    std::ptrdiff_t hit = -1;
    for (std::int64_t cell = first; cell <= last && hit < 0; ++cell) {
      key[dim] = cell;
      hit = probe(entries, T, f, key, dim + 1);
    }
    return hit;
  }

  double tol_;
  std::unordered_map<std::array<std::int64_t, 8>, std::vector<std::size_t>, KeyHash> cells_;
};

struct Candidate {
  std::size_t parent;
  Letter letter;
  MoebiusMap matrix;
};

std::vector<Letter> all_letters(const GroupPresentation& G) {
  std::vector<Letter> out;
  for (std::size_t g = 0; g < G.rank(); ++g) {
    out.push_back({static_cast<int>(g), 1});
    out.push_back({static_cast<int>(g), -1});
  }
  return out;
}

template <bool Parallel>
WordBall enumerate(const GroupPresentation& G, int N, double tol) {
  if (N < 0) throw DomainError("enumerate_ball: radius must be >= 0");
  WordBall ball;
  ball.radius = N;
  ball.entries.push_back({GroupWord{}, MoebiusMap::identity()});
  MatrixIndex index(tol);
  index.insert(MoebiusMap::identity(), 0);

  const std::vector<Letter> letters = all_letters(G);
  std::vector<MoebiusMap> letter_mats;
  for (const Letter& l : letters) letter_mats.push_back(G.letter_matrix(l));

  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  for (int len = 1; len <= N; ++len) {
    const std::size_t parents = level_end - level_begin;
    const std::size_t nl = letters.size();
    std::vector<Candidate> cand(parents * nl);
    // Canonical order within a level: parent order, then letter order.
    const auto fill = [&](std::ptrdiff_t i) {
      const std::size_t pi = static_cast<std::size_t>(i) / nl;
      const std::size_t li = static_cast<std::size_t>(i) % nl;
      const BallEntry& parent = ball.entries[level_begin + pi];
      Candidate& c = cand[static_cast<std::size_t>(i)];
      c.parent = level_begin + pi;
      c.letter = letters[li];
      if (!parent.word.empty() && parent.word.letters.back() == letters[li].inverse()) {
        c.parent = SIZE_MAX;  // not reduced
        return;
      }
      c.matrix = compose(parent.matrix, letter_mats[li]);
    };
    const auto total = static_cast<std::ptrdiff_t>(cand.size());
    if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < total; ++i) fill(i);
    } else {
      for (std::ptrdiff_t i = 0; i < total; ++i) fill(i);
    }
    for (const Candidate& c : cand) {
      if (c.parent == SIZE_MAX) continue;
      if (index.find(ball.entries, c.matrix) >= 0) continue;
      GroupWord w = ball.entries[c.parent].word;
      w.letters.push_back(c.letter);
      index.insert(c.matrix, ball.entries.size());
      ball.entries.push_back({std::move(w), c.matrix});
    }
    level_begin = level_end;
    level_end = ball.entries.size();
    if (level_begin == level_end) break;
  }
  return ball;
}

}  // namespace

std::ptrdiff_t WordBall::find(const MoebiusMap& T, double tol) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (equal_up_to_scalar(entries[i].matrix, T, tol)) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

WordBall enumerate_ball(const GroupPresentation& G, int N, double tol) {
  return enumerate<true>(G, N, tol);
}

WordBall enumerate_ball_serial(const GroupPresentation& G, int N, double tol) {
  return enumerate<false>(G, N, tol);
}

}  // namespace h3flow
