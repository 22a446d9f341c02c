#include "h3flow/autoform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "h3flow/errors.hpp"

namespace h3flow {

namespace {

constexpr double kOverflow = 1e300;
// theta_2 is treated as zero once it cancels below this fraction of its
// largest summand.
constexpr double kCancellation = 1e-12;

Quaternion q(Complex c) { return Quaternion::from_complex(c); }

double rel_diff(const Quaternion& a, const Quaternion& b) {
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

struct TermResult {
  Quaternion value;
  std::optional<std::string> error;  // pole or overflow message
  bool overflow = false;
};

TermResult safe_term(const ThetaConfig& cfg, const BallEntry& e, const HPoint& p) {
  TermResult r;
  try {
    r.value = theta_term(cfg, e.matrix, p);
    if (!r.value.is_finite() || r.value.norm() > kOverflow) {
      r.error = "theta term overflow";
      r.overflow = true;
    }
  } catch (const PoleError& ex) {
    r.error = ex.what();
  } catch (const DomainError& ex) {
    r.error = ex.what();
  }
  return r;
}

[[noreturn]] void raise(const TermResult& r, const BallEntry& e) {
  // Words are shown by letter code because the ball carries no labels.
  std::string word;
  for (const Letter& l : e.word.letters) {
    if (!word.empty()) word += ' ';
    word += "g" + std::to_string(l.gen + 1) + (l.exp < 0 ? "^-1" : "");
  }
  if (word.empty()) word = "I";
  if (r.overflow) throw OverflowError(*r.error + " at word " + word);
  throw PoleError(*r.error + " at word " + word, word);
}

struct ThetaSum {
  Quaternion value;
  double largest = 0.0;
};

ThetaSum sum_serial(const ThetaConfig& cfg, const HPoint& p) {
  ThetaSum s;
  for (const BallEntry& e : cfg.ball->entries) {
    const TermResult r = safe_term(cfg, e, p);
    if (r.error) raise(r, e);
    s.value += r.value;
    s.largest = std::max(s.largest, r.value.norm());
  }
  return s;
}

ThetaSum sum_parallel(const ThetaConfig& cfg, const HPoint& p) {
  const auto& entries = cfg.ball->entries;
  const auto n = static_cast<std::ptrdiff_t>(entries.size());
  std::vector<TermResult> terms(entries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    terms[static_cast<std::size_t>(i)] = safe_term(cfg, entries[static_cast<std::size_t>(i)], p);
  }
  ThetaSum s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].error) raise(terms[i], entries[i]);
    s.value += terms[i].value;
    s.largest = std::max(s.largest, terms[i].value.norm());
  }
  return s;
}

void check_interior(const HPoint& p) {
  if (!p.interior()) throw DomainError("theta series evaluated off the interior");
}

Quaternion divide(const ThetaSum& num, const ThetaSum& den) {
  if (den.value.norm() <= kCancellation * den.largest || den.value.is_zero()) {
    throw PoleError("theta_2 vanishes: field has a pole (equilibrium-pole)");
  }
  return num.value * inv(den.value);
}

}  // namespace

Quaternion Polynomial::eval(const Quaternion& p) const {
  if (coeffs.empty()) return {};
  Quaternion acc = coeffs.back();
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) acc = acc * p + *it;
  return acc;
}

bool Polynomial::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Quaternion& c) { return c.is_zero(); });
}

Quaternion RationalMap::eval(const Quaternion& p) const {
  const Quaternion d = den.eval(p);
  if (d.norm() <= 1e-300) throw PoleError("rational function evaluated at a pole");
  return num.eval(p) * inv(d);
}

AutomorphicField AutomorphicField::make(std::shared_ptr<const WordBall> ball, int m,
                                        RationalMap h1, RationalMap h2) {
  if (m < 2) throw DomainError("weight m must satisfy m >= 2");
  if (!ball) throw DomainError("automorphic field needs a word ball");
  if (h1.den.is_zero() || h2.den.is_zero()) {
    throw DomainError("rational function with zero denominator");
  }
  AutomorphicField F;
  F.theta1 = {m, std::move(h1), ball, true};
  F.theta2 = {m, std::move(h2), ball, false};
  return F;
}

Quaternion theta_term(const ThetaConfig& cfg, const MoebiusMap& T, const HPoint& p) {
  const Quaternion pq = p.to_quaternion();
  const Quaternion factor = q(T.c) * pq + q(T.d);
  const HPoint image = apply(T, p);
  const Quaternion h = cfg.h.eval(image.to_quaternion());
  if (cfg.modified) {
    return pow_int(factor, -(2 * cfg.m - 2)) * inv(q(T.det())) * h;
  }
  return pow_int(factor, -2 * cfg.m) * h;
}

Quaternion eval_theta(const ThetaConfig& cfg, const HPoint& p) {
  check_interior(p);
  return sum_parallel(cfg, p).value;
}

Quaternion eval_theta_serial(const ThetaConfig& cfg, const HPoint& p) {
  check_interior(p);
  return sum_serial(cfg, p).value;
}

Quaternion eval_field(const AutomorphicField& F, const HPoint& p) {
  check_interior(p);
  const ThetaSum num = sum_parallel(F.theta1, p);
  const ThetaSum den = sum_parallel(F.theta2, p);
  return divide(num, den);
}

Quaternion eval_field_serial(const AutomorphicField& F, const HPoint& p) {
  check_interior(p);
  const ThetaSum num = sum_serial(F.theta1, p);
  const ThetaSum den = sum_serial(F.theta2, p);
  return divide(num, den);
}

double term_covariance_check(const AutomorphicField& F, const MoebiusMap& W,
                             const MoebiusMap& Tj, const HPoint& p) {
  const int m = F.m();
  const HPoint image = apply(Tj, p);
  const MoebiusMap WT = compose(W, Tj);
  const Quaternion factor = q(Tj.c) * p.to_quaternion() + q(Tj.d);

  const Quaternion lhs1 = theta_term(F.theta1, W, image);
  const Quaternion rhs1 =
      pow_int(factor, 2 * m - 2) * q(Tj.det()) * theta_term(F.theta1, WT, p);
  const Quaternion lhs2 = theta_term(F.theta2, W, image);
  const Quaternion rhs2 = pow_int(factor, 2 * m) * theta_term(F.theta2, WT, p);
  return std::max(rel_diff(lhs1, rhs1), rel_diff(lhs2, rhs2));
}

double term_covariance_check(const GroupPresentation& G, const AutomorphicField& F,
                             const GroupWord& w, int generator, const HPoint& p) {
  const MoebiusMap Tj = generator < 0 ? MoebiusMap::identity()
                                      : G.generators.at(static_cast<std::size_t>(generator));
  return term_covariance_check(F, word_matrix(G, w), Tj, p);
}

namespace {

double sweep_entry(const GroupPresentation& G, const AutomorphicField& F,
                   const BallEntry& e, const std::vector<HPoint>& points) {
  double worst = 0.0;
  for (const MoebiusMap& Tj : G.generators) {
    for (const HPoint& p : points) {
      worst = std::max(worst, term_covariance_check(F, e.matrix, Tj, p));
    }
  }
  return worst;
}

}  // namespace

double term_covariance_sweep(const GroupPresentation& G, const AutomorphicField& F,
                             const std::vector<HPoint>& points) {
  const auto& entries = F.ball().entries;
  const auto n = static_cast<std::ptrdiff_t>(entries.size());
  double worst = 0.0;
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : worst) reduction(|| : failed)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      worst = std::max(worst, sweep_entry(G, F, entries[static_cast<std::size_t>(i)], points));
    } catch (const Error&) {
      failed = true;
    }
  }
  if (failed) return term_covariance_sweep_serial(G, F, points);  // rethrows in order
  return worst;
}

double term_covariance_sweep_serial(const GroupPresentation& G, const AutomorphicField& F,
                                    const std::vector<HPoint>& points) {
  double worst = 0.0;
  for (const BallEntry& e : F.ball().entries) {
    worst = std::max(worst, sweep_entry(G, F, e, points));
  }
  return worst;
}

double covariance_residual(const AutomorphicField& F, const MoebiusMap& T,
                           const HPoint& p) {
  const Quaternion fp = eval_field(F, p);
  const Quaternion ftp = eval_field(F, apply(T, p));
  const Quaternion predicted = derivative_factor(T, p) * fp;
  return (ftp - predicted).norm() / (1.0 + fp.norm());
}

}  // namespace h3flow
