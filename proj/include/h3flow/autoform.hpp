#pragma once

#include <memory>
#include <vector>

#include "h3flow/group.hpp"
#include "h3flow/quaternion.hpp"

namespace h3flow {

/// sum_k coeffs[k] * p^k, coefficients multiplying from the left.
struct Polynomial {
  std::vector<Quaternion> coeffs;

  Quaternion eval(const Quaternion& p) const;
  bool is_zero() const;
};

/// H(p) = num(p) * den(p)^-1.
struct RationalMap {
  Polynomial num{{kOne}};
  Polynomial den{{kOne}};

  static RationalMap constant(const Quaternion& c) { return {{{c}}, {{kOne}}}; }
  /// c0 + c1 p.
  static RationalMap affine(const Quaternion& c0, const Quaternion& c1) {
    return {{{c0, c1}}, {{kOne}}};
  }

  /// Throws PoleError when den(p) vanishes.
  Quaternion eval(const Quaternion& p) const;
};

/// One theta series: weight m, rational H and the truncating word ball.
struct ThetaConfig {
  int m = 2;
  RationalMap h;
  std::shared_ptr<const WordBall> ball;
  bool modified = false;
};

/// F = theta~_1 * theta_2^-1 with a shared ball and weight.
struct AutomorphicField {
  ThetaConfig theta1;  // modified
  ThetaConfig theta2;  // classical

  /// Throws DomainError if m < 2.
  static AutomorphicField make(std::shared_ptr<const WordBall> ball, int m,
                               RationalMap h1, RationalMap h2);
  int m() const { return theta1.m; }
  const WordBall& ball() const { return *theta1.ball; }
};

/// Single summand for the element with matrix T:
///   classical: (c p + d)^-2m * H(T p)
///   modified:  (c p + d)^-(2m-2) * det^-1 * H(T p)
Quaternion theta_term(const ThetaConfig& cfg, const MoebiusMap& T, const HPoint& p);

/// Theta series over the ball. Terms are evaluated in parallel and summed
/// sequentially in canonical word order, so the value is bit-identical to
/// eval_theta_serial for any thread count. Throws PoleError (naming the
/// word) and OverflowError (|term| > 1e300).
Quaternion eval_theta(const ThetaConfig& cfg, const HPoint& p);
Quaternion eval_theta_serial(const ThetaConfig& cfg, const HPoint& p);

/// F(p) = theta~_1(p) * theta_2(p)^-1. Throws PoleError when theta_2 cancels
/// to zero (relative to its largest term).
Quaternion eval_field(const AutomorphicField& F, const HPoint& p);
Quaternion eval_field_serial(const AutomorphicField& F, const HPoint& p);

/// Per-term identity behind the covariance law. For the ball element with
/// matrix W and a map Tj:
///   term_W(Tj p) = (c_j p + d_j)^(2m-2) det_j * term_{W Tj}(p)   (modified)
///   term_W(Tj p) = (c_j p + d_j)^(2m)          * term_{W Tj}(p)   (classical)
/// Returns the larger relative residual of the two.
double term_covariance_check(const AutomorphicField& F, const MoebiusMap& W,
                             const MoebiusMap& Tj, const HPoint& p);
double term_covariance_check(const GroupPresentation& G, const AutomorphicField& F,
                             const GroupWord& w, int generator, const HPoint& p);

/// Maximum of term_covariance_check over every ball word, every generator
/// and every point. Parallel over words; the max is order-independent.
double term_covariance_sweep(const GroupPresentation& G, const AutomorphicField& F,
                             const std::vector<HPoint>& points);
double term_covariance_sweep_serial(const GroupPresentation& G, const AutomorphicField& F,
                                    const std::vector<HPoint>& points);

/// |F(T p) - factor(T, p) F(p)| / (1 + |F(p)|). A truncation diagnostic.
double covariance_residual(const AutomorphicField& F, const MoebiusMap& T,
                           const HPoint& p);

}  // namespace h3flow
