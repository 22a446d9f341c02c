#include "h3flow/scenarios.hpp"

#include <cmath>

namespace h3flow::example3 {

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

GroupPresentation group() {
  return GroupPresentation::make({
      MoebiusMap{1.0, -2.0, 0.0, 2.0},
      MoebiusMap{1.0, 0.0, 0.0, 2.0},
      MoebiusMap{1.0, Complex{-1.0, -kSqrt3}, 0.0, 2.0},
      MoebiusMap{1.0, Complex{3.0, kSqrt3}, 0.0, 2.0},
      MoebiusMap{1.0, 2.0, 0.0, 1.0},
  });
}

RationalMap h1() { return RationalMap::affine({0.5, kSqrt3 / 2.0, 5.0, 0.0}, kOne); }

RationalMap h2() { return RationalMap::constant(kOne); }

std::shared_ptr<const AutomorphicField> field(int radius, int m) {
  auto ball = std::make_shared<const WordBall>(enumerate_ball(group(), radius));
  return std::make_shared<const AutomorphicField>(AutomorphicField::make(ball, m, h1(), h2()));
}

FundamentalDomain domain() {
  FundamentalDomain D;
  D.geometry = Geometry::upper_half_space;
  const MoebiusMap shift_x = MoebiusMap::translation(2.0);
  const MoebiusMap shift_diag = MoebiusMap::translation(Complex{1.0, kSqrt3});
  D.sides.push_back({"s0", HalfSpace{{-kSqrt3 / 2, 0.5, 0.0}, 0.0}, "s1", inverse(shift_x), "T5^-1"});
  D.sides.push_back({"s1", HalfSpace{{kSqrt3 / 2, -0.5, 0.0}, kSqrt3}, "s0", shift_x, "T5"});
  D.sides.push_back({"t0", HalfSpace{{0.0, -1.0, 0.0}, 0.0}, "t1", inverse(shift_diag), "T2^-1 T3"});
  D.sides.push_back({"t1", HalfSpace{{0.0, 1.0, 0.0}, kSqrt3}, "t0", shift_diag, "T3^-1 T2"});
  D.box_lo = {-1.0, 0.0, 0.05};
  D.box_hi = {4.0, kSqrt3, 4.0};
  D.outline = {{0.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, {3.0, kSqrt3, 0.0}, {1.0, kSqrt3, 0.0}};
  return D;
}

std::vector<HPoint> probe_points() {
  return {{0.3, 0.2, 1.0}, {1.0, 0.5, 0.5}, {1.5, 1.0, 1.5}, {2.0, 1.2, 0.8},
          {0.8, 0.3, 2.0}, {1.2, 0.9, 0.3}, {2.5, 1.5, 1.0}, {1.7, 0.4, 2.5},
          {0.9, 1.1, 0.7}, {2.2, 0.6, 1.2}};
}

}  // namespace h3flow::example3
