#pragma once

#include <memory>

#include "h3flow/autoform.hpp"
#include "h3flow/domain.hpp"
#include "h3flow/group.hpp"

namespace h3flow::example3 {

/// T1..T5, labelled "T1", "T1^-1", ...:
///   T1 = ((1, -2), (0, 2))            T2 = ((1, 0), (0, 2))
///   T3 = ((1, -1 - sqrt3 i), (0, 2))  T4 = ((1, 3 + sqrt3 i), (0, 2))
///   T5 = ((1, 2), (0, 1))
GroupPresentation group();

/// H1(p) = p + 1/2 + (sqrt3/2) i + 5 j.
RationalMap h1();
/// H2(p) = 1.
RationalMap h2();

constexpr int kDefaultWeight = 2;
constexpr int kDefaultRadius = 6;

std::shared_ptr<const AutomorphicField> field(int radius = kDefaultRadius, int m = kDefaultWeight);

/// Cusp prism over the rhombus 0, 2, 3 + sqrt3 i, 1 + sqrt3 i. The slanted
/// sides are paired by T5 and the horizontal ones by T3^-1 T2 (translation
/// by 1 + sqrt3 i).
FundamentalDomain domain();

/// Fixed interior evaluation points used by diagnostics.
std::vector<HPoint> probe_points();

}  // namespace h3flow::example3
