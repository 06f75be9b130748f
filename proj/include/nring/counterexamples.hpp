#pragma once

#include <cstdint>
#include <vector>

#include "nring/verifiers.hpp"

namespace nring {

// Strictly upper-triangular 4x4 real matrices: 6-dimensional, Frobenius
// norm, nilpotent of index 4 (all 4-fold products vanish).
algebra_ptr build_nilpotent_algebra();

// Dimension of the span of all k-fold products of basis elements.
// Rank of the stacked product vectors; pivots below 1e-10 count as zero.
std::size_t power_ideal_dim(const algebra_ptr& alg, int k);

struct derivation_scan {
  std::size_t trials = 0;
  double sup_4_defect = 0.0;   // worst n = 4 Leibniz defect over the scan
  map_spec witness_map;        // a linear map that is not a 2-ring derivation
  std::vector<element> witness_pair;
  double witness_2_defect = 0.0;
};

// On the nilpotent algebra every linear self-map satisfies the 4-fold
// Leibniz rule, because each summand contains a 3-fold product of basis
// elements times anything, which is already deep enough to vanish.
// The scan samples random linear maps and random 4-tuples, then exhibits
// a basis-supported map with a visible 2-fold defect for contrast.
derivation_scan every_linear_is_4derivation(std::size_t trials = 100,
                                            std::uint64_t seed = 2026);

// f: R -> M3(R), x -> phi(x) E21 with phi(x) = x ln|x| for |x| > 1 and 0
// otherwise. Additively unstable at the critical exponent: the dyadic
// iterates at 1 walk off to infinity by a fixed step of ln 2.
map_spec build_luminet_map();

struct divergence_profile_row {
  int m = 0;
  double value_norm = 0.0;  // |h_m(1)|, equals m ln 2
  double step = 0.0;        // |h_m(1) - h_{m-1}(1)|, 0 at m = 0
};

struct divergence_profile_result {
  std::vector<divergence_profile_row> rows;
  iteration_trace trace;
};

divergence_profile_result divergence_profile(const map_spec& f, int m_max = 50);

struct premise_reports {
  defect_report cauchy_ratio;  // sup |f(a+b)-f(a)-f(b)| / (|a| + |b|)
  defect_report hom_ratio;     // sup |f(ab)-f(a)f(b)| / (|a| |b|)^2
};

// Empirical hypothesis constants of a scalar-domain map on a grid: the
// map sits inside every linear-weight stability hypothesis (the ratios
// stay bounded) yet admits no additive companion. No bound is asserted;
// the reports are measurements.
premise_reports premise_report(const map_spec& f, const grid& g);

// Scalar lattice plus seeded random points in [-radius, radius].
grid premise_grid(const algebra_ptr& real_alg, double radius,
                  std::uint64_t seed = 0x9247);

}  // namespace nring
