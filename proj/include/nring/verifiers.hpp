#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nring/direct_method.hpp"

namespace nring {

// A finite point set standing in for a ball of the algebra. Default
// construction is an integer lattice rescaled into the ball plus a
// seeded random fill, so sups are deterministic and reproducible.
struct grid {
  algebra_ptr space;
  std::vector<element> points;
  std::string description;
};

struct grid_options {
  int lattice_extent = 10;          // lattice runs -extent..extent per axis
  std::size_t lattice_budget = 2048;  // cap on the full tensor lattice
  std::size_t random_points = 256;
  double radius = 1.0;
  std::uint64_t seed = 0x9247ULL;
};

grid default_grid(const algebra_ptr& space, const grid_options& opt = {});

// Deterministic index tuples into a grid, for pair and tuple sups.
std::vector<std::vector<element>> sample_tuples(const grid& g, std::size_t n,
                                                std::size_t count = 512,
                                                std::uint64_t seed = 0x7a91ULL);

// Outcome of one sup scan. The witness is the argument tuple attaining
// the sup (first occurrence on ties); re-evaluating the functional at
// the witness reproduces sup exactly. tolerance is absolute; when a
// bound is present, satisfied means sup <= bound + tolerance.
struct defect_report {
  std::string functional;
  double sup = 0.0;
  std::vector<element> witness;
  std::optional<double> bound;
  double tolerance = 0.0;
  bool satisfied = true;
  std::size_t samples = 0;
  std::map<std::string, double> params;
  std::string note;
};

// sup |f(a) - h(a)| over the grid against the flat bound eps. h must be
// additive on grid pairs to 1e-9 (not_additive otherwise).
defect_report check_hyers_bound(const map_spec& f, const map_spec& h,
                                double eps, const grid& g,
                                double tolerance = 1e-9);

// sup |f(a) - D(a)| / |a|^p against 2 eps / |2 - 2^p|. Points with
// |a|^p below 1e-12 are skipped; p = 1 and p < 0 are rejected.
defect_report check_rassias_bound(const map_spec& f, const map_spec& D,
                                  double eps, double p, const grid& g,
                                  double rel_tol = 1e-6);

struct hypothesis_reports {
  defect_report cauchy;
  defect_report multiplicative;
};

// Empirical hypothesis sups for homomorphism stability:
//   sup |f(a+b) - f(a) - f(b)| / (|a|^p + |b|^p)   against budget.eps
//   sup |f(prod a_i) - prod f(a_i)| / prod |a_i|^q against budget.delta
// Weights below 1e-12 are skipped. Exponents equal to 1 are computed but
// flagged in the report note (the stability theorems exclude them); pass
// an infinite budget entry to measure without asserting.
hypothesis_reports check_hom_hypotheses(const map_spec& f,
                                        const defect_budget& budget,
                                        const grid& g,
                                        std::size_t tuple_count = 512,
                                        std::uint64_t seed = 0);

enum class der_weight { sum_powers, product_powers };

// Same shape for derivation stability; the multiplicative functional is
// der_defect and the weight is sum |a_i|^p or prod |a_i|^q.
hypothesis_reports check_der_hypotheses(const map_spec& f,
                                        const defect_budget& budget,
                                        der_weight weight, const grid& g,
                                        std::size_t tuple_count = 512,
                                        std::uint64_t seed = 0);

// sup over tuples and split positions k of both mixed products
//   (prod_{i<=k} h(a_i)) (prod_{i>k} f(a_i) - prod_{i>k} h(a_i))
//   (prod_{i<=k} f(a_i) - prod_{i<=k} h(a_i)) (prod_{i>k} h(a_i))
// which vanish when h is the direct limit of an f with uniformly small
// multiplicative defect.
defect_report orthogonality_check(const map_spec& f, const map_spec& h,
                                  const std::vector<std::vector<element>>& tuples,
                                  double tolerance = 1e-6,
                                  std::optional<std::pair<int, int>> k_range = {});

// Homogeneous maps coincide with their limit map exactly; requires the
// homogeneity flag (not_homogeneous otherwise).
defect_report homogeneity_implies_equality(const map_spec& f, const map_spec& D,
                                           const grid& g,
                                           double tolerance = 1e-12);

}  // namespace nring
