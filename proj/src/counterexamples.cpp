#include "nring/counterexamples.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "nring/rng.hpp"

namespace nring {

namespace {

constexpr double kRankTol = 1e-10;

// Row-echelon rank; rows below tol are treated as zero. The surviving
// echelon rows are kept so spans can be grown product by product.
std::size_t reduce_rows(std::vector<std::vector<double>>& rows, double tol) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    double best = std::abs(rows[rank][c]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (std::abs(rows[r][c]) > best) {
        best = std::abs(rows[r][c]);
        piv = r;
      }
    }
    if (best <= tol) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const double factor = rows[r][c] / rows[rank][c];
      if (factor == 0.0) continue;
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= factor * rows[rank][k];
    }
    ++rank;
  }
  rows.resize(rank);
  return rank;
}

element random_element(const algebra_ptr& alg, splitmix64& rng) {
  std::vector<double> c(alg->dim());
  for (auto& v : c) v = rng.symmetric();
  return alg->make_element(std::move(c));
}

}  // namespace

static algebra_ptr build_nilpotent_algebra_fresh();

// Memoized: algebra identity is by instance, and callers must be able
// to mix elements made here with elements from other call sites.
algebra_ptr build_nilpotent_algebra() {
  static const algebra_ptr cached = build_nilpotent_algebra_fresh();
  return cached;
}

static algebra_ptr build_nilpotent_algebra_fresh() {
  const std::pair<int, int> slots[] = {{1, 2}, {1, 3}, {1, 4},
                                       {2, 3}, {2, 4}, {3, 4}};
  std::map<std::pair<int, int>, std::size_t> index;
  algebra_def def;
  def.name = "ut4";
  def.resize(6);
  def.basis_labels.resize(6);
  def.kind = norm_kind::frobenius;
  def.embedding_size = 4;
  def.embedding.assign(6 * 16, 0.0);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto [a, b] = slots[i];
    index[{a, b}] = i;
    def.basis_labels[i] = "e" + std::to_string(a) + std::to_string(b);
    def.embedding[i * 16 + static_cast<std::size_t>((a - 1) * 4 + (b - 1))] = 1.0;
  }
  // e_ab e_cd = [b == c] e_ad; the (a, d) slot is always strictly upper.
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const auto [a, b] = slots[i];
      const auto [c, d] = slots[j];
      if (b == c) def.set(i, j, index.at({a, d}), 1.0);
    }
  return algebra::make(std::move(def));
}

std::size_t power_ideal_dim(const algebra_ptr& alg, int k) {
  if (!alg) throw construction_error("power_ideal_dim: null algebra");
  if (k < 1) throw construction_error("power_ideal_dim: k must be >= 1");
  const std::size_t d = alg->dim();
  std::vector<std::vector<double>> span;
  for (std::size_t i = 0; i < d; ++i) {
    const element e = alg->basis(i);
    span.emplace_back(e.coords().begin(), e.coords().end());
  }
  reduce_rows(span, kRankTol);
  // A^k = span{(A^{k-1} basis) * basis}; grow one factor at a time.
  for (int step = 2; step <= k; ++step) {
    std::vector<std::vector<double>> next;
    for (const auto& row : span) {
      const element left = alg->make_element(row);
      for (std::size_t j = 0; j < d; ++j) {
        const element prod = left * alg->basis(j);
        next.emplace_back(prod.coords().begin(), prod.coords().end());
      }
    }
    reduce_rows(next, kRankTol);
    span = std::move(next);
    if (span.empty()) return 0;
  }
  return span.size();
}

derivation_scan every_linear_is_4derivation(std::size_t trials,
                                            std::uint64_t seed) {
  const auto alg = build_nilpotent_algebra();
  const std::size_t d = alg->dim();
  splitmix64 rng(seed);

  double sup4 = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<double> lin(d * d);
    for (auto& v : lin) v = rng.symmetric();
    const map_spec f(alg, alg, lin, perturbation{}, false);
    for (int rep = 0; rep < 64; ++rep) {
      std::vector<element> tup;
      tup.reserve(4);
      for (int i = 0; i < 4; ++i) tup.push_back(random_element(alg, rng));
      sup4 = std::max(sup4, der_defect(f, tup));
    }
  }

  // Contrast witness: a basis-supported map with an order-2 Leibniz
  // defect. First hit in scan order keeps the result reproducible.
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      std::vector<double> lin(d * d, 0.0);
      lin[q * d + p] = 1.0;  // e_p -> e_q
      map_spec w(alg, alg, lin, perturbation{}, false);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          std::vector<element> pair{alg->basis(i), alg->basis(j)};
          const double defect = der_defect(w, pair);
          if (defect > 0.1) {
            return derivation_scan{trials, sup4, std::move(w),
                                   std::move(pair), defect};
          }
        }
    }
  throw construction_error(
      "every_linear_is_4derivation: no 2-defect witness found");
}

map_spec build_luminet_map() {
  const auto real = make_real_algebra();
  const auto m3 = make_matrix_algebra(3);
  perturbation pert;
  pert.kind = perturbation_kind::log_map;
  pert.value_basis = {m3->basis(3)};  // the (2,1) matrix slot
  return map_spec(real, m3, std::vector<double>(m3->dim(), 0.0), pert, false);
}

divergence_profile_result divergence_profile(const map_spec& f, int m_max) {
  schedule sched;
  sched.kind = schedule_kind::dyadic;
  sched.s = 1;
  sched.m_max = m_max;
  sched.tol = 1e-9;
  const element one = f.domain()->basis(0);
  divergence_profile_result out{{}, direct_limit(f, one, sched)};
  out.rows.reserve(out.trace.iterates.size());
  for (const auto& it : out.trace.iterates)
    out.rows.push_back(divergence_profile_row{
        it.m, norm(it.value), it.step_norm.value_or(0.0)});
  return out;
}

premise_reports premise_report(const map_spec& f, const grid& g) {
  defect_budget budget;
  budget.eps = std::numeric_limits<double>::infinity();
  budget.delta = std::numeric_limits<double>::infinity();
  budget.p = 1.0;
  budget.q = 2.0;
  budget.n = 2;
  auto reports = check_hom_hypotheses(f, budget, g);
  reports.cauchy.functional = "premise_cauchy_ratio";
  reports.cauchy.note =
      "measured additive-defect ratio at linear weight; no bound asserted";
  reports.multiplicative.functional = "premise_hom_ratio";
  reports.multiplicative.note =
      "measured product-defect ratio at quadratic weight; no bound asserted";
  return premise_reports{std::move(reports.cauchy),
                         std::move(reports.multiplicative)};
}

grid premise_grid(const algebra_ptr& real_alg, double radius,
                  std::uint64_t seed) {
  grid_options opt;
  opt.lattice_extent = 64;
  opt.random_points = 128;
  opt.radius = radius;
  opt.seed = seed;
  return default_grid(real_alg, opt);
}

}  // namespace nring
