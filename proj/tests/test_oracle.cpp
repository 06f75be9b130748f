#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "nring/counterexamples.hpp"
#include "nring/oracle.hpp"

using namespace nring;

namespace {

// independent restatement of the minimax objective, for cross-checking
// the fitted distance without going through the optimizer
double brute_objective(const sampled_map& s, const element& x) {
  double worst = 0.0;
  for (int t = -s.extent; t <= s.extent; ++t) {
    const element lin = scale(static_cast<double>(t), x);
    worst = std::max(worst, distance(s.values[t + s.extent], lin));
  }
  return worst;
}

}  // namespace

TEST_CASE("sampling a map along a generator") {
  auto real = make_real_algebra();
  auto f = map_spec::identity(real);
  auto g = real->make_element({1.0});
  auto s = sample_map(f, g, 8);
  REQUIRE(s.values.size() == 17);
  CHECK(s.values[0].coord(0) == -8.0);
  CHECK(s.values[8].coord(0) == 0.0);
  CHECK(s.values[16].coord(0) == 8.0);
  CHECK_THROWS_AS(sample_map(f, g, 0), construction_error);
  auto m2 = make_matrix_algebra(2);
  CHECK_THROWS_AS(sample_map(f, m2->basis(0), 8), algebra_mismatch);
}

TEST_CASE("exactly linear data returns its rate untouched") {
  auto real = make_real_algebra();
  map_spec f(real, real, {2.0});
  auto s = sample_map(f, real->make_element({1.0}), 512);
  auto fit = nearest_additive_chebyshev(s);
  CHECK(fit.x0.coord(0) == 2.0);
  CHECK(fit.distance == 0.0);
  CHECK(fit.evaluations <= 400000);
}

TEST_CASE("minimax fit of t ln t matches an independent optimum") {
  auto f = build_luminet_map();
  auto real = make_real_algebra();
  auto g = real->make_element({1.0});

  auto s128 = sample_map(f, g, 128);
  auto fit128 = nearest_additive_chebyshev(s128);
  // frozen from an independent piecewise-linear minimax computation
  CHECK(fit128.distance == doctest::Approx(35.64207431546248).epsilon(1e-9));
  // the reported distance is the objective at the reported point
  CHECK(brute_objective(s128, fit128.x0) == fit128.distance);
  // the fit cannot be worse than the independently located optimum
  auto x_star = f.codomain()->make_element([&] {
    std::vector<double> c(9, 0.0);
    c[3] = 4.573576558330068;
    return c;
  }());
  CHECK(fit128.distance <= brute_objective(s128, x_star) + 1e-6);

  auto s512 = sample_map(f, g, 512);
  auto fit512 = nearest_additive_chebyshev(s512);
  CHECK(fit512.distance == doctest::Approx(142.573348546234).epsilon(1e-9));
  // no additive companion: the distance grows with the window
  CHECK(fit512.distance / fit128.distance >= 1.5);
}

TEST_CASE("fit is locally optimal under single coordinate probes") {
  auto real = make_real_algebra();
  auto f = make_perturbed_hom(map_spec::identity(real), 0.5,
                              default_quantization_step, 51);
  auto s = sample_map(f, real->make_element({1.0}), 64);
  auto fit = nearest_additive_chebyshev(s);
  CHECK(fit.distance <= 0.5 + 1e-12);  // never worse than the noise band
  const double delta = 10.0 * fit.final_step;
  for (double sign : {+1.0, -1.0}) {
    auto probe = real->make_element({fit.x0.coord(0) + sign * delta});
    CHECK(brute_objective(s, probe) >= fit.distance - 1e-15);
  }
}

TEST_CASE("oracle rate agrees with the direct method limit") {
  auto real = make_real_algebra();
  const double eps = 0.5;
  auto f = make_perturbed_hom(map_spec::identity(real), eps,
                              default_quantization_step, 3);
  schedule sched{schedule_kind::dyadic, +1, 40, 1e-11};
  defect_budget budget{eps, 0.0, {}, {}, 2};
  auto cv = cross_validate(f, real->make_element({1.0}), 512, sched, eps,
                           budget);
  CHECK(cv.agrees);
  CHECK(cv.agreement_bound == 2.0 * eps / 512.0);
  CHECK(cv.difference <= cv.agreement_bound);
  CHECK_THROWS_AS(
      cross_validate(f, real->make_element({1.0}), 512, sched, -1.0, budget),
      invalid_eps);
}

TEST_CASE("cross validation propagates divergence") {
  auto f = build_luminet_map();
  auto real = make_real_algebra();
  schedule sched{schedule_kind::dyadic, +1, 40, 1e-9};
  CHECK_THROWS_AS(
      cross_validate(f, real->make_element({1.0}), 64, sched, 1.0),
      limit_diverged);
}
