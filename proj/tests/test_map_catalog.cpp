#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "nring/map_catalog.hpp"
#include "nring/rng.hpp"

using namespace nring;

namespace {

const double pi = std::acos(-1.0);

map_spec sine_map(double amplitude) {
  perturbation pert;
  pert.kind = perturbation_kind::sine_bump;
  pert.amplitude = amplitude;
  return map_spec::identity(make_real_algebra(), pert);
}

}  // namespace

TEST_CASE("cauchy defect of x plus sin x") {
  auto real = make_real_algebra();
  auto f = sine_map(1.0);
  auto a = real->make_element({pi / 2.0});
  // |sin(pi) - 2 sin(pi/2)| = 2
  CHECK(cauchy_defect(f, a, a) == doctest::Approx(2.0).epsilon(1e-12));
  // additivity defect vanishes for the pure linear part
  auto lin = map_spec::identity(real);
  CHECK(cauchy_defect(lin, a, a) == 0.0);
}

TEST_CASE("hom defect of x plus sin x at (pi, pi)") {
  auto real = make_real_algebra();
  auto f = sine_map(1.0);
  auto a = real->make_element({pi});
  std::vector<element> pair = {a, a};
  // f(pi^2) - f(pi)^2 = sin(pi^2) - 2 pi sin(pi) - sin(pi)^2 and sin(pi)
  // is zero only in exact arithmetic; the dominant term is sin(pi^2)
  CHECK(hom_defect(f, pair) == doctest::Approx(0.4303012170000917).epsilon(1e-9));
}

TEST_CASE("hom and der defect need at least two factors") {
  auto f = map_spec::identity(make_real_algebra());
  std::vector<element> single = {make_real_algebra()->make_element({1.0})};
  CHECK_THROWS_AS(hom_defect(f, single), domain_mismatch);
  CHECK_THROWS_AS(der_defect(f, single), domain_mismatch);
}

TEST_CASE("evaluation is a pure function of the argument") {
  auto real = make_real_algebra();
  auto f = make_perturbed_hom(map_spec::identity(real), 0.5,
                              default_quantization_step, 7);
  auto x = real->make_element({0.3125});
  const double v1 = eval(f, x).coord(0);
  const double v2 = eval(f, x).coord(0);
  CHECK(std::memcmp(&v1, &v2, sizeof(double)) == 0);
  // different seed gives a different noise draw at a generic point
  auto g = make_perturbed_hom(map_spec::identity(real), 0.5,
                              default_quantization_step, 8);
  CHECK(eval(g, x).coord(0) != v1);
}

TEST_CASE("hash noise stays within eps everywhere") {
  auto real = make_real_algebra();
  const double eps = 0.5;
  auto f = make_perturbed_hom(map_spec::identity(real), eps,
                              default_quantization_step, 11);
  splitmix64 rng(99);
  double sup = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = 100.0 * rng.symmetric();
    auto e = real->make_element({x});
    sup = std::max(sup, std::abs(eval(f, e).coord(0) - x));
  }
  CHECK(sup <= eps);
  CHECK(sup > 0.4);  // the noise actually fills its band
  CHECK(bounded_noise_sup(f) == eps);
  CHECK(cauchy_envelope(f) == 3.0 * eps);
}

TEST_CASE("power noise vanishes at zero and respects the weight") {
  auto real = make_real_algebra();
  const double eps = 1.0, p = 0.5;
  auto f = make_perturbed_power(map_spec::identity(real), eps, p, 13);
  CHECK(norm(eval(f, real->make_element({0.0}))) == 0.0);
  splitmix64 rng(5);
  for (int i = 0; i < 5000; ++i) {
    const double x = 50.0 * rng.symmetric();
    auto e = real->make_element({x});
    const double nu = std::abs(eval(f, e).coord(0) - x);
    CHECK(nu <= eps * std::pow(std::abs(x), p) + 1e-15);
  }
  // bounded envelope is undefined for power noise
  CHECK_THROWS_AS(bounded_noise_sup(f), unsupported_exponent);
  CHECK(rassias_cauchy_envelope(f) == doctest::Approx(2.0 * eps).epsilon(1e-15));
  auto g = make_perturbed_power(map_spec::identity(real), eps, 3.0, 13);
  CHECK(rassias_cauchy_envelope(g) == doctest::Approx(5.0 * eps).epsilon(1e-15));
}

TEST_CASE("hom defect envelope dominates the measured defect") {
  auto real = make_real_algebra();
  auto f = make_perturbed_hom(map_spec::identity(real), 0.25,
                              default_quantization_step, 17);
  splitmix64 rng(31);
  for (int i = 0; i < 500; ++i) {
    std::vector<element> tuple = {real->make_element({rng.symmetric()}),
                                  real->make_element({rng.symmetric()}),
                                  real->make_element({rng.symmetric()})};
    CHECK(hom_defect(f, tuple) <= hom_defect_envelope(f, tuple) + 1e-12);
  }
}

TEST_CASE("perturbation factories validate their input") {
  auto real = make_real_algebra();
  auto h0 = map_spec::identity(real);
  CHECK_THROWS_AS(make_perturbed_hom(h0, -1.0, default_quantization_step, 0),
                  invalid_eps);
  CHECK_THROWS_AS(make_perturbed_power(h0, 1.0, -2.0, 0), unsupported_exponent);
  // stacking noise on an already perturbed map is rejected
  auto noisy = make_perturbed_hom(h0, 0.5, default_quantization_step, 0);
  CHECK_THROWS_AS(make_perturbed_hom(noisy, 0.5, default_quantization_step, 1),
                  not_additive);
  // eps = 0 reproduces the base map exactly
  auto clean = make_perturbed_hom(h0, 0.0, default_quantization_step, 0);
  auto x = real->make_element({0.71875});
  CHECK(eval(clean, x).coord(0) == x.coord(0));
}

TEST_CASE("homogeneous flag excludes perturbations") {
  auto real = make_real_algebra();
  perturbation pert;
  pert.kind = perturbation_kind::hash_noise;
  pert.eps = 0.1;
  CHECK_THROWS_AS(map_spec(real, real, {1.0}, pert, true), construction_error);
  map_spec ok(real, real, {3.0}, {}, true);
  CHECK(ok.homogeneous());
}

TEST_CASE("scaled evaluation composes pre and post factors") {
  auto real = make_real_algebra();
  auto f = sine_map(1.0);
  auto g = f.scaled(2.0, 0.5);
  auto x = real->make_element({0.7});
  const double expect = 0.5 * (2.0 * 0.7 + std::sin(2.0 * 0.7));
  CHECK(eval(g, x).coord(0) == doctest::Approx(expect).epsilon(1e-15));
  // linear_part drops the perturbation but keeps the scaling
  CHECK(linear_part(g, x).coord(0) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("log map evaluates t ln t into its slot") {
  auto real = make_real_algebra();
  auto m3 = make_matrix_algebra(3);
  perturbation pert;
  pert.kind = perturbation_kind::log_map;
  pert.value_basis = {m3->basis(3)};  // slot (2,1) in row-major units
  map_spec f(real, m3, std::vector<double>(9, 0.0), pert);
  auto v = eval(f, real->make_element({2.0}));
  CHECK(v.coord(3) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
  // |t| <= 1 collapses to zero; the map is odd
  CHECK(norm(eval(f, real->make_element({0.5}))) == 0.0);
  auto w = eval(f, real->make_element({-2.0}));
  CHECK(w.coord(3) == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-15));
  // matrix codomain without a slot is rejected
  perturbation bare;
  bare.kind = perturbation_kind::log_map;
  CHECK_THROWS_AS(map_spec(real, m3, std::vector<double>(9, 0.0), bare),
                  construction_error);
}

TEST_CASE("custom polynomial map") {
  auto real = make_real_algebra();
  perturbation pert;
  pert.kind = perturbation_kind::custom_polynomial;
  pert.poly = {{0.0, 0.0, 1.0}};  // x^2
  map_spec f(real, real, {0.0}, pert);
  CHECK(eval(f, real->make_element({3.0})).coord(0) == 9.0);
  CHECK_THROWS_AS(map_spec(make_matrix_algebra(2), real,
                           std::vector<double>(4, 0.0), pert),
                  domain_mismatch);
}

TEST_CASE("defect budget validation") {
  defect_budget b;
  b.eps = 1.0;
  b.delta = 2.0;
  b.n = 3;
  CHECK_NOTHROW(validate(b));
  // infinite entries mean measure only and are allowed
  b.delta = INFINITY;
  CHECK_NOTHROW(validate(b));
  b.delta = -1.0;
  CHECK_THROWS_AS(validate(b), invalid_eps);
  b.delta = 2.0;
  b.n = 1;
  CHECK_THROWS_AS(validate(b), config_error);
  b.n = 2;
  b.p = -0.5;
  CHECK_THROWS_AS(validate(b), unsupported_exponent);
}

TEST_CASE("quantized hash is stable under sub step jitter") {
  std::vector<double> a = {1.0, 2.0};
  std::vector<double> b = {1.0 + default_quantization_step / 8.0, 2.0};
  std::vector<double> c = {1.0 + 3.0 * default_quantization_step, 2.0};
  const auto ha = quantized_hash(a, default_quantization_step, 1);
  CHECK(ha == quantized_hash(b, default_quantization_step, 1));
  CHECK(ha != quantized_hash(c, default_quantization_step, 1));
  CHECK(ha != quantized_hash(a, default_quantization_step, 2));
}
