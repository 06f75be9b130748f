#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nring/algebra.hpp"

using namespace nring;

TEST_CASE("real algebra arithmetic and norm") {
  auto real = make_real_algebra();
  CHECK(real->dim() == 1);
  auto a = real->make_element({2.0});
  auto b = real->make_element({3.0});
  CHECK((a * b).coord(0) == 6.0);
  CHECK((a + b).coord(0) == 5.0);
  CHECK(norm(real->make_element({-5.0})) == 5.0);
  CHECK(distance(a, b) == 1.0);
}

TEST_CASE("factories return one instance per signature") {
  // element compatibility is by algebra instance, so the factories must
  // hand back the same object every call
  CHECK(make_real_algebra().get() == make_real_algebra().get());
  CHECK(make_matrix_algebra(2).get() == make_matrix_algebra(2).get());
  CHECK(make_matrix_algebra(2).get() != make_matrix_algebra(3).get());
}

TEST_CASE("matrix algebra structure and frobenius norm") {
  auto m2 = make_matrix_algebra(2);
  REQUIRE(m2->dim() == 4);
  // basis is row-major matrix units: e11 e12 e21 e22
  auto e11 = m2->basis(0);
  auto e12 = m2->basis(1);
  auto e21 = m2->basis(2);
  auto e22 = m2->basis(3);
  CHECK(distance(e11 * e12, e12) == 0.0);
  CHECK(norm(e12 * e11) == 0.0);
  CHECK(distance(e21 * e12, e22) == 0.0);
  // frobenius norm of [[1,2],[3,4]]: sqrt(1+4+9+16)
  auto x = m2->make_element({1.0, 2.0, 3.0, 4.0});
  CHECK(norm(x) == doctest::Approx(std::sqrt(30.0)).epsilon(1e-15));
  // submultiplicative on a few concrete pairs
  auto y = m2->make_element({0.5, -1.0, 2.0, 0.25});
  CHECK(norm(x * y) <= norm(x) * norm(y) + 1e-12);
}

TEST_CASE("product chain folds left to right and rejects bad input") {
  auto m2 = make_matrix_algebra(2);
  std::vector<element> chain = {m2->basis(0), m2->basis(1), m2->basis(3)};
  // e11 e12 e22 = e12
  CHECK(distance(product_chain(chain), m2->basis(1)) == 0.0);
  std::vector<element> single = {m2->basis(2)};
  CHECK(distance(product_chain(single), m2->basis(2)) == 0.0);
  std::vector<element> none;
  CHECK_THROWS_AS(product_chain(none), empty_chain);
  auto real = make_real_algebra();
  std::vector<element> mixed = {m2->basis(0), real->make_element({1.0})};
  CHECK_THROWS_AS(product_chain(mixed), algebra_mismatch);
}

TEST_CASE("element construction rejects non finite coordinates") {
  auto real = make_real_algebra();
  CHECK_THROWS_AS(real->make_element({std::nan("")}), non_finite);
  CHECK_THROWS_AS(real->make_element({INFINITY}), non_finite);
  CHECK_THROWS_AS(real->make_element({1.0, 2.0}), construction_error);
}

TEST_CASE("mixing algebras in arithmetic is rejected") {
  auto real = make_real_algebra();
  auto m2 = make_matrix_algebra(2);
  CHECK_THROWS_AS(add(real->make_element({1.0}), m2->basis(0)), algebra_mismatch);
  CHECK(!same_algebra(real->make_element({1.0}), m2->basis(0)));
}

TEST_CASE("non associative structure tensor is rejected") {
  algebra_def def;
  def.name = "broken";
  def.resize(2);
  // e0 e0 = e1 and e0 e1 = e0 breaks (e0 e0) e0 = e0 (e0 e0)
  def.set(0, 0, 1, 1.0);
  def.set(0, 1, 0, 1.0);
  def.kind = norm_kind::weighted_l1;
  CHECK_THROWS_AS(algebra::make(def), construction_error);
}

TEST_CASE("norm that fails submultiplicativity is rejected") {
  algebra_def def;
  def.name = "halfweight";
  def.resize(1);
  def.set(0, 0, 0, 1.0);
  def.kind = norm_kind::weighted_l1;
  def.l1_weights = {0.5};  // |e0 * e0| = 0.5 > |e0| |e0| = 0.25
  CHECK_THROWS_AS(algebra::make(def), construction_error);
}

TEST_CASE("zero product space") {
  auto v = make_zero_product_space(3, norm_kind::weighted_l1, {1.0, 2.0, 3.0});
  auto x = v->make_element({1.0, -1.0, 1.0});
  CHECK(norm(x) == 6.0);
  CHECK(norm(x * x) == 0.0);
  // frobenius needs a matrix realization the zero product cannot supply
  CHECK_THROWS_AS(make_zero_product_space(2, norm_kind::frobenius),
                  construction_error);
}

TEST_CASE("structure constant file round trip") {
  // complex numbers as a 2-dimensional real algebra, l1 norm
  const std::string text = R"({
    "name": "complexes",
    "dim": 2,
    "labels": ["one", "i"],
    "structure": [[0,0,0,1], [0,1,1,1], [1,0,1,1], [1,1,0,-1]],
    "norm_kind": "weighted_l1"
  })";
  auto c = parse_algebra(text);
  CHECK(c->dim() == 2);
  CHECK(c->basis_labels()[1] == "i");
  auto i = c->basis(1);
  // i * i = -1
  CHECK(distance(i * i, scale(-1.0, c->basis(0))) == 0.0);
  CHECK(norm(c->make_element({3.0, -4.0})) == 7.0);

  const char* path = "roundtrip_algebra.json";
  { std::ofstream out(path); out << text; }
  auto c2 = load_algebra(path);
  CHECK(c2->dim() == 2);
  std::remove(path);

  CHECK_THROWS_AS(parse_algebra("{ not valid json"), config_error);
  CHECK_THROWS_AS(parse_algebra(R"({"dim": 2, "structure": [[0,0,5,1]]})"),
                  config_error);
  CHECK_THROWS_AS(load_algebra("no_such_file.json"), config_error);
}

TEST_CASE("regular bimodule multiplies like the algebra") {
  auto m2 = make_matrix_algebra(2);
  auto mod = bimodule::regular(m2);
  auto a = m2->make_element({1.0, 2.0, 0.0, -1.0});
  auto x = m2->make_element({0.0, 1.0, 1.0, 0.5});
  CHECK(distance(mod->left_mul(a, x), a * x) == 0.0);
  CHECK(distance(mod->right_mul(x, a), x * a) == 0.0);
}

TEST_CASE("zero action bimodule passes validation") {
  auto m2 = make_matrix_algebra(2);
  auto v = make_zero_product_space(2, norm_kind::weighted_l1);
  bimodule_def def;
  def.name = "trivial";
  def.base = m2;
  def.space = v;
  def.left.assign(m2->dim() * v->dim() * v->dim(), 0.0);
  def.right.assign(m2->dim() * v->dim() * v->dim(), 0.0);
  auto mod = bimodule::make(def);
  auto x = v->make_element({1.0, 1.0});
  CHECK(norm(mod->left_mul(m2->basis(0), x)) == 0.0);
}

TEST_CASE("bimodule with incompatible action tensor is rejected") {
  auto m2 = make_matrix_algebra(2);
  auto v = make_zero_product_space(2, norm_kind::weighted_l1);
  bimodule_def def;
  def.name = "short";
  def.base = m2;
  def.space = v;
  def.left.assign(3, 0.0);  // wrong size
  def.right.assign(m2->dim() * v->dim() * v->dim(), 0.0);
  CHECK_THROWS_AS(bimodule::make(def), construction_error);
}
