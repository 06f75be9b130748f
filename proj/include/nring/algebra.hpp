#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nring/errors.hpp"

namespace nring {

class algebra;
using algebra_ptr = std::shared_ptr<const algebra>;

enum class norm_kind { abs, frobenius, weighted_l1 };

norm_kind norm_kind_from_string(const std::string& s);
std::string to_string(norm_kind k);

// Raw material for algebra construction. The structure tensor is dense,
// entry (i, j, k) is the e_k coefficient of e_i * e_j.
struct algebra_def {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> basis_labels;  // defaulted to e0..e{dim-1} if empty
  std::vector<double> structure;          // dim^3, index (i*dim + j)*dim + k
  norm_kind kind = norm_kind::frobenius;
  std::vector<double> l1_weights;         // weighted_l1 only, defaults to ones
  // Optional realization inside k x k real matrices: one k*k row-major
  // matrix per basis element. Required for the frobenius norm.
  std::optional<std::size_t> embedding_size;
  std::vector<double> embedding;          // dim * k * k

  void resize(std::size_t d) {
    dim = d;
    structure.assign(d * d * d, 0.0);
  }
  void set(std::size_t i, std::size_t j, std::size_t k, double v) {
    structure[(i * dim + j) * dim + k] = v;
  }
};

// Element of a finite-dimensional normed algebra: a coordinate vector in
// the basis of its parent algebra. Immutable; all coordinates are finite
// (construction rejects NaN and Inf with non_finite).
class element {
 public:
  element(algebra_ptr alg, std::vector<double> coords);

  const algebra_ptr& alg() const { return alg_; }
  std::span<const double> coords() const { return coords_; }
  double coord(std::size_t i) const { return coords_[i]; }
  std::size_t dim() const { return coords_.size(); }

 private:
  algebra_ptr alg_;
  std::vector<double> coords_;
};

// Finite-dimensional associative normed real algebra, fixed at
// construction. make() validates, against the declared tolerance of
// 1e-12, associativity of the structure tensor on all basis triples,
// norm positivity and homogeneity on a seeded sample, and
// submultiplicativity of the norm on 10^4 seeded pairs. Algebras whose
// norm is the Frobenius norm of a verified matrix realization skip the
// sampling: the embedding consistency check is exact and the matrix
// norm inequality needs no experiment.
class algebra : public std::enable_shared_from_this<algebra> {
 public:
  static algebra_ptr make(algebra_def def);

  std::size_t dim() const { return dim_; }
  const std::string& name() const { return name_; }
  std::span<const std::string> basis_labels() const { return labels_; }
  norm_kind kind() const { return kind_; }
  std::optional<std::size_t> matrix_embedding() const { return embed_k_; }
  std::span<const double> l1_weights() const { return weights_; }

  double structure(std::size_t i, std::size_t j, std::size_t k) const {
    return structure_[(i * dim_ + j) * dim_ + k];
  }

  element zero() const;
  element basis(std::size_t i) const;
  element make_element(std::vector<double> coords) const;

  // k x k matrix realizing the coordinate vector, row-major
  std::vector<double> embed(std::span<const double> coords) const;
  double norm_of(std::span<const double> coords) const;

 private:
  algebra() = default;

  std::string name_;
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> structure_;
  norm_kind kind_ = norm_kind::frobenius;
  std::vector<double> weights_;
  std::optional<std::size_t> embed_k_;
  std::vector<double> embedding_;
};

bool same_algebra(const element& a, const element& b);

element add(const element& a, const element& b);
element sub(const element& a, const element& b);
element scale(double t, const element& a);
element mul(const element& a, const element& b);
double norm(const element& a);
double distance(const element& a, const element& b);

// Left-to-right product a_0 * a_1 * ... * a_{n-1}. Throws empty_chain on
// an empty span and algebra_mismatch on mixed parents.
element product_chain(std::span<const element> elems);

inline element operator+(const element& a, const element& b) { return add(a, b); }
inline element operator-(const element& a, const element& b) { return sub(a, b); }
inline element operator*(double t, const element& a) { return scale(t, a); }
inline element operator*(const element& a, const element& b) { return mul(a, b); }

// The reals with the absolute-value norm.
algebra_ptr make_real_algebra();
// Full matrix algebra of k x k real matrices, basis the matrix units in
// row-major order, Frobenius norm. k = 1 gives the reals again.
algebra_ptr make_matrix_algebra(std::size_t k);
// Normed space with the zero product, for use as a bimodule carrier.
algebra_ptr make_zero_product_space(std::size_t dim, norm_kind kind,
                                    std::vector<double> l1_weights = {});

// Structured-text loading; see README for the file format.
algebra_ptr load_algebra(const std::string& path);
algebra_ptr parse_algebra(const std::string& json_text);

class bimodule;
using bimodule_ptr = std::shared_ptr<const bimodule>;

struct bimodule_def {
  std::string name;
  algebra_ptr base;   // acting algebra
  algebra_ptr space;  // carrier of the module elements
  // action tensors, index (i*space_dim + x)*space_dim + y:
  // (e_i . u_x) = sum_y left[i][x][y] u_y  and  (u_x . e_i) likewise
  std::vector<double> left;
  std::vector<double> right;
};

// Two-sided module over an algebra. make() checks, to 1e-12 on basis
// triples, that both actions are associative with the algebra product,
// that they commute with each other, and that the actions are bounded by
// the norms on a seeded sample.
class bimodule {
 public:
  static bimodule_ptr make(bimodule_def def);
  // The algebra acting on itself by multiplication. Skips revalidation:
  // the algebra's own construction checks already cover it.
  static bimodule_ptr regular(const algebra_ptr& alg);

  const algebra_ptr& base() const { return base_; }
  const algebra_ptr& space() const { return space_; }
  const std::string& name() const { return name_; }

  element left_mul(const element& a, const element& x) const;
  element right_mul(const element& x, const element& a) const;

 private:
  bimodule() = default;

  std::string name_;
  algebra_ptr base_;
  algebra_ptr space_;
  std::vector<double> left_;
  std::vector<double> right_;
};

}  // namespace nring
