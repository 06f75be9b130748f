#include "nring/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "nring/rng.hpp"

namespace nring {

namespace {

constexpr double kStructureTol = 1e-12;
constexpr std::uint64_t kValidationSeed = 0x5eedba5eULL;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

std::vector<double> random_coords(splitmix64& rng, std::size_t dim) {
  std::vector<double> c(dim);
  for (auto& x : c) x = rng.symmetric();
  return c;
}

// coords of a * b under the structure tensor
std::vector<double> raw_mul(const algebra& alg, std::span<const double> a,
                            std::span<const double> b) {
  const std::size_t d = alg.dim();
  std::vector<double> out(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (b[j] == 0.0) continue;
      const double ab = a[i] * b[j];
      for (std::size_t k = 0; k < d; ++k) {
        const double c = alg.structure(i, j, k);
        if (c != 0.0) out[k] += ab * c;
      }
    }
  }
  return out;
}

}  // namespace

element::element(algebra_ptr alg, std::vector<double> coords)
    : alg_(std::move(alg)), coords_(std::move(coords)) {
  if (!alg_) throw construction_error("element: null algebra");
  if (coords_.size() != alg_->dim())
    throw construction_error("element: coordinate count " +
                             std::to_string(coords_.size()) +
                             " does not match algebra dimension " +
                             std::to_string(alg_->dim()));
  if (!all_finite(coords_))
    throw non_finite("element of " + alg_->name() +
                     " has a non-finite coordinate");
}

norm_kind norm_kind_from_string(const std::string& s) {
  if (s == "abs") return norm_kind::abs;
  if (s == "frobenius") return norm_kind::frobenius;
  if (s == "weighted_l1") return norm_kind::weighted_l1;
  throw config_error("unknown norm_kind '" + s + "'");
}

std::string to_string(norm_kind k) {
  switch (k) {
    case norm_kind::abs: return "abs";
    case norm_kind::frobenius: return "frobenius";
    case norm_kind::weighted_l1: return "weighted_l1";
  }
  return "?";
}

algebra_ptr algebra::make(algebra_def def) {
  if (def.dim == 0) throw construction_error("algebra: dimension must be positive");
  const std::size_t d = def.dim;
  if (def.structure.size() != d * d * d)
    throw construction_error("algebra '" + def.name +
                             "': structure tensor has wrong size");
  if (!all_finite(def.structure))
    throw construction_error("algebra '" + def.name +
                             "': non-finite structure constant");

  auto alg = std::shared_ptr<algebra>(new algebra());
  alg->name_ = def.name.empty() ? "algebra" : def.name;
  alg->dim_ = d;
  alg->structure_ = std::move(def.structure);
  alg->kind_ = def.kind;

  if (def.basis_labels.empty()) {
    for (std::size_t i = 0; i < d; ++i)
      alg->labels_.push_back("e" + std::to_string(i));
  } else if (def.basis_labels.size() == d) {
    alg->labels_ = std::move(def.basis_labels);
  } else {
    throw construction_error("algebra '" + alg->name_ + "': expected " +
                             std::to_string(d) + " basis labels");
  }

  switch (alg->kind_) {
    case norm_kind::abs:
      if (d != 1)
        throw construction_error("algebra '" + alg->name_ +
                                 "': abs norm requires dimension 1");
      break;
    case norm_kind::weighted_l1:
      if (def.l1_weights.empty()) {
        alg->weights_.assign(d, 1.0);
      } else if (def.l1_weights.size() == d) {
        alg->weights_ = std::move(def.l1_weights);
      } else {
        throw construction_error("algebra '" + alg->name_ +
                                 "': expected " + std::to_string(d) +
                                 " l1 weights");
      }
      for (double w : alg->weights_)
        if (!(w > 0.0) || !std::isfinite(w))
          throw construction_error("algebra '" + alg->name_ +
                                   "': l1 weights must be positive");
      break;
    case norm_kind::frobenius:
      if (!def.embedding_size)
        throw construction_error("algebra '" + alg->name_ +
                                 "': frobenius norm requires a matrix embedding");
      break;
  }

  if (def.embedding_size) {
    const std::size_t k = *def.embedding_size;
    if (k == 0 || def.embedding.size() != d * k * k)
      throw construction_error("algebra '" + alg->name_ +
                               "': embedding must supply one " +
                               std::to_string(k) + "x" + std::to_string(k) +
                               " matrix per basis element");
    alg->embed_k_ = k;
    alg->embedding_ = std::move(def.embedding);

    // The embedding must be an algebra homomorphism: M_i M_j equals the
    // structure-tensor combination of basis matrices. Exact for integer
    // data, 1e-12 otherwise.
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t r = 0; r < k; ++r) {
          for (std::size_t c = 0; c < k; ++c) {
            double prod = 0.0;
            for (std::size_t t = 0; t < k; ++t)
              prod += alg->embedding_[(i * k + r) * k + t] *
                      alg->embedding_[(j * k + t) * k + c];
            double comb = 0.0;
            for (std::size_t m = 0; m < d; ++m) {
              const double s = alg->structure(i, j, m);
              if (s != 0.0) comb += s * alg->embedding_[(m * k + r) * k + c];
            }
            if (std::abs(prod - comb) > kStructureTol)
              throw construction_error("algebra '" + alg->name_ +
                                       "': matrix embedding does not respect "
                                       "the product");
          }
        }
      }
    }
  }

  // Associativity on all basis triples: (e_i e_j) e_k == e_i (e_j e_k).
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t m = 0; m < d; ++m) {
          double lhs = 0.0, rhs = 0.0;
          for (std::size_t t = 0; t < d; ++t) {
            lhs += alg->structure(i, j, t) * alg->structure(t, k, m);
            rhs += alg->structure(j, k, t) * alg->structure(i, t, m);
          }
          if (std::abs(lhs - rhs) > kStructureTol)
            throw construction_error(
                "algebra '" + alg->name_ + "': structure tensor is not "
                "associative at basis triple (" + std::to_string(i) + "," +
                std::to_string(j) + "," + std::to_string(k) + ")");
        }
      }
    }
  }

  splitmix64 rng(hash_combine(kValidationSeed, d));

  // Norm sanity: zero maps to zero, random nonzero vectors to positive
  // values, and |t| scales out exactly up to 1e-12 relative.
  if (alg->norm_of(std::vector<double>(d, 0.0)) != 0.0)
    throw construction_error("algebra '" + alg->name_ + "': norm(0) != 0");
  for (int trial = 0; trial < 64; ++trial) {
    auto c = random_coords(rng, d);
    double mx = 0.0;
    for (double x : c) mx = std::max(mx, std::abs(x));
    if (mx == 0.0) continue;
    const double n1 = alg->norm_of(c);
    if (!(n1 > 0.0))
      throw construction_error("algebra '" + alg->name_ +
                               "': norm vanishes on a nonzero vector");
    const double t = 0.5 + 4.0 * rng.u01();
    auto ct = c;
    for (auto& x : ct) x *= t;
    const double nt = alg->norm_of(ct);
    if (std::abs(nt - t * n1) > 1e-12 * std::max(1.0, t * n1))
      throw construction_error("algebra '" + alg->name_ +
                               "': norm is not homogeneous");
  }

  // Submultiplicativity, sampled. Frobenius algebras with a verified
  // matrix realization are exempt; the matrix norm inequality holds.
  const bool exempt = alg->kind_ == norm_kind::frobenius && alg->embed_k_;
  if (!exempt) {
    for (int trial = 0; trial < 10000; ++trial) {
      auto a = random_coords(rng, d);
      auto b = random_coords(rng, d);
      const double na = alg->norm_of(a), nb = alg->norm_of(b);
      const double nab = alg->norm_of(raw_mul(*alg, a, b));
      if (nab > na * nb * (1.0 + 1e-12))
        throw construction_error("algebra '" + alg->name_ +
                                 "': norm is not submultiplicative "
                                 "(sampled violation)");
    }
  }

  return alg;
}

element algebra::zero() const {
  return element(shared_from_this(), std::vector<double>(dim_, 0.0));
}

element algebra::basis(std::size_t i) const {
  if (i >= dim_)
    throw construction_error("algebra '" + name_ + "': basis index out of range");
  std::vector<double> c(dim_, 0.0);
  c[i] = 1.0;
  return element(shared_from_this(), std::move(c));
}

element algebra::make_element(std::vector<double> coords) const {
  return element(shared_from_this(), std::move(coords));
}

std::vector<double> algebra::embed(std::span<const double> coords) const {
  if (!embed_k_)
    throw construction_error("algebra '" + name_ + "' has no matrix embedding");
  const std::size_t k = *embed_k_;
  std::vector<double> mat(k * k, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (coords[i] == 0.0) continue;
    for (std::size_t t = 0; t < k * k; ++t)
      mat[t] += coords[i] * embedding_[i * k * k + t];
  }
  return mat;
}

double algebra::norm_of(std::span<const double> coords) const {
  switch (kind_) {
    case norm_kind::abs:
      return std::abs(coords[0]);
    case norm_kind::frobenius: {
      const auto mat = embed(coords);
      double s = 0.0;
      for (double x : mat) s += x * x;
      return std::sqrt(s);
    }
    case norm_kind::weighted_l1: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) s += weights_[i] * std::abs(coords[i]);
      return s;
    }
  }
  return 0.0;
}

bool same_algebra(const element& a, const element& b) {
  return a.alg().get() == b.alg().get();
}

static void require_same(const element& a, const element& b, const char* op) {
  if (!same_algebra(a, b))
    throw algebra_mismatch(std::string(op) + ": elements of '" +
                           a.alg()->name() + "' and '" + b.alg()->name() +
                           "' cannot be combined");
}

element add(const element& a, const element& b) {
  require_same(a, b, "add");
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coord(i) + b.coord(i);
  return element(a.alg(), std::move(c));
}

element sub(const element& a, const element& b) {
  require_same(a, b, "sub");
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coord(i) - b.coord(i);
  return element(a.alg(), std::move(c));
}

element scale(double t, const element& a) {
  std::vector<double> c(a.coords().begin(), a.coords().end());
  for (auto& x : c) x *= t;
  return element(a.alg(), std::move(c));
}

element mul(const element& a, const element& b) {
  require_same(a, b, "mul");
  return element(a.alg(), raw_mul(*a.alg(), a.coords(), b.coords()));
}

double norm(const element& a) { return a.alg()->norm_of(a.coords()); }

double distance(const element& a, const element& b) { return norm(sub(a, b)); }

element product_chain(std::span<const element> elems) {
  if (elems.empty()) throw empty_chain("product_chain: empty factor list");
  element acc = elems[0];
  for (std::size_t i = 1; i < elems.size(); ++i) acc = mul(acc, elems[i]);
  return acc;
}

// The canonical factories memoize: algebra identity is by instance, so
// two calls must hand back the same object or elements from different
// call sites would refuse to mix.
algebra_ptr make_real_algebra() {
  static const algebra_ptr cached = [] {
    algebra_def def;
    def.name = "real";
    def.resize(1);
    def.set(0, 0, 0, 1.0);
    def.basis_labels = {"1"};
    def.kind = norm_kind::abs;
    return algebra::make(std::move(def));
  }();
  return cached;
}

algebra_ptr make_matrix_algebra(std::size_t k) {
  if (k == 0) throw construction_error("make_matrix_algebra: k must be positive");
  static std::map<std::size_t, algebra_ptr> cache;
  if (auto it = cache.find(k); it != cache.end()) return it->second;
  algebra_def def;
  def.name = "m" + std::to_string(k);
  def.resize(k * k);
  // basis E_{rc} in row-major order; E_{ab} E_{cd} = [b==c] E_{ad}
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c)
        for (std::size_t d = 0; d < k; ++d)
          if (b == c) def.set(a * k + b, c * k + d, a * k + d, 1.0);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c)
      def.basis_labels.push_back("e" + std::to_string(r + 1) +
                                 std::to_string(c + 1));
  def.kind = norm_kind::frobenius;
  def.embedding_size = k;
  def.embedding.assign(k * k * k * k, 0.0);
  for (std::size_t i = 0; i < k * k; ++i) def.embedding[i * k * k + i] = 1.0;
  auto made = algebra::make(std::move(def));
  cache.emplace(k, made);
  return made;
}

algebra_ptr make_zero_product_space(std::size_t dim, norm_kind kind,
                                    std::vector<double> l1_weights) {
  algebra_def def;
  def.name = "space" + std::to_string(dim);
  def.resize(dim);
  def.kind = kind;
  def.l1_weights = std::move(l1_weights);
  if (kind == norm_kind::frobenius)
    throw construction_error(
        "make_zero_product_space: frobenius norm needs an embedding; "
        "use weighted_l1 or abs");
  return algebra::make(std::move(def));
}

algebra_ptr parse_algebra(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("algebra file: ") + e.what());
  }
  try {
    algebra_def def;
    def.name = j.value("name", "algebra");
    def.resize(j.at("dim").get<std::size_t>());
    if (j.contains("labels"))
      def.basis_labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& quad : j.at("structure")) {
      if (!quad.is_array() || quad.size() != 4)
        throw config_error("algebra file: structure entries must be "
                           "(i, j, k, value) quadruples");
      const auto i = quad[0].get<std::size_t>();
      const auto jj = quad[1].get<std::size_t>();
      const auto k = quad[2].get<std::size_t>();
      if (i >= def.dim || jj >= def.dim || k >= def.dim)
        throw config_error("algebra file: structure index out of range");
      def.set(i, jj, k, quad[3].get<double>());
    }
    def.kind = norm_kind_from_string(j.value("norm_kind", "weighted_l1"));
    if (j.contains("weights"))
      def.l1_weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("matrix_embedding")) {
      const auto& emb = j.at("matrix_embedding");
      def.embedding_size = emb.at("size").get<std::size_t>();
      for (const auto& mat : emb.at("basis_matrices")) {
        const auto flat = mat.get<std::vector<double>>();
        def.embedding.insert(def.embedding.end(), flat.begin(), flat.end());
      }
    }
    return algebra::make(std::move(def));
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("algebra file: ") + e.what());
  }
}

algebra_ptr load_algebra(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open algebra file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_algebra(ss.str());
}

bimodule_ptr bimodule::make(bimodule_def def) {
  if (!def.base || !def.space)
    throw construction_error("bimodule: base and space are required");
  const std::size_t d = def.base->dim();
  const std::size_t m = def.space->dim();
  if (def.left.size() != d * m * m || def.right.size() != d * m * m)
    throw construction_error("bimodule '" + def.name +
                             "': action tensors have wrong size");
  if (!all_finite(def.left) || !all_finite(def.right))
    throw construction_error("bimodule '" + def.name +
                             "': non-finite action constant");

  auto mod = std::shared_ptr<bimodule>(new bimodule());
  mod->name_ = def.name.empty() ? "bimodule" : def.name;
  mod->base_ = def.base;
  mod->space_ = def.space;
  mod->left_ = std::move(def.left);
  mod->right_ = std::move(def.right);

  const auto& B = *mod->base_;
  auto lact = [&](std::size_t i, std::size_t x, std::size_t y) {
    return mod->left_[(i * m + x) * m + y];
  };
  auto ract = [&](std::size_t i, std::size_t x, std::size_t y) {
    return mod->right_[(i * m + x) * m + y];
  };

  // (ab).x == a.(b.x), x.(ab) == (x.a).b, and (a.x).b == a.(x.b),
  // all on basis triples to 1e-12.
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = 0; y < m; ++y) {
          double l_prod = 0.0, l_nest = 0.0;
          double r_prod = 0.0, r_nest = 0.0;
          double mixed_lr = 0.0, mixed_rl = 0.0;
          for (std::size_t t = 0; t < d; ++t) {
            const double s = B.structure(i, j, t);
            if (s != 0.0) {
              l_prod += s * lact(t, x, y);
              r_prod += s * ract(t, x, y);
            }
          }
          for (std::size_t t = 0; t < m; ++t) {
            l_nest += lact(j, x, t) * lact(i, t, y);
            r_nest += ract(i, x, t) * ract(j, t, y);
            mixed_lr += lact(i, x, t) * ract(j, t, y);
            mixed_rl += ract(j, x, t) * lact(i, t, y);
          }
          if (std::abs(l_prod - l_nest) > kStructureTol)
            throw construction_error("bimodule '" + mod->name_ +
                                     "': left action is not associative");
          if (std::abs(r_prod - r_nest) > kStructureTol)
            throw construction_error("bimodule '" + mod->name_ +
                                     "': right action is not associative");
          if (std::abs(mixed_lr - mixed_rl) > kStructureTol)
            throw construction_error("bimodule '" + mod->name_ +
                                     "': left and right actions do not commute");
        }
      }
    }
  }

  // Boundedness |a.x| <= |a| |x| on a seeded sample.
  splitmix64 rng(hash_combine(kValidationSeed, d * 131 + m));
  for (int trial = 0; trial < 2000; ++trial) {
    auto a = mod->base_->make_element(random_coords(rng, d));
    auto x = mod->space_->make_element(random_coords(rng, m));
    const double bound = norm(a) * norm(x) * (1.0 + 1e-12);
    if (norm(mod->left_mul(a, x)) > bound)
      throw construction_error("bimodule '" + mod->name_ +
                               "': left action is unbounded (sampled violation)");
    if (norm(mod->right_mul(x, a)) > bound)
      throw construction_error("bimodule '" + mod->name_ +
                               "': right action is unbounded (sampled violation)");
  }

  return mod;
}

bimodule_ptr bimodule::regular(const algebra_ptr& alg) {
  if (!alg) throw construction_error("bimodule::regular: null algebra");
  auto mod = std::shared_ptr<bimodule>(new bimodule());
  mod->name_ = alg->name() + " (regular)";
  mod->base_ = alg;
  mod->space_ = alg;
  const std::size_t d = alg->dim();
  mod->left_.assign(d * d * d, 0.0);
  mod->right_.assign(d * d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < d; ++x)
      for (std::size_t y = 0; y < d; ++y) {
        mod->left_[(i * d + x) * d + y] = alg->structure(i, x, y);
        mod->right_[(i * d + x) * d + y] = alg->structure(x, i, y);
      }
  return mod;
}

element bimodule::left_mul(const element& a, const element& x) const {
  if (a.alg().get() != base_.get())
    throw algebra_mismatch("bimodule '" + name_ +
                           "': left factor is not in the base algebra");
  if (x.alg().get() != space_.get())
    throw algebra_mismatch("bimodule '" + name_ +
                           "': module element is not in the carrier space");
  const std::size_t d = base_->dim(), m = space_->dim();
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    if (a.coord(i) == 0.0) continue;
    for (std::size_t xx = 0; xx < m; ++xx) {
      if (x.coord(xx) == 0.0) continue;
      const double ax = a.coord(i) * x.coord(xx);
      for (std::size_t y = 0; y < m; ++y) {
        const double c = left_[(i * m + xx) * m + y];
        if (c != 0.0) out[y] += ax * c;
      }
    }
  }
  return element(space_, std::move(out));
}

element bimodule::right_mul(const element& x, const element& a) const {
  if (a.alg().get() != base_.get())
    throw algebra_mismatch("bimodule '" + name_ +
                           "': right factor is not in the base algebra");
  if (x.alg().get() != space_.get())
    throw algebra_mismatch("bimodule '" + name_ +
                           "': module element is not in the carrier space");
  const std::size_t d = base_->dim(), m = space_->dim();
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    if (a.coord(i) == 0.0) continue;
    for (std::size_t xx = 0; xx < m; ++xx) {
      if (x.coord(xx) == 0.0) continue;
      const double ax = a.coord(i) * x.coord(xx);
      for (std::size_t y = 0; y < m; ++y) {
        const double c = right_[(i * m + xx) * m + y];
        if (c != 0.0) out[y] += ax * c;
      }
    }
  }
  return element(space_, std::move(out));
}

}  // namespace nring
