#include "nring/map_catalog.hpp"

#include <algorithm>
#include <cmath>

#include "nring/rng.hpp"

namespace nring {

namespace {

double phi_log(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 0.0;
  return x * std::log(ax);
}

// Noise direction in the span of the value basis, scaled into the unit
// ball of the codomain norm. Pure function of (hash, basis).
std::vector<double> noise_direction(std::uint64_t h, const algebra_ptr& codomain,
                                    const std::vector<element>& value_basis) {
  const std::size_t d = codomain->dim();
  std::vector<double> w(d, 0.0);
  splitmix64 g(h);
  if (value_basis.empty()) {
    for (std::size_t i = 0; i < d; ++i) w[i] = g.symmetric();
  } else {
    for (const auto& b : value_basis) {
      const double u = g.symmetric();
      for (std::size_t i = 0; i < d; ++i) w[i] += u * b.coord(i);
    }
  }
  const double nw = codomain->norm_of(w);
  if (nw > 1.0)
    for (auto& x : w) x /= nw;
  return w;
}

}  // namespace

perturbation_kind perturbation_kind_from_string(const std::string& s) {
  if (s == "none") return perturbation_kind::none;
  if (s == "sine_bump") return perturbation_kind::sine_bump;
  if (s == "hash_noise") return perturbation_kind::hash_noise;
  if (s == "power_noise") return perturbation_kind::power_noise;
  if (s == "log_map") return perturbation_kind::log_map;
  if (s == "custom_polynomial") return perturbation_kind::custom_polynomial;
  throw config_error("unknown perturbation family '" + s + "'");
}

std::string to_string(perturbation_kind k) {
  switch (k) {
    case perturbation_kind::none: return "none";
    case perturbation_kind::sine_bump: return "sine_bump";
    case perturbation_kind::hash_noise: return "hash_noise";
    case perturbation_kind::power_noise: return "power_noise";
    case perturbation_kind::log_map: return "log_map";
    case perturbation_kind::custom_polynomial: return "custom_polynomial";
  }
  return "?";
}

void validate(const defect_budget& b) {
  // +inf is allowed: an infinite entry means "measure, assert nothing".
  if (!(b.eps >= 0.0) || std::isnan(b.eps))
    throw invalid_eps("defect budget: eps must be a nonnegative real");
  if (!(b.delta >= 0.0) || std::isnan(b.delta))
    throw invalid_eps("defect budget: delta must be a nonnegative real");
  if (b.n < 2) throw config_error("defect budget: n must be at least 2");
  for (const auto& e : {b.p, b.q})
    if (e && (!std::isfinite(*e) || *e < 0.0))
      throw unsupported_exponent("defect budget: exponents must be finite and >= 0");
}

map_spec::map_spec(algebra_ptr domain, algebra_ptr codomain,
                   std::vector<double> base_linear, perturbation pert,
                   bool homogeneous)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      base_linear_(std::move(base_linear)),
      pert_(std::move(pert)),
      homogeneous_(homogeneous) {
  if (!domain_ || !codomain_) throw construction_error("map_spec: null algebra");
  if (base_linear_.size() != codomain_->dim() * domain_->dim())
    throw construction_error("map_spec: base_linear must be " +
                             std::to_string(codomain_->dim()) + "x" +
                             std::to_string(domain_->dim()));
  for (double x : base_linear_)
    if (!std::isfinite(x))
      throw non_finite("map_spec: non-finite base_linear entry");

  switch (pert_.kind) {
    case perturbation_kind::none:
      break;
    case perturbation_kind::sine_bump:
      if (!std::isfinite(pert_.amplitude))
        throw construction_error("map_spec: sine_bump amplitude must be finite");
      break;
    case perturbation_kind::hash_noise:
    case perturbation_kind::power_noise:
      if (!(pert_.eps >= 0.0) || !std::isfinite(pert_.eps))
        throw invalid_eps("map_spec: noise eps must be a finite nonnegative real");
      if (!(pert_.quantization_step > 0.0))
        throw construction_error("map_spec: quantization step must be positive");
      if (pert_.kind == perturbation_kind::power_noise &&
          (!(pert_.exponent >= 0.0) || !std::isfinite(pert_.exponent)))
        throw unsupported_exponent("map_spec: power_noise exponent must be >= 0");
      break;
    case perturbation_kind::log_map:
      if (domain_->dim() != 1)
        throw domain_mismatch("map_spec: log_map needs a scalar domain");
      if (pert_.value_basis.empty() && codomain_->dim() != 1)
        throw construction_error("map_spec: log_map into a higher-dimensional "
                                 "codomain needs a target slot");
      break;
    case perturbation_kind::custom_polynomial:
      if (domain_->dim() != 1)
        throw domain_mismatch("map_spec: custom_polynomial needs a scalar domain");
      if (pert_.poly.size() != codomain_->dim())
        throw construction_error("map_spec: custom_polynomial needs one "
                                 "coefficient row per codomain coordinate");
      break;
  }

  for (const auto& b : pert_.value_basis)
    if (b.alg().get() != codomain_.get())
      throw algebra_mismatch("map_spec: value basis element is not in the codomain");

  if (homogeneous_ && pert_.kind != perturbation_kind::none)
    throw construction_error("map_spec: only perturbation-free maps may be "
                             "declared homogeneous");
}

map_spec map_spec::identity(const algebra_ptr& alg, perturbation pert,
                            bool homogeneous) {
  const std::size_t d = alg->dim();
  std::vector<double> eye(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) eye[i * d + i] = 1.0;
  return map_spec(alg, alg, std::move(eye), std::move(pert), homogeneous);
}

map_spec map_spec::scaled(double pre, double post) const {
  if (!std::isfinite(pre) || !std::isfinite(post))
    throw non_finite("map_spec::scaled: non-finite scale");
  map_spec out = *this;
  out.pre_scale_ *= pre;
  out.post_scale_ *= post;
  return out;
}

map_spec map_spec::with_module(bimodule_ptr mod) const {
  if (!mod) throw construction_error("map_spec::with_module: null module");
  if (mod->base().get() != domain_.get() || mod->space().get() != codomain_.get())
    throw domain_mismatch("map_spec::with_module: module does not match the "
                          "map's domain and codomain");
  map_spec out = *this;
  out.module_ = std::move(mod);
  return out;
}

bimodule_ptr map_spec::module() const {
  if (module_) return module_;
  if (domain_.get() == codomain_.get()) return bimodule::regular(domain_);
  return nullptr;
}

element eval(const map_spec& f, const element& a) {
  if (a.alg().get() != f.domain().get())
    throw domain_mismatch("eval: argument is not in the map's domain");
  const std::size_t dd = f.domain()->dim();
  const std::size_t cd = f.codomain()->dim();

  std::vector<double> arg(dd);
  for (std::size_t i = 0; i < dd; ++i) arg[i] = f.pre_scale() * a.coord(i);

  std::vector<double> out(cd, 0.0);
  const auto L = f.base_linear();
  for (std::size_t k = 0; k < cd; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < dd; ++j) s += L[k * dd + j] * arg[j];
    out[k] = s;
  }

  const auto& p = f.pert();
  switch (p.kind) {
    case perturbation_kind::none:
      break;
    case perturbation_kind::sine_bump:
      // bump rides on the linear image, coordinate by coordinate
      for (std::size_t k = 0; k < cd; ++k) out[k] += p.amplitude * std::sin(out[k]);
      break;
    case perturbation_kind::hash_noise: {
      if (p.eps > 0.0) {
        const auto h = quantized_hash(arg, p.quantization_step, p.seed);
        const auto dir = noise_direction(h, f.codomain(), p.value_basis);
        for (std::size_t k = 0; k < cd; ++k) out[k] += p.eps * dir[k];
      }
      break;
    }
    case perturbation_kind::power_noise: {
      const double an = f.domain()->norm_of(arg);
      if (p.eps > 0.0 && an > 0.0) {
        const double mag = p.eps * std::pow(an, p.exponent);
        const auto h = quantized_hash(arg, p.quantization_step, p.seed);
        const auto dir = noise_direction(h, f.codomain(), p.value_basis);
        for (std::size_t k = 0; k < cd; ++k) out[k] += mag * dir[k];
      }
      break;
    }
    case perturbation_kind::log_map: {
      const double v = phi_log(arg[0]);
      if (p.value_basis.empty()) {
        out[0] += v;
      } else {
        const auto& slot = p.value_basis[0];
        for (std::size_t k = 0; k < cd; ++k) out[k] += v * slot.coord(k);
      }
      break;
    }
    case perturbation_kind::custom_polynomial: {
      const double x = arg[0];
      for (std::size_t k = 0; k < cd; ++k) {
        double acc = 0.0;
        // Horner, highest coefficient first
        const auto& row = p.poly[k];
        for (std::size_t t = row.size(); t-- > 0;) acc = acc * x + row[t];
        out[k] += acc;
      }
      break;
    }
  }

  for (auto& x : out) x *= f.post_scale();
  return element(f.codomain(), std::move(out));
}

element linear_part(const map_spec& f, const element& a) {
  map_spec bare(f.domain(), f.codomain(),
                std::vector<double>(f.base_linear().begin(), f.base_linear().end()));
  return eval(bare.scaled(f.pre_scale(), f.post_scale()), a);
}

double cauchy_defect(const map_spec& f, const element& a, const element& b) {
  const element lhs = eval(f, add(a, b));
  const element rhs = add(eval(f, a), eval(f, b));
  return distance(lhs, rhs);
}

static void check_tuple(const map_spec& f, std::span<const element> tuple,
                        const char* op) {
  if (tuple.size() < 2)
    throw domain_mismatch(std::string(op) + ": need at least two factors");
  for (const auto& a : tuple)
    if (a.alg().get() != f.domain().get())
      throw domain_mismatch(std::string(op) +
                            ": tuple element is not in the map's domain");
}

double hom_defect(const map_spec& f, std::span<const element> tuple) {
  check_tuple(f, tuple, "hom_defect");
  const element lhs = eval(f, product_chain(tuple));
  element rhs = eval(f, tuple[0]);
  for (std::size_t i = 1; i < tuple.size(); ++i)
    rhs = mul(rhs, eval(f, tuple[i]));
  return distance(lhs, rhs);
}

double der_defect(const map_spec& f, std::span<const element> tuple) {
  check_tuple(f, tuple, "der_defect");
  const bimodule_ptr mod = f.module();
  if (!mod)
    throw domain_mismatch("der_defect: codomain carries no bimodule structure "
                          "over the domain");
  const element lhs = eval(f, product_chain(tuple));
  element sum = f.codomain()->zero();
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    element term = eval(f, tuple[j]);
    if (j + 1 < tuple.size()) {
      const element suffix =
          product_chain(tuple.subspan(j + 1, tuple.size() - j - 1));
      term = mod->right_mul(term, suffix);
    }
    if (j > 0) {
      const element prefix = product_chain(tuple.subspan(0, j));
      term = mod->left_mul(prefix, term);
    }
    sum = add(sum, term);
  }
  return distance(lhs, sum);
}

static void require_plain_linear(const map_spec& h0, const char* op) {
  if (h0.pert().kind != perturbation_kind::none)
    throw not_additive(std::string(op) +
                       ": the reference map must be perturbation-free");
}

map_spec make_perturbed_hom(const map_spec& h0, double eps,
                            double quantization_step, std::uint64_t seed,
                            std::vector<element> value_basis) {
  require_plain_linear(h0, "make_perturbed_hom");
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw invalid_eps("make_perturbed_hom: eps must be a finite nonnegative real");
  perturbation p;
  p.kind = perturbation_kind::hash_noise;
  p.eps = eps;
  p.quantization_step = quantization_step;
  p.seed = seed;
  p.value_basis = std::move(value_basis);
  return map_spec(h0.domain(), h0.codomain(),
                  std::vector<double>(h0.base_linear().begin(),
                                      h0.base_linear().end()),
                  std::move(p));
}

map_spec make_perturbed_power(const map_spec& h0, double eps, double p,
                              std::uint64_t seed,
                              std::vector<element> value_basis) {
  require_plain_linear(h0, "make_perturbed_power");
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw invalid_eps("make_perturbed_power: eps must be a finite nonnegative real");
  perturbation pp;
  pp.kind = perturbation_kind::power_noise;
  pp.eps = eps;
  pp.exponent = p;
  pp.seed = seed;
  pp.value_basis = std::move(value_basis);
  return map_spec(h0.domain(), h0.codomain(),
                  std::vector<double>(h0.base_linear().begin(),
                                      h0.base_linear().end()),
                  std::move(pp));
}

double bounded_noise_sup(const map_spec& f) {
  const auto& p = f.pert();
  switch (p.kind) {
    case perturbation_kind::none:
      return 0.0;
    case perturbation_kind::hash_noise:
      return std::abs(f.post_scale()) * p.eps;
    case perturbation_kind::sine_bump: {
      // coordinate-wise values in [-A, A]; the norm is monotone in the
      // coordinate magnitudes for every norm kind we carry
      std::vector<double> ones(f.codomain()->dim(), 1.0);
      return std::abs(f.post_scale()) * std::abs(p.amplitude) *
             f.codomain()->norm_of(ones);
    }
    default:
      throw unsupported_exponent("bounded_noise_sup: perturbation family '" +
                                 to_string(p.kind) + "' is not bounded");
  }
}

double cauchy_envelope(const map_spec& f) { return 3.0 * bounded_noise_sup(f); }

double rassias_cauchy_envelope(const map_spec& f) {
  const auto& p = f.pert();
  if (p.kind != perturbation_kind::power_noise)
    throw unsupported_exponent(
        "rassias_cauchy_envelope: expected a power_noise perturbation");
  // |nu(a+b) - nu(a) - nu(b)| <= eps(|a+b|^p + |a|^p + |b|^p); fold the
  // first term into the weight with t^p subadditivity (p <= 1) or the
  // power-mean inequality (p > 1).
  const double expo = p.exponent;
  const double factor = expo <= 1.0 ? 2.0 : 1.0 + std::pow(2.0, expo - 1.0);
  return p.eps * factor;
}

double hom_defect_envelope(const map_spec& f, std::span<const element> tuple) {
  check_tuple(f, tuple, "hom_defect_envelope");
  const double nu = bounded_noise_sup(f);
  double prod_plain = 1.0, prod_fat = 1.0;
  for (const auto& a : tuple) {
    const double h = norm(linear_part(f, a));
    prod_plain *= h;
    prod_fat *= h + nu;
  }
  return nu + (prod_fat - prod_plain);
}

}  // namespace nring
