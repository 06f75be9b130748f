#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nring/algebra.hpp"

namespace nring {

// Quantization step shared by the deterministic noise families.
inline constexpr double default_quantization_step = 0x1.0p-20;

enum class perturbation_kind {
  none,
  sine_bump,          // amplitude * sin applied coordinate-wise to the linear image
  hash_noise,         // bounded: |nu(a)| <= eps, a pure function of quantized a
  power_noise,        // |nu(a)| <= eps * |a|^p, nu(0) = 0
  log_map,            // phi(x) = x ln|x| for |x| > 1, else 0, into a fixed slot
  custom_polynomial,  // per-coordinate polynomial in a scalar argument
};

perturbation_kind perturbation_kind_from_string(const std::string& s);
std::string to_string(perturbation_kind k);

struct perturbation {
  perturbation_kind kind = perturbation_kind::none;
  double amplitude = 0.0;  // sine_bump
  double eps = 0.0;        // hash_noise, power_noise
  double exponent = 0.0;   // power_noise
  double quantization_step = default_quantization_step;
  std::uint64_t seed = 0;
  // Span the noise is allowed to take values in; empty means the full
  // codomain basis. log_map uses the first entry as its target slot.
  std::vector<element> value_basis;
  // custom_polynomial: poly[j][k] is the x^k coefficient of coordinate j.
  std::vector<std::vector<double>> poly;
};

// Defect budget (eps, delta, p, q, n) an experiment asserts. An absent p
// means the bounded regime; present p means power-weighted bounds.
struct defect_budget {
  double eps = 0.0;
  double delta = 0.0;
  std::optional<double> p;
  std::optional<double> q;
  int n = 2;
};
void validate(const defect_budget& b);

// A map between algebras: a linear part plus one perturbation from the
// fixed catalog, with optional argument/result scaling. Evaluation is a
// pure function of the argument, so repeated evaluation is bit-identical.
class map_spec {
 public:
  map_spec(algebra_ptr domain, algebra_ptr codomain,
           std::vector<double> base_linear, perturbation pert = {},
           bool homogeneous = false);

  static map_spec identity(const algebra_ptr& alg, perturbation pert = {},
                           bool homogeneous = false);

  const algebra_ptr& domain() const { return domain_; }
  const algebra_ptr& codomain() const { return codomain_; }
  std::span<const double> base_linear() const { return base_linear_; }
  const perturbation& pert() const { return pert_; }
  bool homogeneous() const { return homogeneous_; }
  double pre_scale() const { return pre_scale_; }
  double post_scale() const { return post_scale_; }

  // Copy with composed scaling: x -> post * f(pre * x).
  map_spec scaled(double pre, double post) const;

  // Codomain viewed as a bimodule over the domain, for derivation-type
  // defects. Defaults to the regular bimodule when domain == codomain.
  map_spec with_module(bimodule_ptr mod) const;
  bimodule_ptr module() const;

 private:
  algebra_ptr domain_;
  algebra_ptr codomain_;
  std::vector<double> base_linear_;  // codomain.dim x domain.dim, row-major
  perturbation pert_;
  bool homogeneous_ = false;
  double pre_scale_ = 1.0;
  double post_scale_ = 1.0;
  bimodule_ptr module_;
};

element eval(const map_spec& f, const element& a);
// The linear part alone (scales applied, perturbation dropped).
element linear_part(const map_spec& f, const element& a);

// |f(a+b) - (f(a) + f(b))|, symmetric in (a, b) by construction.
double cauchy_defect(const map_spec& f, const element& a, const element& b);
// |f(a_1...a_n) - f(a_1)...f(a_n)| with left-to-right products, n >= 2.
double hom_defect(const map_spec& f, std::span<const element> tuple);
// |f(a_1...a_n) - sum_j a_1..a_{j-1} f(a_j) a_{j+1}..a_n| in the module.
double der_defect(const map_spec& f, std::span<const element> tuple);

// h0 plus deterministic bounded noise of size eps. h0 must be exactly
// additive (perturbation none and no homogeneity shortcuts are needed:
// linear maps are additive). eps = 0 reproduces h0 exactly.
map_spec make_perturbed_hom(const map_spec& h0, double eps,
                            double quantization_step, std::uint64_t seed,
                            std::vector<element> value_basis = {});

// h0 plus power-weighted noise: |nu(a)| <= eps |a|^p, nu(0) = 0.
map_spec make_perturbed_power(const map_spec& h0, double eps, double p,
                              std::uint64_t seed,
                              std::vector<element> value_basis = {});

// Pointwise noise bound sup_a |nu(a)| for the bounded families (none,
// sine_bump, hash_noise). Throws unsupported_exponent for power_noise.
double bounded_noise_sup(const map_spec& f);
// Budget for |f(a+b) - f(a) - f(b)| <= eps: three times the noise bound.
double cauchy_envelope(const map_spec& f);
// Budget eps' with cauchy defect <= eps' (|a|^p + |b|^p) for power noise.
double rassias_cauchy_envelope(const map_spec& f);
// Per-tuple bound for hom_defect of a perturbed additive map: expand the
// product of (linear image + noise ball) and collect every cross term.
double hom_defect_envelope(const map_spec& f, std::span<const element> tuple);

}  // namespace nring
