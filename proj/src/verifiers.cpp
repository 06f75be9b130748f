#include "nring/verifiers.hpp"

#include <algorithm>
#include <cmath>

#include "nring/rng.hpp"

namespace nring {

namespace {

constexpr double kWeightFloor = 1e-12;

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

element random_ball_point(splitmix64& rng, const algebra_ptr& space,
                          double radius) {
  const std::size_t d = space->dim();
  for (;;) {
    std::vector<double> v(d);
    for (auto& x : v) x = rng.symmetric();
    const double nv = space->norm_of(v);
    if (nv <= 0.0) continue;
    const double r = radius * std::pow(rng.u01(), 1.0 / static_cast<double>(d));
    for (auto& x : v) x *= r / nv;
    return space->make_element(std::move(v));
  }
}

// Deterministic argmax scan keeping the first occurrence on ties.
struct sup_tracker {
  double sup = -1.0;
  std::size_t count = 0;
  std::vector<element> witness;
  std::map<std::string, double> extra;

  void feed(double v, const std::vector<element>& args,
            std::map<std::string, double> note = {}) {
    ++count;
    if (v > sup) {
      sup = v;
      witness = args;
      extra = std::move(note);
    }
  }
  double value() const { return count == 0 ? 0.0 : std::max(sup, 0.0); }
};

void additivity_precheck(const map_spec& h, const grid& g, const char* who) {
  splitmix64 rng(hash_combine(0xadd5ULL, g.points.size()));
  const std::size_t n = g.points.size();
  if (n < 2) throw not_additive(std::string(who) + ": grid too small");
  for (int trial = 0; trial < 256; ++trial) {
    const auto& a = g.points[rng.next() % n];
    const auto& b = g.points[rng.next() % n];
    if (cauchy_defect(h, a, b) > 1e-9)
      throw not_additive(std::string(who) +
                         ": reference map is not additive on grid pairs");
  }
}

}  // namespace

grid default_grid(const algebra_ptr& space, const grid_options& opt) {
  if (!space) throw construction_error("default_grid: null algebra");
  if (opt.lattice_extent < 1 || !(opt.radius > 0.0))
    throw config_error("default_grid: bad lattice options");

  grid g;
  g.space = space;
  const std::size_t d = space->dim();
  const std::size_t side = 2 * static_cast<std::size_t>(opt.lattice_extent) + 1;

  // corner norm fixes the rescale of the whole lattice into the ball
  std::vector<double> corner(d, static_cast<double>(opt.lattice_extent));
  const double corner_norm = space->norm_of(corner);
  const double lat_scale = corner_norm > 0.0 ? opt.radius / corner_norm : 1.0;

  std::size_t full = 1;
  bool overflow = false;
  for (std::size_t i = 0; i < d; ++i) {
    full *= side;
    if (full > opt.lattice_budget) {
      overflow = true;
      break;
    }
  }

  if (!overflow) {
    // full tensor lattice
    std::vector<int> idx(d, -opt.lattice_extent);
    for (std::size_t count = ipow(side, d); count-- > 0;) {
      std::vector<double> c(d);
      for (std::size_t i = 0; i < d; ++i) c[i] = lat_scale * idx[i];
      g.points.push_back(space->make_element(std::move(c)));
      for (std::size_t i = 0; i < d; ++i) {
        if (++idx[i] <= opt.lattice_extent) break;
        idx[i] = -opt.lattice_extent;
      }
    }
    g.description = "lattice^" + std::to_string(d);
  } else {
    // axis lattices, then a seeded fill up to the budget
    for (std::size_t i = 0; i < d; ++i) {
      for (int t = -opt.lattice_extent; t <= opt.lattice_extent; ++t) {
        if (t == 0 && i > 0) continue;  // keep a single origin
        std::vector<double> c(d, 0.0);
        c[i] = opt.radius * static_cast<double>(t) /
               static_cast<double>(opt.lattice_extent);
        g.points.push_back(space->make_element(std::move(c)));
      }
    }
    splitmix64 rng(hash_combine(opt.seed, 0xf111ULL));
    while (g.points.size() < opt.lattice_budget / 2)
      g.points.push_back(random_ball_point(rng, space, opt.radius));
    g.description = "axes+fill";
  }

  splitmix64 rng(hash_combine(opt.seed, d));
  for (std::size_t i = 0; i < opt.random_points; ++i)
    g.points.push_back(random_ball_point(rng, space, opt.radius));
  g.description += "+" + std::to_string(opt.random_points) + "rand";
  return g;
}

std::vector<std::vector<element>> sample_tuples(const grid& g, std::size_t n,
                                                std::size_t count,
                                                std::uint64_t seed) {
  if (n < 1) throw config_error("sample_tuples: n must be positive");
  if (g.points.empty()) throw config_error("sample_tuples: empty grid");
  splitmix64 rng(hash_combine(seed, hash_combine(n, g.points.size())));
  std::vector<std::vector<element>> tuples;
  tuples.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<element> tup;
    tup.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      tup.push_back(g.points[rng.next() % g.points.size()]);
    tuples.push_back(std::move(tup));
  }
  return tuples;
}

defect_report check_hyers_bound(const map_spec& f, const map_spec& h,
                                double eps, const grid& g, double tolerance) {
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw invalid_eps("check_hyers_bound: eps must be a finite nonnegative real");
  additivity_precheck(h, g, "check_hyers_bound");

  sup_tracker sup;
  for (const auto& a : g.points)
    sup.feed(distance(eval(f, a), eval(h, a)), {a});

  defect_report rep;
  rep.functional = "hyers_bound";
  rep.sup = sup.value();
  rep.witness = sup.witness;
  rep.bound = eps;
  rep.tolerance = tolerance;
  rep.satisfied = rep.sup <= eps + tolerance;
  rep.samples = sup.count;
  rep.params["eps"] = eps;
  return rep;
}

defect_report check_rassias_bound(const map_spec& f, const map_spec& D,
                                  double eps, double p, const grid& g,
                                  double rel_tol) {
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw invalid_eps("check_rassias_bound: eps must be a finite nonnegative real");
  if (p < 0.0 || !std::isfinite(p))
    throw unsupported_exponent("check_rassias_bound: p must be >= 0");
  if (p == 1.0)
    throw unsupported_exponent(
        "check_rassias_bound: p = 1 admits no bound of this form");
  additivity_precheck(D, g, "check_rassias_bound");

  const double k = 2.0 * eps / std::abs(2.0 - std::pow(2.0, p));
  sup_tracker sup;
  for (const auto& a : g.points) {
    const double w = std::pow(norm(a), p);
    if (w < kWeightFloor) continue;
    sup.feed(distance(eval(f, a), eval(D, a)) / w, {a});
  }

  defect_report rep;
  rep.functional = "rassias_bound";
  rep.sup = sup.value();
  rep.witness = sup.witness;
  rep.bound = k;
  rep.tolerance = k * rel_tol;
  rep.satisfied = rep.sup <= k + rep.tolerance;
  rep.samples = sup.count;
  rep.params["eps"] = eps;
  rep.params["p"] = p;
  return rep;
}

hypothesis_reports check_hom_hypotheses(const map_spec& f,
                                        const defect_budget& budget,
                                        const grid& g, std::size_t tuple_count,
                                        std::uint64_t seed) {
  validate(budget);
  const double p = budget.p.value_or(0.0);
  const double q = budget.q.value_or(0.0);
  const int n = budget.n;

  hypothesis_reports out;

  {
    auto pairs = sample_tuples(g, 2, tuple_count, hash_combine(seed, 0xca));
    sup_tracker sup;
    for (const auto& pr : pairs) {
      const double w = std::pow(norm(pr[0]), p) + std::pow(norm(pr[1]), p);
      if (w < kWeightFloor) continue;
      sup.feed(cauchy_defect(f, pr[0], pr[1]) / w, pr);
    }
    defect_report rep;
    rep.functional = "cauchy_hypothesis";
    rep.sup = sup.value();
    rep.witness = sup.witness;
    rep.samples = sup.count;
    rep.params["p"] = p;
    rep.params["n"] = n;
    if (std::isfinite(budget.eps)) {
      rep.bound = budget.eps;
      rep.satisfied = rep.sup <= budget.eps;
      rep.params["eps"] = budget.eps;
    }
    if (p == 1.0)
      rep.note = "p = 1 lies outside the exponent range of the stability "
                 "bounds; sup reported for inspection only";
    out.cauchy = std::move(rep);
  }

  {
    auto tuples = sample_tuples(g, static_cast<std::size_t>(n), tuple_count,
                                hash_combine(seed, 0x40));
    sup_tracker sup;
    for (const auto& tup : tuples) {
      double w = 1.0;
      for (const auto& a : tup) w *= std::pow(norm(a), q);
      if (w < kWeightFloor) continue;
      sup.feed(hom_defect(f, tup) / w, tup);
    }
    defect_report rep;
    rep.functional = "hom_hypothesis";
    rep.sup = sup.value();
    rep.witness = sup.witness;
    rep.samples = sup.count;
    rep.params["q"] = q;
    rep.params["n"] = n;
    if (std::isfinite(budget.delta)) {
      rep.bound = budget.delta;
      rep.satisfied = rep.sup <= budget.delta;
      rep.params["delta"] = budget.delta;
    }
    if (q == 1.0)
      rep.note = "q = 1 lies outside the exponent range of the stability "
                 "bounds; sup reported for inspection only";
    out.multiplicative = std::move(rep);
  }

  return out;
}

hypothesis_reports check_der_hypotheses(const map_spec& f,
                                        const defect_budget& budget,
                                        der_weight weight, const grid& g,
                                        std::size_t tuple_count,
                                        std::uint64_t seed) {
  validate(budget);
  const double p = budget.p.value_or(0.0);
  const double q = budget.q.value_or(0.0);
  const int n = budget.n;

  hypothesis_reports out;

  {
    auto pairs = sample_tuples(g, 2, tuple_count, hash_combine(seed, 0xdca));
    sup_tracker sup;
    for (const auto& pr : pairs) {
      const double w = std::pow(norm(pr[0]), p) + std::pow(norm(pr[1]), p);
      if (w < kWeightFloor) continue;
      sup.feed(cauchy_defect(f, pr[0], pr[1]) / w, pr);
    }
    defect_report rep;
    rep.functional = "cauchy_hypothesis";
    rep.sup = sup.value();
    rep.witness = sup.witness;
    rep.samples = sup.count;
    rep.params["p"] = p;
    rep.params["n"] = n;
    if (std::isfinite(budget.eps)) {
      rep.bound = budget.eps;
      rep.satisfied = rep.sup <= budget.eps;
      rep.params["eps"] = budget.eps;
    }
    if (p == 1.0)
      rep.note = "p = 1 lies outside the exponent range of the stability "
                 "bounds; sup reported for inspection only";
    out.cauchy = std::move(rep);
  }

  {
    auto tuples = sample_tuples(g, static_cast<std::size_t>(n), tuple_count,
                                hash_combine(seed, 0xd40));
    sup_tracker sup;
    for (const auto& tup : tuples) {
      double w;
      if (weight == der_weight::sum_powers) {
        w = 0.0;
        for (const auto& a : tup) w += std::pow(norm(a), p);
      } else {
        w = 1.0;
        for (const auto& a : tup) w *= std::pow(norm(a), q);
      }
      if (w < kWeightFloor) continue;
      sup.feed(der_defect(f, tup) / w, tup);
    }
    defect_report rep;
    rep.functional = weight == der_weight::sum_powers ? "der_hypothesis_sum"
                                                      : "der_hypothesis_prod";
    rep.sup = sup.value();
    rep.witness = sup.witness;
    rep.samples = sup.count;
    rep.params[weight == der_weight::sum_powers ? "p" : "q"] =
        weight == der_weight::sum_powers ? p : q;
    rep.params["n"] = n;
    if (std::isfinite(budget.delta)) {
      rep.bound = budget.delta;
      rep.satisfied = rep.sup <= budget.delta;
      rep.params["delta"] = budget.delta;
    }
    const double active = weight == der_weight::sum_powers ? p : q;
    if (active == 1.0)
      rep.note = "exponent 1 lies outside the range of the stability bounds; "
                 "sup reported for inspection only";
    out.multiplicative = std::move(rep);
  }

  return out;
}

defect_report orthogonality_check(const map_spec& f, const map_spec& h,
                                  const std::vector<std::vector<element>>& tuples,
                                  double tolerance,
                                  std::optional<std::pair<int, int>> k_range) {
  if (tuples.empty())
    throw config_error("orthogonality_check: no tuples supplied");

  sup_tracker sup;
  for (const auto& tup : tuples) {
    const int n = static_cast<int>(tup.size());
    if (n < 2)
      throw domain_mismatch("orthogonality_check: tuples need length >= 2");
    int k_lo = 1, k_hi = n - 1;
    if (k_range) {
      k_lo = std::max(k_lo, k_range->first);
      k_hi = std::min(k_hi, k_range->second);
    }

    std::vector<element> fv, hv;
    for (const auto& a : tup) {
      fv.push_back(eval(f, a));
      hv.push_back(eval(h, a));
    }

    for (int k = k_lo; k <= k_hi; ++k) {
      element h_pre = product_chain(std::span(hv).subspan(0, k));
      element h_suf = product_chain(std::span(hv).subspan(k, n - k));
      element f_pre = product_chain(std::span(fv).subspan(0, k));
      element f_suf = product_chain(std::span(fv).subspan(k, n - k));
      const double o1 = norm(mul(h_pre, sub(f_suf, h_suf)));
      const double o2 = norm(mul(sub(f_pre, h_pre), h_suf));
      sup.feed(std::max(o1, o2), tup, {{"k", static_cast<double>(k)}});
    }
  }

  defect_report rep;
  rep.functional = "orthogonality";
  rep.sup = sup.value();
  rep.witness = sup.witness;
  rep.bound = tolerance;
  rep.tolerance = 0.0;
  rep.satisfied = rep.sup <= tolerance;
  rep.samples = sup.count;
  rep.params = sup.extra;
  return rep;
}

defect_report homogeneity_implies_equality(const map_spec& f, const map_spec& D,
                                           const grid& g, double tolerance) {
  if (!f.homogeneous())
    throw not_homogeneous(
        "homogeneity_implies_equality: map is not declared homogeneous");

  sup_tracker sup;
  for (const auto& a : g.points)
    sup.feed(distance(eval(f, a), eval(D, a)), {a});

  defect_report rep;
  rep.functional = "homogeneous_equality";
  rep.sup = sup.value();
  rep.witness = sup.witness;
  rep.bound = tolerance;
  rep.tolerance = 0.0;
  rep.satisfied = rep.sup <= tolerance;
  rep.samples = sup.count;
  return rep;
}

}  // namespace nring
