#include "nring/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "nring/counterexamples.hpp"
#include "nring/oracle.hpp"
#include "nring/rng.hpp"

namespace nring {

namespace {

struct run_state {
  std::vector<defect_report> reports;
  std::vector<iteration_trace> traces;
  ojson echo = ojson::object();
};

double as_double(const ojson& v, const std::string& key) {
  if (!v.is_number()) throw config_error("config: " + key + " must be a number");
  return v.get<double>();
}

long long as_int(const ojson& v, const std::string& key) {
  if (!v.is_number_integer())
    throw config_error("config: " + key + " must be an integer");
  return v.get<long long>();
}

std::string as_string(const ojson& v, const std::string& key) {
  if (!v.is_string()) throw config_error("config: " + key + " must be a string");
  return v.get<std::string>();
}

// Per-experiment key whitelist; setting a key the experiment does not
// consume is a config error rather than a silent no-op.
const std::vector<std::string>& tuning_keys() {
  static const std::vector<std::string> keys = {
      "algebra",        "eps",           "p",
      "q",              "n",             "seed",
      "m_max",          "tol",           "grid_radius",
      "lattice_extent", "random_points", "tuple_count",
      "oracle_extent",  "profile_m_max"};
  return keys;
}

bool key_is_set(const experiment_config& c, const std::string& k) {
  if (k == "algebra") return c.algebra.has_value();
  if (k == "eps") return c.eps.has_value();
  if (k == "p") return c.p.has_value();
  if (k == "q") return c.q.has_value();
  if (k == "n") return c.n.has_value();
  if (k == "seed") return c.seed.has_value();
  if (k == "m_max") return c.m_max.has_value();
  if (k == "tol") return c.tol.has_value();
  if (k == "grid_radius") return c.grid_radius.has_value();
  if (k == "lattice_extent") return c.lattice_extent.has_value();
  if (k == "random_points") return c.random_points.has_value();
  if (k == "tuple_count") return c.tuple_count.has_value();
  if (k == "oracle_extent") return c.oracle_extent.has_value();
  if (k == "profile_m_max") return c.profile_m_max.has_value();
  return false;
}

std::vector<std::string> allowed_keys(const std::string& experiment) {
  if (experiment == "hyers-hom")
    return {"eps",         "seed",           "m_max",         "tol",
            "grid_radius", "lattice_extent", "random_points", "tuple_count"};
  if (experiment == "rassias-hom")
    return {"eps",  "p",           "n",              "seed",
            "m_max", "tol",        "grid_radius",    "lattice_extent",
            "random_points",       "tuple_count"};
  if (experiment == "rassias-der-sum")
    return {"algebra", "eps",  "p",           "n",
            "seed",    "m_max", "tol",        "grid_radius",
            "lattice_extent",  "random_points", "tuple_count"};
  if (experiment == "rassias-der-prod")
    return {"algebra", "eps",  "p",           "q",           "n",
            "seed",    "m_max", "tol",        "grid_radius",
            "lattice_extent",  "random_points", "tuple_count"};
  if (experiment == "luminet") return {"seed", "profile_m_max", "tuple_count"};
  if (experiment == "nilpotent") return {"seed", "tuple_count"};
  if (experiment == "oracle-crosscheck")
    return {"eps", "seed", "m_max", "tol", "oracle_extent"};
  throw config_error("unknown experiment: " + experiment);
}

void check_keys(const experiment_config& cfg) {
  const auto allowed = allowed_keys(cfg.experiment);
  for (const auto& k : tuning_keys()) {
    if (!key_is_set(cfg, k)) continue;
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw config_error("config: key '" + k + "' is not used by experiment '" +
                         cfg.experiment + "'");
  }
}

double checked_eps(const experiment_config& cfg, double fallback) {
  const double eps = cfg.eps.value_or(fallback);
  if (!std::isfinite(eps) || eps < 0.0)
    throw config_error("config: eps must be finite and non-negative");
  return eps;
}

double checked_exponent(const experiment_config& cfg, double fallback,
                        const char* name) {
  double v = fallback;
  if (std::string(name) == "p" && cfg.p) v = *cfg.p;
  if (std::string(name) == "q" && cfg.q) v = *cfg.q;
  if (!std::isfinite(v) || v < 0.0)
    throw config_error(std::string("config: ") + name +
                       " must be finite and non-negative");
  if (v == 1.0)
    throw config_error(std::string("config: ") + name +
                       " = 1 is outside the stability range");
  return v;
}

int checked_m_max(const experiment_config& cfg, int fallback) {
  const int m = cfg.m_max.value_or(fallback);
  if (m < 4 || m > 60)
    throw config_error("config: m_max must be between 4 and 60");
  return m;
}

double checked_tol(const experiment_config& cfg, double fallback) {
  const double t = cfg.tol.value_or(fallback);
  if (!std::isfinite(t) || t <= 0.0)
    throw config_error("config: tol must be finite and positive");
  return t;
}

int checked_n(const experiment_config& cfg, int fallback) {
  const int n = cfg.n.value_or(fallback);
  if (n < 2 || n > 8) throw config_error("config: n must be between 2 and 8");
  return n;
}

grid make_grid(const experiment_config& cfg, const algebra_ptr& space,
               double default_radius, std::uint64_t seed) {
  grid_options opt;
  opt.radius = cfg.grid_radius.value_or(default_radius);
  if (!std::isfinite(opt.radius) || opt.radius <= 0.0)
    throw config_error("config: grid_radius must be finite and positive");
  if (cfg.lattice_extent) {
    if (*cfg.lattice_extent < 1)
      throw config_error("config: lattice_extent must be >= 1");
    opt.lattice_extent = *cfg.lattice_extent;
  }
  if (cfg.random_points) opt.random_points = *cfg.random_points;
  opt.seed = seed;
  return default_grid(space, opt);
}

// Tiny sup scanner for inline report assembly; keeps the first argmax.
struct sup_scan {
  double sup = 0.0;
  std::vector<element> witness;
  std::size_t samples = 0;
  void feed(double v, const std::vector<element>& args) {
    ++samples;
    if (witness.empty() || v > sup) {
      sup = v;
      witness = args;
    }
  }
};

defect_report report_from_scan(std::string name, const sup_scan& s,
                               std::optional<double> bound, double tolerance) {
  defect_report r;
  r.functional = std::move(name);
  r.sup = s.sup;
  r.witness = s.witness;
  r.bound = bound;
  r.tolerance = tolerance;
  r.samples = s.samples;
  r.satisfied = !bound || s.sup <= *bound + tolerance;
  return r;
}

// ---------------------------------------------------------------------
// hyers-hom: exact product-preserving base map R -> M2 (x -> x E11) plus
// bounded hash noise confined to the span of E22, so products of
// perturbations never leak back into the range of the base map.

map_spec hyers_map(double eps, std::uint64_t seed) {
  const auto real = make_real_algebra();
  const auto m2 = make_matrix_algebra(2);
  const map_spec h0(real, m2, {1.0, 0.0, 0.0, 0.0});
  return make_perturbed_hom(h0, eps, default_quantization_step, seed,
                            {m2->basis(3)});
}

map_spec rassias_hom_map(double eps, double p, std::uint64_t seed) {
  return make_perturbed_power(map_spec::identity(make_real_algebra()), eps, p,
                              seed);
}

map_spec rassias_der_map(const algebra_ptr& alg, double eps, double p,
                         std::uint64_t seed) {
  const std::size_t d = alg->dim();
  const std::size_t pivot = d > 1 ? 1 : 0;
  const element b = alg->basis(pivot);
  // Matrix of x -> b x - x b in coordinates.
  std::vector<double> lin(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const element col = b * alg->basis(i) - alg->basis(i) * b;
    for (std::size_t k = 0; k < d; ++k) lin[k * d + i] = col.coord(k);
  }
  return make_perturbed_power(map_spec(alg, alg, std::move(lin)), eps, p, seed);
}

void run_hyers_hom(const experiment_config& cfg, run_state& st) {
  const double eps = checked_eps(cfg, 0.5);
  const int m_max = checked_m_max(cfg, 40);
  const double tol = checked_tol(cfg, 1e-11);
  const std::uint64_t seed = cfg.seed.value_or(20260815ULL);
  const std::size_t tuple_count = cfg.tuple_count.value_or(512);

  const auto real = make_real_algebra();
  const map_spec f = hyers_map(eps, seed);

  schedule sched;
  sched.kind = schedule_kind::dyadic;
  sched.s = +1;
  sched.m_max = m_max;
  sched.tol = tol;

  defect_budget budget;
  budget.eps = eps;
  budget.delta = eps + eps * eps * eps;  // |nu| and the triple product
  budget.n = 3;

  const grid g = make_grid(cfg, real, 1.0, 0x9247ULL);

  st.echo = ojson{{"eps", eps},
                  {"seed", seed},
                  {"m_max", m_max},
                  {"tol", tol},
                  {"grid_points", g.points.size()},
                  {"tuple_count", tuple_count}};

  auto lim = build_limit_map(f, sched, budget);
  for (auto& t : lim.probe_traces) st.traces.push_back(std::move(t));

  // Pointwise convergence across the whole grid, with the analytic
  // residual at m_max recorded alongside.
  {
    sup_scan scan;
    bool all_converged = true;
    for (const auto& x : g.points) {
      auto tr = direct_limit(f, x, sched, budget);
      all_converged = all_converged && tr.verdict == verdict_kind::converged;
      scan.feed(tr.iterates.back().step_norm.value_or(0.0), {x});
    }
    auto r = report_from_scan("pointwise_convergence", scan, tol, 0.0);
    r.satisfied = r.satisfied && all_converged;
    r.params = {{"m_max", static_cast<double>(m_max)},
                {"eps", eps},
                {"residual_at_m_max",
                 residual_bound(eps, {}, sched, m_max, 1.0)}};
    r.note = "last dyadic step per grid point; all verdicts converged";
    st.reports.push_back(std::move(r));
  }

  st.reports.push_back(check_hyers_bound(f, lim.map, eps, g));

  // The limit map should multiply exactly across triples (up to the
  // residual dust it carries in the noise slot).
  {
    sup_scan scan;
    for (const auto& tup : sample_tuples(g, 3, tuple_count, seed ^ 0x3a7))
      scan.feed(hom_defect(lim.map, tup), tup);
    auto r = report_from_scan("hom_defect_n3_of_limit", scan, 1e-9, 0.0);
    r.params = {{"n", 3.0}};
    st.reports.push_back(std::move(r));
  }

  st.reports.push_back(orthogonality_check(
      f, lim.map, sample_tuples(g, 3, tuple_count, seed ^ 0x91b), 1e-6));

  // Shrinkage law: the Cauchy defect of the m-th iterate decays like
  // eps_c / 2^m where eps_c bounds the Cauchy defect of f itself.
  {
    const double eps_c = cauchy_envelope(f);
    const auto pairs = sample_tuples(g, 2, 100, seed ^ 0xd5);
    sup_scan scan;
    const int m_top = std::min(20, m_max);
    for (int m = 1; m <= m_top; ++m) {
      const map_spec fm = scaled_iterate(f, sched, m);
      const double scale = std::ldexp(1.0, m);
      for (const auto& pr : pairs)
        scan.feed(cauchy_defect(fm, pr[0], pr[1]) * scale / eps_c, pr);
    }
    auto r = report_from_scan("defect_shrinkage_ratio", scan, 1.0, 1e-12);
    r.params = {{"eps_cauchy", eps_c}, {"m_top", static_cast<double>(m_top)}};
    r.note = "cauchy defect of iterate m, rescaled by 2^m / eps_cauchy";
    st.reports.push_back(std::move(r));
  }

  // Dyadic and integer schedules land on the same limit.
  {
    schedule integer_sched;
    integer_sched.kind = schedule_kind::integer;
    integer_sched.s = +1;
    integer_sched.m_max = 4096;
    integer_sched.tol = 1e-3;
    const double bound = 10.0 * std::max(sched.tol, integer_sched.tol);
    splitmix64 rng(hash_combine(seed, 0x5c7ed));
    sup_scan scan;
    bool all_converged = true;
    for (int i = 0; i < 32; ++i) {
      const element x = real->make_element({rng.symmetric()});
      auto td = direct_limit(f, x, sched, budget);
      auto ti = direct_limit(f, x, integer_sched, budget);
      all_converged = all_converged &&
                      td.verdict == verdict_kind::converged &&
                      ti.verdict == verdict_kind::converged;
      scan.feed(distance(*td.limit, *ti.limit), {x});
    }
    auto r = report_from_scan("schedule_agreement", scan, bound, 0.0);
    r.satisfied = r.satisfied && all_converged;
    r.params = {{"integer_m_max", 4096.0}, {"integer_tol", integer_sched.tol}};
    st.reports.push_back(std::move(r));
  }
}

// ---------------------------------------------------------------------
// rassias-hom: scalar identity plus power-weighted noise. Hypothesis
// sups, the direct-method limit, and the power-weighted bound. The
// bound constant uses the map's Cauchy envelope, which is the constant
// the stability theorem actually consumes.

void run_rassias_hom(const experiment_config& cfg, run_state& st) {
  const double eps = checked_eps(cfg, 1.0);
  const double p = checked_exponent(cfg, 0.5, "p");
  const int n = checked_n(cfg, 2);
  const std::uint64_t seed = cfg.seed.value_or(20260815ULL);
  const std::size_t tuple_count = cfg.tuple_count.value_or(512);

  const auto real = make_real_algebra();
  const map_spec f = rassias_hom_map(eps, p, seed);

  schedule sched;
  sched.kind = schedule_kind::dyadic;
  sched.s = p < 1.0 ? +1 : -1;
  sched.m_max = checked_m_max(cfg, p < 1.0 ? 48 : 40);
  sched.tol = checked_tol(cfg, p < 1.0 ? 1e-6 : 1e-9);

  const grid g = make_grid(cfg, real, 1.0, 0x9247ULL);
  const double radius = cfg.grid_radius.value_or(1.0);

  const double eps_env = rassias_cauchy_envelope(f);
  defect_budget budget;
  budget.eps = eps_env;
  // Product expansion of (a_i + nu_i) against weight prod |a_i|^p; only
  // valid inside the unit ball and for p <= 1, measured otherwise.
  budget.delta = (p <= 1.0 && radius <= 1.0)
                     ? eps + std::pow(1.0 + eps, n) - 1.0
                     : std::numeric_limits<double>::infinity();
  budget.p = p;
  budget.q = p;
  budget.n = n;

  st.echo = ojson{{"eps", eps},     {"p", p},
                  {"n", n},         {"seed", seed},
                  {"m_max", sched.m_max}, {"tol", sched.tol},
                  {"grid_points", g.points.size()},
                  {"tuple_count", tuple_count}};

  auto hyp = check_hom_hypotheses(f, budget, g, tuple_count, seed);
  st.reports.push_back(std::move(hyp.cauchy));
  st.reports.push_back(std::move(hyp.multiplicative));

  auto lim = build_limit_map(f, sched, budget);
  for (auto& t : lim.probe_traces) st.traces.push_back(std::move(t));

  st.reports.push_back(check_rassias_bound(f, lim.map, eps_env, p, g));

  {
    defect_report r = st.reports.back();
    r.functional = "power_ratio_empirical";
    r.bound.reset();
    r.satisfied = true;
    r.tolerance = 0.0;
    r.note = "measured sup |f - D| / |a|^p; the theorem constant above is "
             "a bound, not an estimate";
    st.reports.push_back(std::move(r));
  }
}

// ---------------------------------------------------------------------
// rassias-der: inner derivation (commutator with a basis element) plus
// power-weighted noise over the full codomain, checked against the
// Leibniz-type hypothesis with an additive or multiplicative weight.

void run_rassias_der(const experiment_config& cfg, run_state& st,
                     der_weight weight) {
  const double eps = checked_eps(cfg, 0.5);
  const double p = checked_exponent(cfg, 0.5, "p");
  const double q = weight == der_weight::product_powers
                       ? checked_exponent(cfg, p, "q")
                       : p;
  const int n = checked_n(cfg, 2);
  const std::uint64_t seed = cfg.seed.value_or(20260815ULL);
  const std::size_t tuple_count = cfg.tuple_count.value_or(512);

  const algebra_ptr alg =
      cfg.algebra ? load_algebra(*cfg.algebra) : make_matrix_algebra(2);
  const map_spec f = rassias_der_map(alg, eps, p, seed);

  schedule sched;
  sched.kind = schedule_kind::dyadic;
  sched.s = p < 1.0 ? +1 : -1;
  sched.m_max = checked_m_max(cfg, p < 1.0 ? 48 : 40);
  sched.tol = checked_tol(cfg, p < 1.0 ? 1e-6 : 1e-9);

  const grid g = make_grid(cfg, alg, 1.0, 0x9247ULL);
  const double radius = cfg.grid_radius.value_or(1.0);

  const double eps_env = rassias_cauchy_envelope(f);
  defect_budget budget;
  budget.eps = eps_env;
  if (weight == der_weight::sum_powers) {
    // Weighted-average bound, valid on the unit ball for any p.
    budget.delta = radius <= 1.0 ? 2.0 * eps
                                 : std::numeric_limits<double>::infinity();
  } else {
    budget.delta = (p <= 1.0 && q <= p && radius <= 1.0)
                       ? (n + 1) * eps
                       : std::numeric_limits<double>::infinity();
  }
  budget.p = p;
  budget.q = q;
  budget.n = n;

  st.echo = ojson{{"algebra", alg->name()}, {"eps", eps},
                  {"p", p},                 {"q", q},
                  {"n", n},                 {"seed", seed},
                  {"m_max", sched.m_max},   {"tol", sched.tol},
                  {"grid_points", g.points.size()},
                  {"tuple_count", tuple_count}};

  auto hyp = check_der_hypotheses(f, budget, weight, g, tuple_count, seed);
  st.reports.push_back(std::move(hyp.cauchy));
  st.reports.push_back(std::move(hyp.multiplicative));

  auto lim = build_limit_map(f, sched, budget);
  for (auto& t : lim.probe_traces) st.traces.push_back(std::move(t));

  st.reports.push_back(check_rassias_bound(f, lim.map, eps_env, p, g));

  // The limit map inherits the Leibniz rule up to residual dust.
  {
    const double res = residual_bound(eps_env, p, sched, sched.m_max, 1.0);
    sup_scan scan;
    for (const auto& tup : sample_tuples(g, static_cast<std::size_t>(n),
                                         tuple_count, seed ^ 0x6e1))
      scan.feed(der_defect(lim.map, tup), tup);
    auto r = report_from_scan("leibniz_defect_of_limit", scan,
                              (n + 1) * res, 1e-15);
    r.params = {{"n", static_cast<double>(n)}, {"residual", res}};
    st.reports.push_back(std::move(r));
  }
}

// ---------------------------------------------------------------------
// luminet: x ln|x| into one matrix slot. Linear divergence profile,
// bounded premise ratios across radii, growing oracle distance, and the
// direct method refusing to produce a companion.

void run_luminet(const experiment_config& cfg, run_state& st) {
  const int pm = cfg.profile_m_max.value_or(50);
  if (pm < 8 || pm > 60)
    throw config_error("config: profile_m_max must be between 8 and 60");
  const std::uint64_t seed = cfg.seed.value_or(0x9247ULL);
  const std::size_t tuple_count = cfg.tuple_count.value_or(512);

  const map_spec f = build_luminet_map();
  const auto real = f.domain();
  const double ln2 = std::log(2.0);

  st.echo = ojson{{"profile_m_max", pm},
                  {"seed", seed},
                  {"tuple_count", tuple_count},
                  {"premise_radii", ojson::array({32.0, 1024.0})},
                  {"oracle_extents", ojson::array({128, 512})}};

  auto prof = divergence_profile(f, pm);

  {
    sup_scan scan;
    for (const auto& row : prof.rows)
      scan.feed(std::abs(row.value_norm - row.m * ln2),
                {real->make_element({static_cast<double>(row.m)})});
    auto r = report_from_scan("profile_matches_m_ln2", scan, 1e-9, 0.0);
    r.note = "value of the m-th dyadic iterate at 1 against m ln 2";
    st.reports.push_back(std::move(r));
  }
  {
    sup_scan scan;
    for (int m = 1; 2 * m <= pm; ++m)
      scan.feed(std::abs(prof.rows[static_cast<std::size_t>(2 * m)].value_norm /
                             prof.rows[static_cast<std::size_t>(m)].value_norm -
                         2.0),
                {real->make_element({static_cast<double>(m)})});
    st.reports.push_back(
        report_from_scan("profile_doubling_ratio", scan, 1e-9, 0.0));
  }
  {
    defect_report r;
    r.functional = "divergence_verdict";
    r.sup = prof.trace.verdict == verdict_kind::diverged ? 0.0 : 1.0;
    r.bound = 0.0;
    r.tolerance = 0.5;
    r.satisfied = prof.trace.verdict == verdict_kind::diverged;
    r.samples = prof.rows.size();
    r.note = "verdict: " + to_string(prof.trace.verdict);
    st.reports.push_back(std::move(r));
  }
  st.traces.push_back(std::move(prof.trace));

  // Premise ratios at two radii: both hypothesis sups stay of the same
  // size while the map refuses an additive companion.
  const grid g32 = premise_grid(real, 32.0, seed);
  const grid g1024 = premise_grid(real, 1024.0, seed);
  auto pr32 = premise_report(f, g32);
  auto pr1024 = premise_report(f, g1024);
  const double c32 = pr32.cauchy_ratio.sup, c1024 = pr1024.cauchy_ratio.sup;
  const double h32 = pr32.hom_ratio.sup, h1024 = pr1024.hom_ratio.sup;
  for (auto* rep : {&pr32.cauchy_ratio, &pr32.hom_ratio}) {
    rep->functional += "_r32";
    rep->params["radius"] = 32.0;
  }
  for (auto* rep : {&pr1024.cauchy_ratio, &pr1024.hom_ratio}) {
    rep->functional += "_r1024";
    rep->params["radius"] = 1024.0;
  }
  st.reports.push_back(std::move(pr32.cauchy_ratio));
  st.reports.push_back(std::move(pr32.hom_ratio));
  st.reports.push_back(std::move(pr1024.cauchy_ratio));
  st.reports.push_back(std::move(pr1024.hom_ratio));
  {
    defect_report r;
    r.functional = "premise_ratio_stability";
    r.sup = std::max(c1024 / c32, h1024 / h32);
    r.bound = 2.0;
    r.tolerance = 1e-9;
    r.satisfied = r.sup <= 2.0 + 1e-9;
    r.samples = 2;
    r.params = {{"cauchy_r32", c32},
                {"cauchy_r1024", c1024},
                {"hom_r32", h32},
                {"hom_r1024", h1024}};
    r.note = "large-radius premise sups against the small-radius ones";
    st.reports.push_back(std::move(r));
  }

  // The nearest additive map drifts away as the window grows.
  const element one = real->basis(0);
  const double d128 =
      nearest_additive_chebyshev(sample_map(f, one, 128)).distance;
  const double d512 =
      nearest_additive_chebyshev(sample_map(f, one, 512)).distance;
  {
    defect_report r;
    r.functional = "oracle_distance_growth";
    r.sup = d512 / d128;
    r.tolerance = 0.0;
    r.satisfied = r.sup >= 1.5;
    r.samples = 2;
    r.params = {{"distance_128", d128}, {"distance_512", d512}};
    r.note = "minimax distance to additive maps must grow by at least 1.5";
    st.reports.push_back(std::move(r));
  }

  {
    defect_report r;
    r.functional = "no_additive_companion";
    schedule sched;
    sched.kind = schedule_kind::dyadic;
    sched.s = +1;
    sched.m_max = 40;
    sched.tol = 1e-9;
    bool rejected = false;
    try {
      (void)cross_validate(f, one, 64, sched, 1.0);
    } catch (const limit_diverged&) {
      rejected = true;
    }
    r.sup = rejected ? 0.0 : 1.0;
    r.bound = 0.0;
    r.tolerance = 0.5;
    r.satisfied = rejected;
    r.samples = 1;
    r.note = "cross_validate must refuse: the direct method diverges";
    st.reports.push_back(std::move(r));
  }
}

// ---------------------------------------------------------------------
// nilpotent: strictly upper-triangular 4x4 algebra. The power ideals
// shrink 6, 3, 1, 0, so 4-fold products vanish and every linear map is
// a 4-fold derivation while plenty fail the 2-fold rule.

void run_nilpotent(const experiment_config& cfg, run_state& st) {
  const std::size_t trials = cfg.tuple_count.value_or(100);
  const std::uint64_t seed = cfg.seed.value_or(2026ULL);

  const auto alg = build_nilpotent_algebra();

  st.echo = ojson{{"algebra", alg->name()}, {"trials", trials}, {"seed", seed}};

  {
    const std::size_t expected[] = {6, 3, 1, 0};
    defect_report r;
    r.functional = "power_ideal_dims";
    double mismatch = 0.0;
    for (int k = 1; k <= 4; ++k) {
      const std::size_t dim = power_ideal_dim(alg, k);
      r.params["dim_k" + std::to_string(k)] = static_cast<double>(dim);
      mismatch += std::abs(static_cast<double>(dim) -
                           static_cast<double>(expected[k - 1]));
    }
    r.sup = mismatch;
    r.bound = 0.0;
    r.tolerance = 0.0;
    r.satisfied = mismatch == 0.0;
    r.samples = 4;
    r.note = "expected 6, 3, 1, 0";
    st.reports.push_back(std::move(r));
  }

  const auto scan = every_linear_is_4derivation(trials, seed);
  {
    defect_report r;
    r.functional = "linear_maps_are_4fold_derivations";
    r.sup = scan.sup_4_defect;
    r.bound = 1e-12;
    r.tolerance = 0.0;
    r.satisfied = r.sup <= 1e-12;
    r.samples = trials * 64;
    r.params = {{"trials", static_cast<double>(trials)}, {"n", 4.0}};
    st.reports.push_back(std::move(r));
  }
  {
    defect_report r;
    r.functional = "witness_2fold_defect";
    r.sup = scan.witness_2_defect;
    r.tolerance = 0.0;
    r.satisfied = r.sup > 0.1;
    r.samples = 1;
    r.witness = scan.witness_pair;
    r.params = {{"n", 2.0}};
    r.note = "a basis-supported linear map with a visible 2-fold defect";
    st.reports.push_back(std::move(r));
  }
  {
    splitmix64 rng(hash_combine(seed, 0x4f01d));
    sup_scan scan4;
    for (int rep = 0; rep < 256; ++rep) {
      std::vector<element> tup;
      for (int i = 0; i < 4; ++i) {
        std::vector<double> c(alg->dim());
        for (auto& v : c) v = rng.symmetric();
        tup.push_back(alg->make_element(std::move(c)));
      }
      scan4.feed(norm(product_chain(tup)), tup);
    }
    auto r = report_from_scan("fourfold_products_vanish", scan4, 0.0, 0.0);
    r.note = "norms of 4-fold products of random elements";
    st.reports.push_back(std::move(r));
  }
}

// ---------------------------------------------------------------------
// oracle-crosscheck: sampled Chebyshev oracle against the direct method.

void run_oracle_crosscheck(const experiment_config& cfg, run_state& st) {
  const double eps = checked_eps(cfg, 0.5);
  const int extent = cfg.oracle_extent.value_or(512);
  if (extent < 8 || extent > 65536)
    throw config_error("config: oracle_extent must be between 8 and 65536");
  const int m_max = checked_m_max(cfg, 40);
  const double tol = checked_tol(cfg, 1e-11);
  const std::uint64_t seed = cfg.seed.value_or(20260815ULL);

  const auto real = make_real_algebra();
  const element one = real->basis(0);
  const map_spec f = make_perturbed_hom(map_spec::identity(real), eps,
                                        default_quantization_step, seed);

  schedule sched;
  sched.kind = schedule_kind::dyadic;
  sched.s = +1;
  sched.m_max = m_max;
  sched.tol = tol;
  defect_budget budget;
  budget.eps = eps;
  budget.delta = std::numeric_limits<double>::infinity();

  st.echo = ojson{{"eps", eps},     {"oracle_extent", extent},
                  {"m_max", m_max}, {"tol", tol},
                  {"seed", seed}};

  const auto cv = cross_validate(f, one, extent, sched, eps, budget);
  {
    defect_report r;
    r.functional = "oracle_vs_direct_limit";
    r.sup = cv.difference;
    r.bound = cv.agreement_bound;
    r.tolerance = 0.0;
    r.satisfied = cv.agrees;
    r.samples = static_cast<std::size_t>(2 * extent + 1);
    r.params = {{"extent", static_cast<double>(extent)},
                {"eps", eps},
                {"fit_distance", cv.fit.distance},
                {"final_step", cv.fit.final_step},
                {"evaluations", static_cast<double>(cv.fit.evaluations)}};
    st.reports.push_back(std::move(r));
  }

  // Local optimality certificate: nudging any coordinate of the fitted
  // rate by +-10 final_step does not reduce the minimax distance.
  {
    const auto s = sample_map(f, one, extent);
    auto objective = [&](const element& x) {
      double worst = 0.0;
      for (int t = -extent; t <= extent; ++t)
        worst = std::max(
            worst, distance(s.values[static_cast<std::size_t>(t + extent)],
                            static_cast<double>(t) * x));
      return worst;
    };
    const double at_fit = objective(cv.fit.x0);
    double improvement = 0.0;
    for (std::size_t j = 0; j < real->dim(); ++j)
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> c(cv.fit.x0.coords().begin(),
                              cv.fit.x0.coords().end());
        c[j] += sgn * 10.0 * cv.fit.final_step;
        improvement =
            std::max(improvement, at_fit - objective(real->make_element(c)));
      }
    defect_report r;
    r.functional = "oracle_local_optimality";
    r.sup = improvement;
    r.bound = 0.0;
    r.tolerance = 0.0;
    r.satisfied = improvement <= 0.0;
    r.samples = 2 * real->dim();
    r.params = {{"probe_step", 10.0 * cv.fit.final_step}};
    st.reports.push_back(std::move(r));
  }

  {
    const map_spec f2(real, real, {2.0});
    const auto fit2 = nearest_additive_chebyshev(sample_map(f2, one, extent));
    defect_report r;
    r.functional = "exact_linear_recovery";
    r.sup = std::abs(fit2.x0.coord(0) - 2.0);
    r.bound = 1e-15;
    r.tolerance = 0.0;
    r.satisfied = r.sup <= 1e-15;
    r.samples = static_cast<std::size_t>(2 * extent + 1);
    r.params = {{"fit_distance", fit2.distance}};
    r.note = "exactly linear samples must return their rate untouched";
    st.reports.push_back(std::move(r));
  }

  {
    defect_report r;
    r.functional = "diverged_map_rejected";
    bool rejected = false;
    try {
      (void)cross_validate(build_luminet_map(), one, 32, sched, 1.0);
    } catch (const limit_diverged&) {
      rejected = true;
    }
    r.sup = rejected ? 0.0 : 1.0;
    r.bound = 0.0;
    r.tolerance = 0.5;
    r.satisfied = rejected;
    r.samples = 1;
    st.reports.push_back(std::move(r));
  }

  st.traces.push_back(direct_limit(f, one, sched, budget));
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

experiment_config parse_config_text(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config: expected a JSON object");

  experiment_config cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") cfg.experiment = as_string(value, key);
    else if (key == "algebra") cfg.algebra = as_string(value, key);
    else if (key == "eps") cfg.eps = as_double(value, key);
    else if (key == "p") cfg.p = as_double(value, key);
    else if (key == "q") cfg.q = as_double(value, key);
    else if (key == "n") cfg.n = static_cast<int>(as_int(value, key));
    else if (key == "seed") {
      const long long s = as_int(value, key);
      if (s < 0) throw config_error("config: seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "m_max") cfg.m_max = static_cast<int>(as_int(value, key));
    else if (key == "tol") cfg.tol = as_double(value, key);
    else if (key == "grid_radius") cfg.grid_radius = as_double(value, key);
    else if (key == "lattice_extent")
      cfg.lattice_extent = static_cast<int>(as_int(value, key));
    else if (key == "random_points") {
      const long long v = as_int(value, key);
      if (v < 0) throw config_error("config: random_points must be >= 0");
      cfg.random_points = static_cast<std::size_t>(v);
    } else if (key == "tuple_count") {
      const long long v = as_int(value, key);
      if (v < 1) throw config_error("config: tuple_count must be >= 1");
      cfg.tuple_count = static_cast<std::size_t>(v);
    } else if (key == "oracle_extent")
      cfg.oracle_extent = static_cast<int>(as_int(value, key));
    else if (key == "profile_m_max")
      cfg.profile_m_max = static_cast<int>(as_int(value, key));
    else if (key == "format") cfg.format = as_string(value, key);
    else if (key == "out") cfg.out = as_string(value, key);
    else if (key == "timestamp") {
      if (!value.is_boolean())
        throw config_error("config: timestamp must be a boolean");
      cfg.with_timestamp = value.get<bool>();
    } else {
      throw config_error("config: unknown key '" + key + "'");
    }
  }
  if (cfg.experiment.empty())
    throw config_error("config: missing required key 'experiment'");
  if (cfg.format != "json" && cfg.format != "csv")
    throw config_error("config: format must be 'json' or 'csv'");
  return cfg;
}

experiment_config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

const std::vector<experiment_entry>& experiment_catalog() {
  static const std::vector<experiment_entry> catalog = {
      {"hyers-hom",
       "bounded noise on an exact product-preserving map: flat stability "
       "bound, defect shrinkage, orthogonality, schedule agreement"},
      {"rassias-hom",
       "power-weighted noise on the scalar identity: hypothesis sups and "
       "the power-weighted stability bound"},
      {"rassias-der-sum",
       "power noise on an inner derivation of M2: Leibniz hypothesis with "
       "additive weight, limit derivation"},
      {"rassias-der-prod",
       "power noise on an inner derivation of M2: Leibniz hypothesis with "
       "product weight, limit derivation"},
      {"luminet",
       "x ln|x| counterexample at the critical exponent: linear divergence "
       "profile, bounded premises, growing oracle distance"},
      {"nilpotent",
       "strictly upper-triangular 4x4 algebra: vanishing 4-fold products "
       "make every linear map a 4-fold derivation"},
      {"oracle-crosscheck",
       "sampled Chebyshev oracle against direct-method limits"}};
  return catalog;
}

map_spec experiment_map(const experiment_config& cfg) {
  check_keys(cfg);
  const std::uint64_t seed = cfg.seed.value_or(20260815ULL);
  if (cfg.experiment == "hyers-hom")
    return hyers_map(checked_eps(cfg, 0.5), seed);
  if (cfg.experiment == "rassias-hom")
    return rassias_hom_map(checked_eps(cfg, 1.0),
                           checked_exponent(cfg, 0.5, "p"), seed);
  if (cfg.experiment == "rassias-der-sum" ||
      cfg.experiment == "rassias-der-prod") {
    const algebra_ptr alg =
        cfg.algebra ? load_algebra(*cfg.algebra) : make_matrix_algebra(2);
    return rassias_der_map(alg, checked_eps(cfg, 0.5),
                           checked_exponent(cfg, 0.5, "p"), seed);
  }
  if (cfg.experiment == "luminet") return build_luminet_map();
  if (cfg.experiment == "oracle-crosscheck")
    return make_perturbed_hom(map_spec::identity(make_real_algebra()),
                              checked_eps(cfg, 0.5), default_quantization_step,
                              seed);
  throw config_error("experiment '" + cfg.experiment +
                     "' has no canonical map to trace");
}

experiment_result run_experiment(const experiment_config& cfg) {
  const auto& catalog = experiment_catalog();
  if (std::none_of(catalog.begin(), catalog.end(), [&](const auto& e) {
        return e.name == cfg.experiment;
      }))
    throw config_error("unknown experiment: " + cfg.experiment);
  check_keys(cfg);

  run_state st;
  if (cfg.experiment == "hyers-hom") run_hyers_hom(cfg, st);
  else if (cfg.experiment == "rassias-hom") run_rassias_hom(cfg, st);
  else if (cfg.experiment == "rassias-der-sum")
    run_rassias_der(cfg, st, der_weight::sum_powers);
  else if (cfg.experiment == "rassias-der-prod")
    run_rassias_der(cfg, st, der_weight::product_powers);
  else if (cfg.experiment == "luminet") run_luminet(cfg, st);
  else if (cfg.experiment == "nilpotent") run_nilpotent(cfg, st);
  else run_oracle_crosscheck(cfg, st);

  experiment_result out;
  out.all_satisfied =
      std::all_of(st.reports.begin(), st.reports.end(),
                  [](const defect_report& r) { return r.satisfied; });

  ojson doc;
  doc["experiment"] = cfg.experiment;
  doc["parameters"] = st.echo;
  if (cfg.with_timestamp) doc["generated_at"] = utc_timestamp();
  ojson reps = ojson::array();
  for (const auto& r : st.reports) reps.push_back(to_json(r));
  doc["reports"] = std::move(reps);
  ojson trs = ojson::array();
  for (const auto& t : st.traces) trs.push_back(to_json(t));
  doc["traces"] = std::move(trs);
  doc["all_satisfied"] = out.all_satisfied;

  if (cfg.format == "csv") {
    std::string text = csv_header();
    text += '\n';
    for (const auto& r : st.reports) {
      text += csv_row(r);
      text += '\n';
    }
    out.rendered = std::move(text);
  } else {
    out.rendered = doc.dump(2);
    out.rendered += '\n';
  }
  out.report = std::move(doc);
  return out;
}

}  // namespace nring
