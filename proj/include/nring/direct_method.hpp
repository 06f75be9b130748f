#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nring/map_catalog.hpp"

namespace nring {

enum class schedule_kind { dyadic, integer };

schedule_kind schedule_kind_from_string(const std::string& s);
std::string to_string(schedule_kind k);

// Rescaling schedule for the direct method. The m-th iterate of f at a
// is scale^{-s} f(scale^{s} a) with scale = 2^m (dyadic) or m (integer).
// s = +1 expands arguments (bounded and p < 1 regimes), s = -1 shrinks
// them (p > 1 regime).
struct schedule {
  schedule_kind kind = schedule_kind::dyadic;
  int s = +1;
  int m_max = 40;
  double tol = 1e-9;
};
void validate(const schedule& sched);

enum class verdict_kind { converged, diverged, inconclusive };
std::string to_string(verdict_kind v);

struct iterate_record {
  int m;
  element value;
  std::optional<double> step_norm;  // distance to the previous iterate
};

struct growth_witness {
  int m = 0;
  double value_norm = 0.0;
};

// Full record of one direct-method run. The loop always walks to m_max
// (stopping early only for the growth guard), then grades the whole
// trace: Converged needs the last three step norms at or below tol, plus
// the analytic residual bound at or below tol whenever a budget was
// declared; Diverged needs the growth guard or a window of eight
// non-shrinking steps well above tol; anything else is Inconclusive.
struct iteration_trace {
  element point;
  schedule sched;
  std::vector<iterate_record> iterates;
  verdict_kind verdict = verdict_kind::inconclusive;
  std::optional<element> limit;
  std::optional<double> residual;  // certified |limit - true limit|
  std::optional<growth_witness> growth;
};

// The m-th iterate as a map, sharing the evaluation path of direct_limit.
map_spec scaled_iterate(const map_spec& f, const schedule& sched, int m);

// Upper bound for |h_m(a) - lim h(a)|. Bounded regime (p absent):
// eps * 2^-m dyadic, eps / m integer, requiring s = +1. Power regime:
// scale^{s(p-1)} * (2 eps / |2 - 2^p|) * |a|^p. p = 1 is rejected.
double residual_bound(double eps, std::optional<double> p,
                      const schedule& sched, int m, double a_norm);

iteration_trace direct_limit(const map_spec& f, const element& a,
                             const schedule& sched,
                             const std::optional<defect_budget>& budget = {});

// Thrown by build_limit_map when a probe fails to converge; carries the
// offending trace.
class limit_diverged : public error {
 public:
  limit_diverged(const std::string& msg, iteration_trace trace)
      : error(msg),
        trace_(std::make_shared<iteration_trace>(std::move(trace))) {}
  const iteration_trace& trace() const { return *trace_; }

 private:
  std::shared_ptr<iteration_trace> trace_;
};

struct limit_map_result {
  map_spec map;  // linear extension of the per-basis limits
  std::vector<iteration_trace> probe_traces;
};

// Runs the direct method at every basis element of f's domain, extends
// the limits linearly, and cross-checks the extension against direct
// limits at 16 seeded off-basis points (within 10 * tol, else
// not_additive is thrown).
limit_map_result build_limit_map(const map_spec& f, const schedule& sched,
                                 const std::optional<defect_budget>& budget = {});

}  // namespace nring
