#pragma once

#include <optional>
#include <vector>

#include "nring/direct_method.hpp"

namespace nring {

// Values of a map along integer multiples of a generator: f(t g) for
// t = -extent .. extent.
struct sampled_map {
  element generator;
  int extent = 8;
  std::vector<element> values;  // indexed by t + extent
};

sampled_map sample_map(const map_spec& f, const element& g, int extent);

struct chebyshev_fit {
  element x0;              // best rate: the additive map t g -> t x0
  double distance = 0.0;   // max_t |f(t g) - t x0|
  double final_step = 0.0; // last pattern-search step
  std::size_t evaluations = 0;
};

// Nearest additive map on the sample in the Chebyshev (minimax) sense.
// Each coordinate slice max_t |v_t - t x| is convex and piecewise
// linear; a golden-section pass per coordinate finds the slice minima,
// then a joint pattern search polishes the full vector under the
// codomain norm. Seeded from f(extent * g) / extent and accepting only
// strict improvements, so exactly linear samples return their rate
// without any drift. The result is locally optimal: moving any single
// coordinate by +-10 * final_step does not decrease the distance.
chebyshev_fit nearest_additive_chebyshev(const sampled_map& s);

struct cross_validation {
  chebyshev_fit fit;
  element limit_at_g;
  double difference = 0.0;      // |x0 - h(g)|
  double agreement_bound = 0.0; // 2 eps / extent
  bool agrees = false;
};

// Fits the sampled oracle and compares its rate against the direct
// method limit at the generator. eps is the declared bounded-noise
// budget of f; a flat |nu| <= eps forces |x0 - h(g)| <= 2 eps / extent.
// Propagates limit_diverged when the direct method does not converge.
cross_validation cross_validate(const map_spec& f, const element& g,
                                int extent, const schedule& sched, double eps,
                                const std::optional<defect_budget>& budget = {});

}  // namespace nring
