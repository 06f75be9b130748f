#pragma once

#include <stdexcept>
#include <string>

namespace nring {

// Base class for every failure the library reports.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mixing elements that live in different algebras.
struct algebra_mismatch : error { using error::error; };
// product_chain over an empty list.
struct empty_chain : error { using error::error; };
// Map applied to an element outside its declared domain, or a defect
// functional that needs module structure the map does not carry.
struct domain_mismatch : error { using error::error; };
// Negative or non-finite perturbation budget.
struct invalid_eps : error { using error::error; };
// Iteration schedule would push arguments past the safe scaling range.
struct scale_overflow : error { using error::error; };
// A map evaluation produced NaN or Inf.
struct non_finite : error { using error::error; };
// Exponent outside the range a stability bound supports (p = 1, p < 0,
// or a schedule direction that contradicts the exponent).
struct unsupported_exponent : error { using error::error; };
// A reference map failed its additivity precondition.
struct not_additive : error { using error::error; };
// Homogeneity check requested for a map not declared homogeneous.
struct not_homogeneous : error { using error::error; };
// Algebra or bimodule definition failed construction-time validation.
struct construction_error : error { using error::error; };
// Bad experiment configuration (unknown keys, out-of-range values).
struct config_error : error { using error::error; };

}  // namespace nring
