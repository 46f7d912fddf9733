#pragma once

// Fincke-Pohst style enumeration of short vectors of a positive definite
// quadratic form. The geometry runs in double precision over a padded
// region; callers apply exact filters to the emitted candidates.

#include "cmq/numeric.hpp"

#include <Eigen/Dense>
#include <functional>

namespace cmq {

// Emits every nonzero integer vector x with x^T G x <= bound (up to the
// floating padding; slight over-coverage, never under-coverage for
// well-conditioned G). Both x and -x are emitted.
void enumerate_short_vectors(const Eigen::MatrixXd& gram, double bound,
                             const std::function<void(const VecX<Int>&)>& emit);

// Brute-force oracle: enumerate an axis-aligned box guaranteed to contain
// {x : x^T G x <= bound} and emit everything inside it. Used by tests to
// certify the layered enumeration.
void enumerate_box_oracle(const Eigen::MatrixXd& gram, double bound,
                          const std::function<void(const VecX<Int>&)>& emit);

}  // namespace cmq
