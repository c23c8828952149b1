#pragma once

#include <functional>
#include <vector>

#include "tfad/matrix.hpp"

namespace tfad {

// Central-difference gradient oracle: (f(p+eps) - f(p-eps)) / (2 eps) per
// coordinate. `loss` is re-evaluated after each perturbation of the shared
// parameter storage, so it must be deterministic. A non-finite loss at any
// probe point throws, naming the parameter and coordinate.
std::vector<Matrix> finite_diff_grad(const std::function<double()>& loss,
                                     const std::vector<Matrix*>& params, double epsilon);

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor), over all entries of all pairs.
double max_relative_error(const std::vector<Matrix>& a, const std::vector<Matrix>& b,
                          double floor = 1e-8);

}  // namespace tfad
