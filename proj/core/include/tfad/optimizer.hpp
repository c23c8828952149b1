#pragma once

#include <cstdint>
#include <vector>

#include "tfad/matrix.hpp"

namespace tfad {

enum class OptimizerKind { adam, sgd };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Per-parameter moment accumulators. Shapes mirror the parameter list exactly;
// the step counter increases by one per update.
struct OptimizerState {
    OptimizerConfig config;
    std::uint64_t step = 0;
    std::vector<Matrix> first_moment;
    std::vector<Matrix> second_moment;

    static OptimizerState init(const std::vector<const Matrix*>& params,
                               const OptimizerConfig& config);
};

// Bias-corrected Adam update, applied in place. Throws on any shape mismatch
// between params, grads and the accumulators.
void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               OptimizerState& state);

// Plain SGD update (selectable alternative to Adam).
void sgd_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
              OptimizerState& state);

// Dispatch on state.config.kind.
void optimizer_step(const std::vector<Matrix*>& params,
                    const std::vector<const Matrix*>& grads, OptimizerState& state);

}  // namespace tfad
