#include "tfad/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tfad {

namespace {

void check_shapes(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
                  const OptimizerState& state) {
    if (params.size() != grads.size())
        throw std::invalid_argument("optimizer: " + std::to_string(params.size()) +
                                    " params vs " + std::to_string(grads.size()) + " grads");
    if (state.config.kind == OptimizerKind::adam &&
        state.first_moment.size() != params.size())
        throw std::invalid_argument("optimizer: state tracks " +
                                    std::to_string(state.first_moment.size()) +
                                    " params, got " + std::to_string(params.size()));
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i]->same_shape(*grads[i]))
            throw std::invalid_argument("optimizer: param/grad shape mismatch at index " +
                                        std::to_string(i));
        if (state.config.kind == OptimizerKind::adam &&
            !params[i]->same_shape(state.first_moment[i]))
            throw std::invalid_argument("optimizer: accumulator shape mismatch at index " +
                                        std::to_string(i));
    }
}

}  // namespace

OptimizerState OptimizerState::init(const std::vector<const Matrix*>& params,
                                    const OptimizerConfig& config) {
    OptimizerState s;
    s.config = config;
    if (config.kind == OptimizerKind::adam) {
        s.first_moment.reserve(params.size());
        s.second_moment.reserve(params.size());
        for (const Matrix* p : params) {
            s.first_moment.emplace_back(p->rows, p->cols, 0.0);
            s.second_moment.emplace_back(p->rows, p->cols, 0.0);
        }
    }
    return s;
}

void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               OptimizerState& state) {
    check_shapes(params, grads, state);
    const OptimizerConfig& c = state.config;
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double corr1 = 1.0 - std::pow(c.beta1, t);
    const double corr2 = 1.0 - std::pow(c.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        Matrix& p = *params[i];
        const Matrix& g = *grads[i];
        Matrix& m = state.first_moment[i];
        Matrix& v = state.second_moment[i];
        for (std::size_t k = 0; k < p.data.size(); ++k) {
            m.data[k] = c.beta1 * m.data[k] + (1.0 - c.beta1) * g.data[k];
            v.data[k] = c.beta2 * v.data[k] + (1.0 - c.beta2) * g.data[k] * g.data[k];
            const double m_hat = m.data[k] / corr1;
            const double v_hat = v.data[k] / corr2;
            p.data[k] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
        }
        debug_check_finite(p, "adam_step param");
    }
}

void sgd_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
              OptimizerState& state) {
    check_shapes(params, grads, state);
    ++state.step;
    for (std::size_t i = 0; i < params.size(); ++i) {
        Matrix& p = *params[i];
        const Matrix& g = *grads[i];
        for (std::size_t k = 0; k < p.data.size(); ++k)
            p.data[k] -= state.config.learning_rate * g.data[k];
        debug_check_finite(p, "sgd_step param");
    }
}

void optimizer_step(const std::vector<Matrix*>& params,
                    const std::vector<const Matrix*>& grads, OptimizerState& state) {
    if (state.config.kind == OptimizerKind::adam)
        adam_step(params, grads, state);
    else
        sgd_step(params, grads, state);
}

}  // namespace tfad
