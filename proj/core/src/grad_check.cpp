#include "tfad/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tfad {

std::vector<Matrix> finite_diff_grad(const std::function<double()>& loss,
                                     const std::vector<Matrix*>& params, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("finite_diff_grad: epsilon must be > 0");
    std::vector<Matrix> grads;
    grads.reserve(params.size());
    for (std::size_t p = 0; p < params.size(); ++p) {
        Matrix& theta = *params[p];
        Matrix g(theta.rows, theta.cols, 0.0);
        for (std::size_t k = 0; k < theta.data.size(); ++k) {
            const double saved = theta.data[k];
            theta.data[k] = saved + epsilon;
            const double up = loss();
            theta.data[k] = saved - epsilon;
            const double down = loss();
            theta.data[k] = saved;
            if (!std::isfinite(up) || !std::isfinite(down))
                throw std::runtime_error("finite_diff_grad: non-finite loss at param " +
                                         std::to_string(p) + " coordinate " +
                                         std::to_string(k));
            g.data[k] = (up - down) / (2.0 * epsilon);
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

double max_relative_error(const std::vector<Matrix>& a, const std::vector<Matrix>& b,
                          double floor) {
    if (a.size() != b.size())
        throw std::invalid_argument("max_relative_error: list sizes differ");
    double worst = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (!a[p].same_shape(b[p]))
            throw std::invalid_argument("max_relative_error: shape mismatch at index " +
                                        std::to_string(p));
        for (std::size_t k = 0; k < a[p].data.size(); ++k) {
            const double x = a[p].data[k];
            const double y = b[p].data[k];
            const double denom = std::max({std::abs(x), std::abs(y), floor});
            worst = std::max(worst, std::abs(x - y) / denom);
        }
    }
    return worst;
}

}  // namespace tfad
