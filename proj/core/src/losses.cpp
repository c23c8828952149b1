#include "tfad/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace tfad {

namespace {

void check_batch(std::size_t n_values, const std::vector<int>& labels, const char* what) {
    if (n_values == 0) throw std::invalid_argument(std::string(what) + ": empty batch");
    if (n_values != labels.size())
        throw std::invalid_argument(std::string(what) + ": values/labels length mismatch");
    for (int y : labels)
        if (y != 0 && y != 1)
            throw std::invalid_argument(std::string(what) + ": labels must be 0 or 1");
}

}  // namespace

LossGrad loss_e(const std::vector<double>& errors, const std::vector<int>& labels, double a0) {
    check_batch(errors.size(), labels, "loss_e");
    const double inv_n = 1.0 / static_cast<double>(errors.size());
    LossGrad out;
    out.grad.assign(errors.size(), 0.0);
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (labels[i] == 0) {
            out.value += errors[i] * inv_n;
            out.grad[i] = inv_n;
        } else if (errors[i] < a0) {
            out.value += (a0 - errors[i]) * inv_n;
            out.grad[i] = -inv_n;
        }
    }
    return out;
}

LossGrad loss_d(const std::vector<double>& scores, const std::vector<int>& labels, double a0) {
    check_batch(scores.size(), labels, "loss_d");
    const double inv_n = 1.0 / static_cast<double>(scores.size());
    LossGrad out;
    out.grad.assign(scores.size(), 0.0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 0) {
            out.value += std::abs(scores[i]) * inv_n;
            if (scores[i] > 0.0)
                out.grad[i] = inv_n;
            else if (scores[i] < 0.0)
                out.grad[i] = -inv_n;
        } else if (scores[i] < a0) {
            out.value += (a0 - scores[i]) * inv_n;
            out.grad[i] = -inv_n;
        }
    }
    return out;
}

JointLoss loss_joint(const std::vector<double>& scores, const std::vector<double>& errors,
                     const std::vector<int>& labels, double a0, double lambda,
                     bool include_le) {
    if (scores.size() != errors.size())
        throw std::invalid_argument("loss_joint: scores/errors length mismatch");
    JointLoss out;
    const LossGrad d = loss_d(scores, labels, a0);
    out.terms.a0 = a0;
    out.terms.lambda = lambda;
    out.terms.l_d = d.value;
    out.dscores = d.grad;
    out.de.assign(errors.size(), 0.0);
    if (include_le) {
        const LossGrad e = loss_e(errors, labels, a0);
        out.terms.l_e = e.value;
        for (std::size_t i = 0; i < errors.size(); ++i) out.de[i] = lambda * e.grad[i];
    }
    out.terms.l_joint = out.terms.l_d + lambda * out.terms.l_e;
    return out;
}

PretrainLoss loss_pretrain(const std::vector<double>& errors, std::size_t feature_dim) {
    if (errors.empty()) throw std::invalid_argument("loss_pretrain: empty batch");
    if (feature_dim == 0) throw std::invalid_argument("loss_pretrain: zero feature width");
    PretrainLoss out;
    const double denom = static_cast<double>(errors.size()) * static_cast<double>(feature_dim);
    double ss = 0.0;
    for (double e : errors) ss += e * e;
    out.value = std::sqrt(ss / denom);
    out.de.assign(errors.size(), 0.0);
    if (out.value > 0.0) {
        for (std::size_t i = 0; i < errors.size(); ++i)
            out.de[i] = errors[i] / (denom * out.value);
    }
    return out;
}

}  // namespace tfad
