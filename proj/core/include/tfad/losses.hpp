#pragma once

#include <cstddef>
#include <vector>

namespace tfad {

// All loss terms use batch-mean semantics so the learning rate is decoupled
// from the batch size; the argmin is unchanged from the summed form.
struct LossTerms {
    double l_ae = 0.0;
    double l_e = 0.0;
    double l_d = 0.0;
    double l_joint = 0.0;
    double a0 = 0.0;
    double lambda = 0.0;
};

struct LossGrad {
    double value = 0.0;
    std::vector<double> grad;
};

// Margin term on reconstruction errors: mean_i (1-y_i) e_i + y_i max(0, a0 - e_i).
// Normal samples pull e down; anomalies are pushed past a0 (hinge gradient -1
// inside the margin, 0 at and beyond the boundary).
LossGrad loss_e(const std::vector<double>& errors, const std::vector<int>& labels, double a0);

// Deviation term on scores: mean_i (1-y_i) |s_i| + y_i max(0, a0 - s_i).
// Subgradient of |s| at 0 is taken as 0.
LossGrad loss_d(const std::vector<double>& scores, const std::vector<int>& labels, double a0);

struct JointLoss {
    LossTerms terms;
    std::vector<double> dscores;  // gradient reaching both nets through the score
    std::vector<double> de;       // lambda-weighted L_e gradient; encoder-only path
};

// l_joint = l_d + lambda * l_e. When include_le is false the L_e term is
// dropped entirely and de is all zero.
JointLoss loss_joint(const std::vector<double>& scores, const std::vector<double>& errors,
                     const std::vector<int>& labels, double a0, double lambda,
                     bool include_le = true);

struct PretrainLoss {
    double value = 0.0;
    std::vector<double> de;  // gradient per sample error
};

// RMSE over the batch, expressed through the per-sample residual norms:
// sqrt(mean_i e_i^2 / m) with m the feature width. Empty batches are rejected.
PretrainLoss loss_pretrain(const std::vector<double>& errors, std::size_t feature_dim);

}  // namespace tfad
