#pragma once

#include <cstddef>
#include <vector>

namespace tfad {

struct EvalResult {
    double auc_roc = 0.0;
    double auc_pr = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

// Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 * P(tie), computed with
// tie-averaged ranks. Both classes must be present.
double auc_roc(const std::vector<double>& scores, const std::vector<int>& labels);

// Average precision: sum_n (R_n - R_{n-1}) * P_n over the descending-score
// sweep, tied scores processed as one block. Requires at least one positive.
double auc_pr(const std::vector<double>& scores, const std::vector<int>& labels);

EvalResult evaluate(const std::vector<double>& scores, const std::vector<int>& labels);

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n-1); 0 when n == 1
};

struct AggregateResult {
    MetricAggregate roc;
    MetricAggregate pr;
    std::size_t n_runs = 0;
};

AggregateResult aggregate_runs(const std::vector<EvalResult>& results);

}  // namespace tfad
