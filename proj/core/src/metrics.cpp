#include "tfad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tfad {

namespace {

void check_inputs(const std::vector<double>& scores, const std::vector<int>& labels,
                  std::size_t& n_pos, std::size_t& n_neg) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("metrics: scores and labels lengths differ");
    if (scores.empty()) throw std::invalid_argument("metrics: empty input");
    n_pos = 0;
    n_neg = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw std::invalid_argument("metrics: labels must be 0 or 1");
        if (y == 1)
            ++n_pos;
        else
            ++n_neg;
    }
}

std::vector<std::size_t> order_by_score_desc(const std::vector<double>& scores) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return idx;
}

}  // namespace

double auc_roc(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::size_t n_pos, n_neg;
    check_inputs(scores, labels, n_pos, n_neg);
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("auc_roc: both classes must be present");

    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank-sum with average ranks over tie groups.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
        for (std::size_t k = i; k < j; ++k)
            if (labels[idx[k]] == 1) pos_rank_sum += avg_rank;
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double auc_pr(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::size_t n_pos, n_neg;
    check_inputs(scores, labels, n_pos, n_neg);
    if (n_pos == 0) throw std::invalid_argument("auc_pr: no positive samples");

    const std::vector<std::size_t> idx = order_by_score_desc(scores);

    double ap = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) {
            if (labels[idx[k]] == 1)
                ++tp;
            else
                ++fp;
        }
        const double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return ap;
}

EvalResult evaluate(const std::vector<double>& scores, const std::vector<int>& labels) {
    EvalResult r;
    std::size_t n_pos, n_neg;
    check_inputs(scores, labels, n_pos, n_neg);
    r.n_pos = n_pos;
    r.n_neg = n_neg;
    r.auc_roc = auc_roc(scores, labels);
    r.auc_pr = auc_pr(scores, labels);
    return r;
}

AggregateResult aggregate_runs(const std::vector<EvalResult>& results) {
    if (results.empty()) throw std::invalid_argument("aggregate_runs: empty result list");
    AggregateResult agg;
    agg.n_runs = results.size();
    const double n = static_cast<double>(results.size());
    for (const EvalResult& r : results) {
        agg.roc.mean += r.auc_roc;
        agg.pr.mean += r.auc_pr;
    }
    agg.roc.mean /= n;
    agg.pr.mean /= n;
    if (results.size() > 1) {
        double ss_roc = 0.0, ss_pr = 0.0;
        for (const EvalResult& r : results) {
            ss_roc += (r.auc_roc - agg.roc.mean) * (r.auc_roc - agg.roc.mean);
            ss_pr += (r.auc_pr - agg.pr.mean) * (r.auc_pr - agg.pr.mean);
        }
        agg.roc.stddev = std::sqrt(ss_roc / (n - 1.0));
        agg.pr.stddev = std::sqrt(ss_pr / (n - 1.0));
    }
    return agg;
}

}  // namespace tfad
