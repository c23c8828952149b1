#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tfad/dataset.hpp"
#include "tfad/metrics.hpp"
#include "tfad/trainer.hpp"

namespace tfad {

struct ExperimentSpec {
    TrainConfig train;
    std::size_t n_runs = 10;
    std::vector<std::size_t> n_labeled_grid = {30};  // sweep default {30,60,90,120}
    double contamination = 0.02;
    double test_fraction = 0.2;

    std::size_t n_labeled() const { return n_labeled_grid.front(); }
    void validate() const;
};

struct RunRecord {
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    EvalResult eval;
    double secs_stage1 = 0.0;
    double secs_stage2 = 0.0;
};

struct RunReport {
    TrainConfig config;
    std::size_t n_labeled = 0;
    double contamination = 0.0;
    double test_fraction = 0.0;
    std::vector<RunRecord> runs;
    AggregateResult aggregate;

    // Deterministic JSONL: one record per run plus an aggregate line. Timing
    // is deliberately excluded so identical replays are byte-identical.
    std::string metric_records(const std::string& variant = "") const;
};

// One protocol cell: n_runs independent runs with seed = config.seed + index,
// each with a fresh split, both training stages, and a test-set evaluation.
RunReport run_protocol(const Dataset& ds, const TrainConfig& cfg, std::size_t n_labeled,
                       double contamination, double test_fraction, std::size_t n_runs,
                       std::ostream* log = nullptr);

RunReport cmd_run(const Dataset& ds, const ExperimentSpec& spec, std::ostream* log = nullptr);

struct AblationRow {
    std::string name;
    RunReport report;
};

// suite is one of: factors, reconstructed-only, loss-term, a0-grid,
// lambda-grid, pretrain, e-injection. Every variant runs under otherwise
// identical settings and seeds.
std::vector<AblationRow> cmd_ablate(const Dataset& ds, const ExperimentSpec& spec,
                                    const std::string& suite, std::ostream* log = nullptr);

const std::vector<std::string>& ablation_suites();

struct SweepPoint {
    std::size_t n_labeled = 0;
    RunReport report;
};

// Label-budget sweep over spec.n_labeled_grid; each budget reuses the same
// seed sequence, so a one-budget sweep reproduces cmd_run exactly.
std::vector<SweepPoint> cmd_sweep_labels(const Dataset& ds, const ExperimentSpec& spec,
                                         std::ostream* log = nullptr);

std::string format_report_table(const std::vector<AblationRow>& rows);
std::string format_sweep_table(const std::vector<SweepPoint>& points);

}  // namespace tfad
