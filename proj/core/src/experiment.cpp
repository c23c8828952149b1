#include "tfad/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tfad/errors.hpp"

namespace tfad {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_mean_sd(const MetricAggregate& m) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f+-%.3f", m.mean, m.stddev);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void ExperimentSpec::validate() const {
    train.validate();
    if (n_runs == 0) throw std::invalid_argument("experiment: n_runs must be >= 1");
    if (n_labeled_grid.empty())
        throw std::invalid_argument("experiment: n_labeled grid must be non-empty");
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        throw std::invalid_argument("experiment: test_fraction must be in (0,1)");
    if (contamination < 0.0 || contamination >= 1.0)
        throw std::invalid_argument("experiment: contamination must be in [0,1)");
}

std::string RunReport::metric_records(const std::string& variant) const {
    std::string out;
    const std::string tag =
        variant.empty() ? "" : "\"variant\":\"" + variant + "\",";
    for (const RunRecord& r : runs) {
        out += "{" + tag + "\"run\":" + std::to_string(r.run_index) +
               ",\"seed\":" + std::to_string(r.seed) +
               ",\"n_labeled\":" + std::to_string(n_labeled) +
               ",\"auc_roc\":" + fmt_double(r.eval.auc_roc) +
               ",\"auc_pr\":" + fmt_double(r.eval.auc_pr) +
               ",\"n_pos\":" + std::to_string(r.eval.n_pos) +
               ",\"n_neg\":" + std::to_string(r.eval.n_neg) + "}\n";
    }
    out += "{" + tag + "\"aggregate\":true,\"n_runs\":" + std::to_string(aggregate.n_runs) +
           ",\"auc_roc_mean\":" + fmt_double(aggregate.roc.mean) +
           ",\"auc_roc_stddev\":" + fmt_double(aggregate.roc.stddev) +
           ",\"auc_pr_mean\":" + fmt_double(aggregate.pr.mean) +
           ",\"auc_pr_stddev\":" + fmt_double(aggregate.pr.stddev) + "}\n";
    return out;
}

RunReport run_protocol(const Dataset& ds, const TrainConfig& cfg, std::size_t n_labeled,
                       double contamination, double test_fraction, std::size_t n_runs,
                       std::ostream* log) {
    cfg.validate();
    RunReport report;
    report.config = cfg;
    report.n_labeled = n_labeled;
    report.contamination = contamination;
    report.test_fraction = test_fraction;

    std::vector<EvalResult> evals;
    for (std::size_t i = 0; i < n_runs; ++i) {
        const std::uint64_t seed = cfg.seed + i;
        Rng rng(seed);
        RunRecord rec;
        rec.run_index = i;
        rec.seed = seed;
        try {
            const WeakLabelSplit split =
                make_weak_split(ds, n_labeled, contamination, test_fraction, rng);

            auto t0 = std::chrono::steady_clock::now();
            AutoencoderParams encoder =
                cfg.no_pretrain
                    ? AutoencoderParams::make(ds.dim(), rng, cfg.latent_dim,
                                              cfg.encoder_hidden)
                    : pretrain(ds, split, cfg, rng, log);
            rec.secs_stage1 = seconds_since(t0);

            t0 = std::chrono::steady_clock::now();
            TrainOptions options;
            options.log = log;
            const Model model = train_joint(ds, split, std::move(encoder), cfg, rng, options);
            rec.secs_stage2 = seconds_since(t0);

            Matrix test_x(split.test.size(), ds.dim());
            std::vector<int> test_y(split.test.size());
            for (std::size_t t = 0; t < split.test.size(); ++t) {
                for (std::size_t j = 0; j < ds.dim(); ++j)
                    test_x(t, j) = ds.features(split.test[t], j);
                test_y[t] = ds.labels[split.test[t]];
            }
            rec.eval = evaluate(predict_scores(model, test_x), test_y);
        } catch (const DivergenceError& ex) {
            throw DivergenceError("run " + std::to_string(i) + ": " + ex.what());
        }
        if (log)
            (*log) << "run=" << i << " seed=" << seed << " auc_roc=" << rec.eval.auc_roc
                   << " auc_pr=" << rec.eval.auc_pr << "\n";
        evals.push_back(rec.eval);
        report.runs.push_back(rec);
    }
    report.aggregate = aggregate_runs(evals);
    return report;
}

RunReport cmd_run(const Dataset& ds, const ExperimentSpec& spec, std::ostream* log) {
    spec.validate();
    return run_protocol(ds, spec.train, spec.n_labeled(), spec.contamination,
                        spec.test_fraction, spec.n_runs, log);
}

const std::vector<std::string>& ablation_suites() {
    static const std::vector<std::string> suites = {
        "factors",     "reconstructed-only", "loss-term", "a0-grid",
        "lambda-grid", "pretrain",           "e-injection"};
    return suites;
}

std::vector<AblationRow> cmd_ablate(const Dataset& ds, const ExperimentSpec& spec,
                                    const std::string& suite, std::ostream* log) {
    spec.validate();
    std::vector<std::pair<std::string, TrainConfig>> variants;
    const TrainConfig& base = spec.train;

    if (suite == "factors") {
        for (const char* mask : {"h", "r", "e", "h,r", "h,e", "r,e", "h,r,e"}) {
            TrainConfig cfg = base;
            cfg.factors = FactorMask::parse(mask);
            variants.emplace_back(mask, cfg);
        }
    } else if (suite == "reconstructed-only") {
        TrainConfig alt = base;
        alt.reconstructed_only = true;
        variants.emplace_back("proposed", base);
        variants.emplace_back("reconstructed-only", alt);
    } else if (suite == "loss-term") {
        TrainConfig alt = base;
        alt.no_le_term = true;
        variants.emplace_back("proposed", base);
        variants.emplace_back("no-le-term", alt);
    } else if (suite == "a0-grid") {
        for (double a0 : {0.1, 1.0, 3.0, 4.0, 5.0, 6.0, 7.0, 10.0, 20.0}) {
            TrainConfig cfg = base;
            cfg.a0 = a0;
            variants.emplace_back("a0=" + fmt_double(a0), cfg);
        }
    } else if (suite == "lambda-grid") {
        for (double lambda : {0.1, 0.5, 1.0, 5.0, 10.0}) {
            TrainConfig cfg = base;
            cfg.lambda = lambda;
            variants.emplace_back("lambda=" + fmt_double(lambda), cfg);
        }
    } else if (suite == "pretrain") {
        TrainConfig alt = base;
        alt.no_pretrain = true;
        variants.emplace_back("pretrained", base);
        variants.emplace_back("end-to-end", alt);
    } else if (suite == "e-injection") {
        TrainConfig alt = base;
        alt.first_layer_e_only = true;
        variants.emplace_back("proposed", base);
        variants.emplace_back("first-layer-only", alt);
    } else {
        std::string known;
        for (const auto& s : ablation_suites()) known += (known.empty() ? "" : ", ") + s;
        throw UsageError("unknown ablation suite '" + suite + "' (expected one of: " + known +
                         ")");
    }

    std::vector<AblationRow> rows;
    for (const auto& [name, cfg] : variants) {
        if (log) (*log) << "variant=" << name << "\n";
        rows.push_back({name, run_protocol(ds, cfg, spec.n_labeled(), spec.contamination,
                                           spec.test_fraction, spec.n_runs, log)});
    }
    return rows;
}

std::vector<SweepPoint> cmd_sweep_labels(const Dataset& ds, const ExperimentSpec& spec,
                                         std::ostream* log) {
    spec.validate();
    std::vector<SweepPoint> points;
    for (std::size_t budget : spec.n_labeled_grid) {
        if (log) (*log) << "n_labeled=" << budget << "\n";
        points.push_back({budget, run_protocol(ds, spec.train, budget, spec.contamination,
                                               spec.test_fraction, spec.n_runs, log)});
    }
    return points;
}

std::string format_report_table(const std::vector<AblationRow>& rows) {
    std::size_t width = 12;
    for (const auto& row : rows) width = std::max(width, row.name.size() + 2);
    std::ostringstream out;
    out << std::string(width, ' ') << "AUC-ROC          AUC-PR\n";
    for (const auto& row : rows) {
        out << row.name << std::string(width - row.name.size(), ' ')
            << fmt_mean_sd(row.report.aggregate.roc) << "      "
            << fmt_mean_sd(row.report.aggregate.pr) << "\n";
    }
    return out.str();
}

std::string format_sweep_table(const std::vector<SweepPoint>& points) {
    std::ostringstream out;
    out << "n_labeled   AUC-ROC          AUC-PR\n";
    for (const auto& p : points) {
        char head[24];
        std::snprintf(head, sizeof(head), "%-12zu", p.n_labeled);
        out << head << fmt_mean_sd(p.report.aggregate.roc) << "      "
            << fmt_mean_sd(p.report.aggregate.pr) << "\n";
    }
    return out.str();
}

}  // namespace tfad
