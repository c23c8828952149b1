#include "tfad/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "tfad/errors.hpp"
#include "tfad/losses.hpp"

namespace tfad {

std::string FactorMask::to_string() const {
    std::string s;
    auto append = [&](const char* name) {
        if (!s.empty()) s += ",";
        s += name;
    };
    if (use_h) append("h");
    if (use_r) append("r");
    if (use_e) append("e");
    return s;
}

FactorMask FactorMask::parse(const std::string& text) {
    FactorMask mask{false, false, false};
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        std::string item = text.substr(start, comma - start);
        item.erase(std::remove_if(item.begin(), item.end(),
                                  [](char c) { return c == ' ' || c == '\t'; }),
                   item.end());
        if (item == "h")
            mask.use_h = true;
        else if (item == "r")
            mask.use_r = true;
        else if (item == "e")
            mask.use_e = true;
        else if (!item.empty())
            throw std::invalid_argument("factor mask: unknown factor '" + item +
                                        "' (expected h, r, e)");
        start = comma + 1;
    }
    if (!mask.any()) throw std::invalid_argument("factor mask: must keep at least one factor");
    return mask;
}

void TrainConfig::validate() const {
    if (batch_size < 2 || batch_size % 2 != 0)
        throw std::invalid_argument("TrainConfig: batch_size must be even and >= 2");
    if (!factors.any()) throw std::invalid_argument("TrainConfig: factor mask is empty");
    if (lambda < 0.0) throw std::invalid_argument("TrainConfig: lambda must be >= 0");
    if (patience == 0) throw std::invalid_argument("TrainConfig: patience must be >= 1");
    if (first_layer_e_only && reconstructed_only)
        throw std::invalid_argument(
            "TrainConfig: first_layer_e_only and reconstructed_only are exclusive");
}

std::vector<Matrix*> Model::parameters() {
    std::vector<Matrix*> out = ae.parameters();
    for (Matrix* p : scorer.parameters()) out.push_back(p);
    return out;
}

std::size_t scorer_input_width(std::size_t m, std::size_t d, const FactorMask& mask,
                               bool first_layer_e_only, bool reconstructed_only) {
    if (reconstructed_only) return m;
    std::size_t w = 0;
    if (mask.use_r) w += m;
    if (mask.use_h) w += d;
    if (mask.use_e && first_layer_e_only) w += 1;
    return w;
}

Matrix assemble_scorer_input(const Model& model, const AeForward& fwd) {
    if (model.reconstructed_only) return fwd.xhat();
    const std::size_t batch = fwd.x.rows;
    const std::size_t m = fwd.x.cols;
    const std::size_t d = fwd.latent().cols;
    const bool e_column = model.factors.use_e && model.first_layer_e_only;
    Matrix z0(batch, scorer_input_width(m, d, model.factors, model.first_layer_e_only, false));
    for (std::size_t i = 0; i < batch; ++i) {
        std::size_t j = 0;
        if (model.factors.use_r) {
            const bool live = fwd.e[i] > kResidualEpsilon;
            const double inv = live ? 1.0 / fwd.e[i] : 0.0;
            for (std::size_t c = 0; c < m; ++c) z0(i, j++) = fwd.diff(i, c) * inv;
        }
        if (model.factors.use_h)
            for (std::size_t c = 0; c < d; ++c) z0(i, j++) = fwd.latent()(i, c);
        if (e_column) z0(i, j++) = fwd.e[i];
    }
    return z0;
}

BalancedBatchSampler::BalancedBatchSampler(const WeakLabelSplit& split, std::size_t batch_size,
                                           Rng& rng)
    : split_(split), half_(batch_size / 2), rng_(rng) {
    if (batch_size < 2 || batch_size % 2 != 0)
        throw std::invalid_argument("balanced batch: batch_size must be even and >= 2");
    if (split.train_labeled_anomalies.empty())
        throw std::invalid_argument(
            "balanced batch: the labeled anomaly pool is empty; training without any "
            "labeled anomalies is out of scope");
    if (split.train_unlabeled.empty())
        throw std::invalid_argument("balanced batch: the unlabeled pool is empty");
    start_epoch();
}

void BalancedBatchSampler::start_epoch() {
    order_ = split_.train_unlabeled;
    rng_.shuffle(order_);
    cursor_ = 0;
}

BalancedBatch BalancedBatchSampler::next() {
    if (!has_next()) throw std::logic_error("balanced batch: epoch exhausted");
    const std::size_t take = std::min(half_, order_.size() - cursor_);
    BalancedBatch batch;
    batch.unlabeled.assign(order_.begin() + cursor_, order_.begin() + cursor_ + take);
    cursor_ += take;
    batch.anomalies.resize(take);
    const auto& pool = split_.train_labeled_anomalies;
    for (std::size_t i = 0; i < take; ++i)
        batch.anomalies[i] = pool[rng_.uniform_index(pool.size())];
    return batch;
}

BalancedBatch sample_balanced_batch(const WeakLabelSplit& split, std::size_t batch_size,
                                    Rng& rng) {
    BalancedBatchSampler sampler(split, batch_size, rng);
    return sampler.next();
}

namespace {

Matrix gather_rows(const Matrix& features, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), features.cols);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < features.cols; ++j) out(i, j) = features(idx[i], j);
    return out;
}

struct EarlyStop {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t plateau = 0;

    // Returns true when training should stop.
    bool update(double epoch_loss, const TrainConfig& cfg) {
        if (best - epoch_loss < cfg.min_improvement)
            ++plateau;
        else
            plateau = 0;
        best = std::min(best, epoch_loss);
        return plateau >= cfg.patience;
    }
};

}  // namespace

AutoencoderParams pretrain(const Dataset& ds, const WeakLabelSplit& split,
                           const TrainConfig& cfg, Rng& rng, std::ostream* log) {
    cfg.validate();
    if (split.train_unlabeled.empty())
        throw std::invalid_argument("pretrain: the unlabeled pool is empty");

    AutoencoderParams ae =
        AutoencoderParams::make(ds.dim(), rng, cfg.latent_dim, cfg.encoder_hidden);
    if (cfg.stage1_epochs == 0) return ae;

    OptimizerConfig oc;
    oc.kind = cfg.optimizer;
    oc.learning_rate = cfg.lr_stage1;
    OptimizerState opt = OptimizerState::init(std::as_const(ae).parameters(), oc);
    std::vector<Matrix*> params = ae.parameters();

    EarlyStop stop;
    for (std::size_t epoch = 0; epoch < cfg.stage1_epochs; ++epoch) {
        std::vector<std::size_t> order = split.train_unlabeled;
        rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t rows_seen = 0;
        for (std::size_t at = 0; at < order.size(); at += cfg.batch_size) {
            const std::size_t take = std::min(cfg.batch_size, order.size() - at);
            const std::vector<std::size_t> idx(order.begin() + at, order.begin() + at + take);
            const Matrix x = gather_rows(ds.features, idx);
            const AeForward fwd = ae_forward(x, ae);
            const PretrainLoss loss = loss_pretrain(fwd.e, ds.dim());
            if (!std::isfinite(loss.value))
                throw DivergenceError("pretraining diverged at epoch " + std::to_string(epoch));
            const AeGrads grads = ae_backward(fwd, ae, nullptr, nullptr, &loss.de, nullptr);
            optimizer_step(params, grads.parameter_order(), opt);
            loss_sum += loss.value * static_cast<double>(take);
            rows_seen += take;
        }
        const double epoch_loss = loss_sum / static_cast<double>(rows_seen);
        if (log)
            (*log) << "stage=1 epoch=" << epoch << " loss_ae=" << epoch_loss << "\n";
        if (stop.update(epoch_loss, cfg)) break;
    }
    return ae;
}

// Shared forward/backward for one joint batch; also the surface the gradient
// checks probe.
JointBatchGrads joint_forward_backward(const Model& model, const Matrix& x,
                                       const std::vector<int>& y, const TrainConfig& cfg) {
    JointBatchGrads out;
    const AeForward fwd = ae_forward(x, model.ae);
    const Matrix z0 = assemble_scorer_input(model, fwd);
    const ScoreForward sf = score_forward(z0, fwd.e, model.scorer);
    const std::vector<double> scores = sf.scores();

    const JointLoss jl =
        loss_joint(scores, fwd.e, y, cfg.a0, cfg.lambda, !cfg.no_le_term);
    out.terms = jl.terms;

    out.score = score_backward(sf, model.scorer, jl.dscores);

    // Route the scorer's input gradient back onto the three factors (or the
    // reconstruction directly for the degenerate variant).
    const std::size_t batch = x.rows;
    const std::size_t m = x.cols;
    const std::size_t d = fwd.latent().cols;
    std::vector<double> de = jl.de;  // lambda-weighted L_e path, encoder-only
    for (std::size_t i = 0; i < batch; ++i) de[i] += out.score.de[i];

    if (model.reconstructed_only) {
        out.ae = ae_backward(fwd, model.ae, nullptr, nullptr, &de, &out.score.dz0);
        return out;
    }

    Matrix dh(batch, d, 0.0);
    Matrix dr(batch, m, 0.0);
    std::size_t j = 0;
    if (model.factors.use_r) {
        for (std::size_t i = 0; i < batch; ++i)
            for (std::size_t c = 0; c < m; ++c) dr(i, c) = out.score.dz0(i, j + c);
        j += m;
    }
    if (model.factors.use_h) {
        for (std::size_t i = 0; i < batch; ++i)
            for (std::size_t c = 0; c < d; ++c) dh(i, c) = out.score.dz0(i, j + c);
        j += d;
    }
    if (model.factors.use_e && model.first_layer_e_only) {
        for (std::size_t i = 0; i < batch; ++i) de[i] += out.score.dz0(i, j);
    }

    out.ae = ae_backward(fwd, model.ae, &dh, &dr, &de, nullptr);
    return out;
}

double joint_loss_value(const Model& model, const Matrix& x, const std::vector<int>& y,
                        const TrainConfig& cfg) {
    const AeForward fwd = ae_forward(x, model.ae);
    const Matrix z0 = assemble_scorer_input(model, fwd);
    const std::vector<double> scores = score_forward(z0, fwd.e, model.scorer).scores();
    return loss_joint(scores, fwd.e, y, cfg.a0, cfg.lambda, !cfg.no_le_term).terms.l_joint;
}

namespace {

Model build_model(AutoencoderParams encoder, const TrainConfig& cfg, Rng& rng) {
    Model model;
    model.ae = std::move(encoder);
    model.factors = cfg.factors;
    model.first_layer_e_only = cfg.first_layer_e_only;
    model.reconstructed_only = cfg.reconstructed_only;
    const std::size_t width =
        scorer_input_width(model.ae.input_dim(), model.ae.latent_dim(), cfg.factors,
                           cfg.first_layer_e_only, cfg.reconstructed_only);
    const bool inject =
        cfg.factors.use_e && !cfg.first_layer_e_only && !cfg.reconstructed_only;
    model.scorer = ScoreNetParams::make(width, rng, inject, cfg.scorer_hidden);
    return model;
}

}  // namespace

Model train_joint(const Dataset& ds, const WeakLabelSplit& split, AutoencoderParams encoder,
                  const TrainConfig& cfg, Rng& rng, const TrainOptions& options) {
    cfg.validate();

    Model model;
    OptimizerConfig oc;
    oc.kind = cfg.optimizer;
    oc.learning_rate = cfg.lr_stage2;
    OptimizerState opt;
    std::uint64_t start_epoch = 0;
    EarlyStop stop;

    if (options.resume) {
        model = options.resume->model;
        opt = options.resume->opt;
        start_epoch = options.resume->epoch;
        stop.best = options.resume->best_loss;
        stop.plateau = options.resume->plateau;
        rng.set_state(options.resume->rng_state);
    } else {
        encoder.validate();
        model = build_model(std::move(encoder), cfg, rng);
        std::vector<const Matrix*> param_view;
        for (Matrix* p : model.parameters()) param_view.push_back(p);
        opt = OptimizerState::init(param_view, oc);
    }

    std::vector<Matrix*> params = model.parameters();
    BalancedBatchSampler sampler(split, cfg.batch_size, rng);

    for (std::uint64_t epoch = start_epoch; epoch < cfg.stage2_epochs; ++epoch) {
        sampler.start_epoch();
        double loss_sum = 0.0, d_sum = 0.0, e_sum = 0.0;
        std::size_t rows_seen = 0;
        while (sampler.has_next()) {
            const BalancedBatch batch = sampler.next();
            std::vector<std::size_t> idx = batch.unlabeled;
            idx.insert(idx.end(), batch.anomalies.begin(), batch.anomalies.end());
            std::vector<int> y(batch.unlabeled.size(), 0);
            y.resize(idx.size(), 1);  // unlabeled rows carry y=0, anomalies y=1

            const Matrix x = gather_rows(ds.features, idx);
            const JointBatchGrads step = joint_forward_backward(model, x, y, cfg);
            if (!std::isfinite(step.terms.l_joint))
                throw DivergenceError("joint training diverged at epoch " +
                                      std::to_string(epoch));

            std::vector<const Matrix*> grads = step.ae.parameter_order();
            for (const Matrix* g : step.score.parameter_order(model.scorer))
                grads.push_back(g);
            optimizer_step(params, grads, opt);

            const auto rows = static_cast<double>(idx.size());
            loss_sum += step.terms.l_joint * rows;
            d_sum += step.terms.l_d * rows;
            e_sum += step.terms.l_e * rows;
            rows_seen += idx.size();
        }
        const double denom = static_cast<double>(rows_seen);
        const double epoch_loss = loss_sum / denom;
        if (options.log) {
            (*options.log) << "stage=2 epoch=" << epoch << " loss_d=" << d_sum / denom
                           << " loss_e=" << e_sum / denom << " loss_joint=" << epoch_loss
                           << "\n";
        }
        const bool should_stop = stop.update(epoch_loss, cfg);
        if (!options.checkpoint_path.empty()) {
            Checkpoint ck;
            ck.model = model;
            ck.opt = opt;
            ck.epoch = epoch + 1;
            ck.best_loss = stop.best;
            ck.plateau = stop.plateau;
            ck.rng_state = rng.state();
            save_checkpoint(options.checkpoint_path, ck);
        }
        if (should_stop) break;
    }
    return model;
}

Model train_full(const Dataset& ds, const WeakLabelSplit& split, const TrainConfig& cfg,
                 Rng& rng, const TrainOptions& options) {
    cfg.validate();
    AutoencoderParams encoder =
        cfg.no_pretrain
            ? AutoencoderParams::make(ds.dim(), rng, cfg.latent_dim, cfg.encoder_hidden)
            : pretrain(ds, split, cfg, rng, options.log);
    return train_joint(ds, split, std::move(encoder), cfg, rng, options);
}

std::vector<double> predict_scores(const Model& model, const Matrix& features) {
    if (features.cols != model.input_dim())
        throw std::invalid_argument("predict_scores: feature width " +
                                    std::to_string(features.cols) + ", model expects " +
                                    std::to_string(model.input_dim()));
    const AeForward fwd = ae_forward(features, model.ae);
    const Matrix z0 = assemble_scorer_input(model, fwd);
    return score_forward(z0, fwd.e, model.scorer).scores();
}

}  // namespace tfad
