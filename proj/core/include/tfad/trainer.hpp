#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tfad/autoencoder.hpp"
#include "tfad/dataset.hpp"
#include "tfad/losses.hpp"
#include "tfad/optimizer.hpp"
#include "tfad/rng.hpp"
#include "tfad/score_net.hpp"

namespace tfad {

// Which of the three factors reach the scorer. When use_e is dropped, the
// per-layer error injection is disabled as well.
struct FactorMask {
    bool use_h = true;
    bool use_r = true;
    bool use_e = true;

    bool any() const { return use_h || use_r || use_e; }
    std::string to_string() const;
    static FactorMask parse(const std::string& text);  // e.g. "h,r,e" or "e"
};

struct TrainConfig {
    double a0 = 5.0;
    double lambda = 1.0;
    std::size_t batch_size = 256;  // must be even; split in half by the sampler
    std::size_t stage1_epochs = 100;
    std::size_t stage2_epochs = 200;
    double lr_stage1 = 1e-3;
    double lr_stage2 = 1e-3;
    std::size_t patience = 10;        // plateau epochs before early stop
    double min_improvement = 1e-5;    // on the epoch-mean loss
    OptimizerKind optimizer = OptimizerKind::adam;
    std::uint64_t seed = 1;

    FactorMask factors;
    bool no_pretrain = false;
    bool no_le_term = false;
    bool first_layer_e_only = false;
    bool reconstructed_only = false;  // scorer consumes xhat; plain MLP head

    // Architecture overrides; 0 / empty select the data-derived defaults.
    std::size_t latent_dim = 0;
    std::vector<std::size_t> encoder_hidden;
    std::vector<std::size_t> scorer_hidden = {64, 32};

    void validate() const;
};

// Trained detector: encoder plus scorer plus the wiring between them.
struct Model {
    AutoencoderParams ae;
    ScoreNetParams scorer;
    FactorMask factors;
    bool first_layer_e_only = false;
    bool reconstructed_only = false;

    std::size_t input_dim() const { return ae.input_dim(); }
    std::vector<Matrix*> parameters();
};

// Scorer input width for a given wiring; used both to build and to check nets.
std::size_t scorer_input_width(std::size_t m, std::size_t d, const FactorMask& mask,
                               bool first_layer_e_only, bool reconstructed_only);

// Assemble the scorer input rows from a forward pass: [r | h | e?] under the
// factor mask, or xhat for the reconstructed-only variant.
Matrix assemble_scorer_input(const Model& model, const AeForward& fwd);

// Exactly batch_size/2 unlabeled indices (treated as y=0) plus the same
// number of labeled anomalies (y=1, drawn with replacement).
struct BalancedBatch {
    std::vector<std::size_t> unlabeled;
    std::vector<std::size_t> anomalies;
};

// Epoch-wise sampler: unlabeled indices are consumed without replacement from
// a per-epoch shuffle (one epoch = one pass over the unlabeled pool in
// half-batches; a short tail keeps the exact half/half composition at a
// smaller size), anomalies are drawn uniformly with replacement.
class BalancedBatchSampler {
  public:
    BalancedBatchSampler(const WeakLabelSplit& split, std::size_t batch_size, Rng& rng);

    bool has_next() const { return cursor_ < order_.size(); }
    BalancedBatch next();
    void start_epoch();  // reshuffle and rewind

  private:
    const WeakLabelSplit& split_;
    std::size_t half_;
    Rng& rng_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
};

// One-shot draw with the same contract (fresh shuffle each call).
BalancedBatch sample_balanced_batch(const WeakLabelSplit& split, std::size_t batch_size,
                                    Rng& rng);

// Stage 1: reconstruction-only pretraining on the unlabeled pool. With
// stage1_epochs == 0 the freshly initialized parameters are returned as-is.
// Throws DivergenceError (with the epoch) on a non-finite loss.
AutoencoderParams pretrain(const Dataset& ds, const WeakLabelSplit& split,
                           const TrainConfig& cfg, Rng& rng, std::ostream* log = nullptr);

// Stage-2 checkpoint: everything needed to resume bit-exactly.
struct Checkpoint {
    Model model;
    OptimizerState opt;
    std::uint64_t epoch = 0;
    double best_loss = 0.0;
    std::uint32_t plateau = 0;
    std::uint64_t rng_state = 0;
};

struct TrainOptions {
    std::ostream* log = nullptr;
    std::string checkpoint_path;         // written after every stage-2 epoch when set
    const Checkpoint* resume = nullptr;  // continue from here (encoder arg ignored)
};

// Stage 2: joint optimization on balanced mini-batches, starting from the
// pretrained encoder (or a fresh one under no_pretrain, handled by the
// caller passing a fresh init).
Model train_joint(const Dataset& ds, const WeakLabelSplit& split, AutoencoderParams encoder,
                  const TrainConfig& cfg, Rng& rng, const TrainOptions& options = {});

// Stage 1 (skipped under no_pretrain, where the encoder stays at its random
// init) followed by stage 2.
Model train_full(const Dataset& ds, const WeakLabelSplit& split, const TrainConfig& cfg,
                 Rng& rng, const TrainOptions& options = {});

// One batch of the joint objective: loss terms plus analytic gradients for
// every live parameter, in the order of Model::parameters().
struct JointBatchGrads {
    LossTerms terms;
    AeGrads ae;
    ScoreGrads score;
};

JointBatchGrads joint_forward_backward(const Model& model, const Matrix& x,
                                       const std::vector<int>& y, const TrainConfig& cfg);
double joint_loss_value(const Model& model, const Matrix& x, const std::vector<int>& y,
                        const TrainConfig& cfg);

// Deterministic batch scoring; higher means more anomalous.
std::vector<double> predict_scores(const Model& model, const Matrix& features);

void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);
void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace tfad
