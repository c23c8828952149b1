#pragma once

#include <cstddef>
#include <vector>

#include "tfad/autoencoder.hpp"
#include "tfad/matrix.hpp"
#include "tfad/rng.hpp"

namespace tfad {

// One scorer layer: z_k = f(W z_{k-1} + b + w_e * e). The per-unit injection
// vector w_e is empty when the reconstruction error is not fed to this net.
struct ScoreLayer {
    Matrix weights;   // out x in
    Matrix bias;      // out x 1
    Matrix e_weight;  // out x 1, or 0x0 when injection is disabled
    Activation act = Activation::relu;
};

// MLP head producing the scalar anomaly score. The output layer is linear
// (and, like every layer, receives the e injection when enabled) so the
// margin loss can push scores past a0.
struct ScoreNetParams {
    std::vector<ScoreLayer> layers;
    bool inject_e = true;

    std::size_t input_dim() const { return layers.front().weights.cols; }
    std::size_t output_dim() const { return layers.back().weights.rows; }

    void validate() const;
    std::vector<Matrix*> parameters();
    std::vector<const Matrix*> parameters() const;

    // hidden defaults to {64, 32}; a zero input width is allowed (the scorer
    // then sees only the injected error signal).
    static ScoreNetParams make(std::size_t input_width, Rng& rng, bool inject,
                               const std::vector<std::size_t>& hidden = {64, 32});
};

struct ScoreForward {
    Matrix z0;                    // B x input_dim
    std::vector<double> e;        // injected errors (empty when unused)
    std::vector<Matrix> pre, out; // per layer

    std::vector<double> scores() const;  // final column
};

ScoreForward score_forward(const Matrix& z0, const std::vector<double>& e,
                           const ScoreNetParams& params);

struct ScoreGrads {
    std::vector<Matrix> w, b, e_w;  // e_w entries empty when injection is off
    Matrix dz0;                     // B x input_dim
    std::vector<double> de;         // per-row gradient on the injected error

    std::vector<const Matrix*> parameter_order(const ScoreNetParams& params) const;
};

ScoreGrads score_backward(const ScoreForward& fwd, const ScoreNetParams& params,
                          const std::vector<double>& dscores);

// Spec surface for a single sample. score() consumes z0 = [r, h] with the
// error injected into every layer; the first-layer variant consumes
// z0 = [r, h, e] with no per-layer injection.
double score(const Encoding& enc, const ScoreNetParams& params);
double score_first_layer_only(const Encoding& enc, const ScoreNetParams& params);

}  // namespace tfad
