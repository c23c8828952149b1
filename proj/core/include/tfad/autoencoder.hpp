#pragma once

#include <cstddef>
#include <vector>

#include "tfad/matrix.hpp"
#include "tfad/rng.hpp"

namespace tfad {

enum class Activation { relu, tanh, linear };

double apply_activation(Activation act, double x);
double activation_grad(Activation act, double pre);

struct DenseLayer {
    Matrix weights;  // out x in
    Matrix bias;     // out x 1
    Activation act = Activation::relu;
};

// Below this reconstruction error the residual direction is defined as the
// zero vector and its backward pass contributes no gradient.
inline constexpr double kResidualEpsilon = 1e-12;

// Encoder f_e: R^m -> R^d plus decoder f_d: R^d -> R^m, with the latent space
// strictly narrower than the input (d < m). Hidden layers are ReLU and the
// decoder output is linear so the residual keeps sign freedom.
struct AutoencoderParams {
    std::vector<DenseLayer> encoder;
    std::vector<DenseLayer> decoder;

    std::size_t input_dim() const { return encoder.front().weights.cols; }
    std::size_t latent_dim() const { return encoder.back().weights.rows; }

    // Throws unless layer widths chain, the decoder ends at input_dim, and
    // latent_dim < input_dim.
    void validate() const;

    std::vector<Matrix*> parameters();
    std::vector<const Matrix*> parameters() const;

    // Default shape: m -> ceil(m/2) -> d mirrored, d from default_latent_dim.
    static AutoencoderParams make(std::size_t input_dim, Rng& rng,
                                  std::size_t latent_dim = 0,
                                  const std::vector<std::size_t>& hidden = {});
};

// max(2, min(20, ceil(m/4))), clamped to m-1 so the bottleneck always holds.
std::size_t default_latent_dim(std::size_t input_dim);

// Per-sample three-factor representation.
struct Encoding {
    std::vector<double> h;  // latent code, length d
    std::vector<double> r;  // unit residual direction (or zero), length m
    double e = 0.0;         // reconstruction error, >= 0
};

// Batched forward pass with cached intermediates for the backward pass.
// Rows are samples.
struct AeForward {
    Matrix x;                    // B x m
    std::vector<Matrix> enc_pre; // per encoder layer, B x width
    std::vector<Matrix> enc_out;
    std::vector<Matrix> dec_pre;
    std::vector<Matrix> dec_out;
    Matrix diff;                 // xhat - x
    std::vector<double> e;       // per-row residual norm

    const Matrix& latent() const { return enc_out.back(); }
    const Matrix& xhat() const { return dec_out.back(); }
    Matrix residual_direction() const;  // B x m, rows are r_i
    Encoding encoding_row(std::size_t i) const;
};

AeForward ae_forward(const Matrix& x, const AutoencoderParams& params);

// Gradients in the same order as AutoencoderParams::parameters().
struct AeGrads {
    std::vector<Matrix> encoder_w, encoder_b;
    std::vector<Matrix> decoder_w, decoder_b;

    std::vector<const Matrix*> parameter_order() const;
};

// Backward through the three factors and the autoencoder stack. Any of the
// upstream pieces may be null; dh is B x d, dr is B x m, de has one entry per
// row, dxhat is B x m (direct gradient on the reconstruction, used by the
// pretraining loss). Rows with e <= kResidualEpsilon contribute zero gradient
// through the r and e paths (subgradient choice).
AeGrads ae_backward(const AeForward& fwd, const AutoencoderParams& params, const Matrix* dh,
                    const Matrix* dr, const std::vector<double>* de, const Matrix* dxhat);

// Per-sample operations (thin wrappers over the batched path).
std::vector<double> encode(const std::vector<double>& x, const AutoencoderParams& params);
std::vector<double> reconstruct(const std::vector<double>& h, const AutoencoderParams& params);
Encoding three_factors(const std::vector<double>& x, const AutoencoderParams& params);

// Batched variants.
Matrix encode(const Matrix& x, const AutoencoderParams& params);
Matrix reconstruct(const Matrix& h, const AutoencoderParams& params);

}  // namespace tfad
