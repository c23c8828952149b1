#include "tfad/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tfad {

namespace {

// out = act(in * W^T + b), caching the pre-activation.
void layer_forward(const Matrix& in, const DenseLayer& layer, Matrix& pre, Matrix& out) {
    pre = matmul(in, transpose(layer.weights));
    for (std::size_t i = 0; i < pre.rows; ++i)
        for (std::size_t j = 0; j < pre.cols; ++j) pre(i, j) += layer.bias(j, 0);
    out = pre;
    for (double& v : out.data) v = apply_activation(layer.act, v);
}

// Standard dense backward: returns gradient w.r.t. the layer input and fills
// dW (out x in) and db (out x 1).
Matrix layer_backward(const Matrix& in, const Matrix& pre, const DenseLayer& layer,
                      const Matrix& dout, Matrix& dw, Matrix& db) {
    Matrix dpre = dout;
    for (std::size_t i = 0; i < dpre.rows; ++i)
        for (std::size_t j = 0; j < dpre.cols; ++j)
            dpre(i, j) *= activation_grad(layer.act, pre(i, j));
    dw = matmul(transpose(dpre), in);
    db = Matrix(layer.bias.rows, 1, 0.0);
    for (std::size_t i = 0; i < dpre.rows; ++i)
        for (std::size_t j = 0; j < dpre.cols; ++j) db(j, 0) += dpre(i, j);
    return matmul(dpre, layer.weights);
}

void check_width(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw std::invalid_argument(std::string(what) + ": expected width " +
                                    std::to_string(want) + ", got " + std::to_string(got));
}

}  // namespace

double apply_activation(Activation act, double x) {
    switch (act) {
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::tanh: return std::tanh(x);
        case Activation::linear: return x;
    }
    return x;
}

double activation_grad(Activation act, double pre) {
    switch (act) {
        case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
        case Activation::tanh: {
            const double t = std::tanh(pre);
            return 1.0 - t * t;
        }
        case Activation::linear: return 1.0;
    }
    return 1.0;
}

std::size_t default_latent_dim(std::size_t input_dim) {
    if (input_dim < 2)
        throw std::invalid_argument("default_latent_dim: need at least 2 input features");
    std::size_t d = (input_dim + 3) / 4;  // ceil(m/4)
    d = std::max<std::size_t>(2, std::min<std::size_t>(20, d));
    return std::min(d, input_dim - 1);
}

void AutoencoderParams::validate() const {
    if (encoder.empty() || decoder.empty())
        throw std::invalid_argument("autoencoder: empty layer stack");
    const std::size_t m = encoder.front().weights.cols;
    std::size_t w = m;
    for (const auto& l : encoder) {
        check_width(l.weights.cols, w, "autoencoder: encoder layer input");
        if (l.bias.rows != l.weights.rows || l.bias.cols != 1)
            throw std::invalid_argument("autoencoder: bias shape mismatch");
        w = l.weights.rows;
    }
    const std::size_t d = w;
    for (const auto& l : decoder) {
        check_width(l.weights.cols, w, "autoencoder: decoder layer input");
        if (l.bias.rows != l.weights.rows || l.bias.cols != 1)
            throw std::invalid_argument("autoencoder: bias shape mismatch");
        w = l.weights.rows;
    }
    if (w != m) throw std::invalid_argument("autoencoder: decoder must end at the input width");
    if (d >= m)
        throw std::invalid_argument("autoencoder: latent dim " + std::to_string(d) +
                                    " must be strictly smaller than input dim " +
                                    std::to_string(m));
}

std::vector<Matrix*> AutoencoderParams::parameters() {
    std::vector<Matrix*> out;
    for (auto& l : encoder) {
        out.push_back(&l.weights);
        out.push_back(&l.bias);
    }
    for (auto& l : decoder) {
        out.push_back(&l.weights);
        out.push_back(&l.bias);
    }
    return out;
}

std::vector<const Matrix*> AutoencoderParams::parameters() const {
    std::vector<const Matrix*> out;
    for (const auto& l : encoder) {
        out.push_back(&l.weights);
        out.push_back(&l.bias);
    }
    for (const auto& l : decoder) {
        out.push_back(&l.weights);
        out.push_back(&l.bias);
    }
    return out;
}

AutoencoderParams AutoencoderParams::make(std::size_t input_dim, Rng& rng,
                                          std::size_t latent_dim,
                                          const std::vector<std::size_t>& hidden) {
    if (input_dim < 2)
        throw std::invalid_argument("autoencoder: need at least 2 input features");
    const std::size_t d = latent_dim == 0 ? default_latent_dim(input_dim) : latent_dim;
    std::vector<std::size_t> mids = hidden;
    if (mids.empty()) mids = {(input_dim + 1) / 2};

    AutoencoderParams p;
    std::size_t w = input_dim;
    for (std::size_t h : mids) {
        p.encoder.push_back({init_glorot(h, w, rng), Matrix(h, 1, 0.0), Activation::relu});
        w = h;
    }
    p.encoder.push_back({init_glorot(d, w, rng), Matrix(d, 1, 0.0), Activation::relu});

    w = d;
    for (auto it = mids.rbegin(); it != mids.rend(); ++it) {
        p.decoder.push_back({init_glorot(*it, w, rng), Matrix(*it, 1, 0.0), Activation::relu});
        w = *it;
    }
    p.decoder.push_back(
        {init_glorot(input_dim, w, rng), Matrix(input_dim, 1, 0.0), Activation::linear});
    p.validate();
    return p;
}

Matrix AeForward::residual_direction() const {
    Matrix r = diff;
    for (std::size_t i = 0; i < r.rows; ++i) {
        if (e[i] > kResidualEpsilon) {
            const double inv = 1.0 / e[i];
            for (std::size_t j = 0; j < r.cols; ++j) r(i, j) *= inv;
        } else {
            for (std::size_t j = 0; j < r.cols; ++j) r(i, j) = 0.0;
        }
    }
    return r;
}

Encoding AeForward::encoding_row(std::size_t i) const {
    Encoding enc;
    enc.h = latent().row_as_vector(i);
    enc.e = e[i];
    enc.r.resize(diff.cols, 0.0);
    if (enc.e > kResidualEpsilon)
        for (std::size_t j = 0; j < diff.cols; ++j) enc.r[j] = diff(i, j) / enc.e;
    return enc;
}

AeForward ae_forward(const Matrix& x, const AutoencoderParams& params) {
    check_width(x.cols, params.input_dim(), "ae_forward input");
    AeForward f;
    f.x = x;
    const Matrix* cur = &f.x;
    for (const auto& layer : params.encoder) {
        Matrix pre, out;
        layer_forward(*cur, layer, pre, out);
        f.enc_pre.push_back(std::move(pre));
        f.enc_out.push_back(std::move(out));
        cur = &f.enc_out.back();
    }
    for (const auto& layer : params.decoder) {
        Matrix pre, out;
        layer_forward(*cur, layer, pre, out);
        f.dec_pre.push_back(std::move(pre));
        f.dec_out.push_back(std::move(out));
        cur = &f.dec_out.back();
    }
    f.diff = sub(f.xhat(), f.x);
    f.e.resize(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        double ss = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) ss += f.diff(i, j) * f.diff(i, j);
        f.e[i] = std::sqrt(ss);
    }
    return f;
}

std::vector<const Matrix*> AeGrads::parameter_order() const {
    std::vector<const Matrix*> out;
    for (std::size_t i = 0; i < encoder_w.size(); ++i) {
        out.push_back(&encoder_w[i]);
        out.push_back(&encoder_b[i]);
    }
    for (std::size_t i = 0; i < decoder_w.size(); ++i) {
        out.push_back(&decoder_w[i]);
        out.push_back(&decoder_b[i]);
    }
    return out;
}

AeGrads ae_backward(const AeForward& fwd, const AutoencoderParams& params, const Matrix* dh,
                    const Matrix* dr, const std::vector<double>* de, const Matrix* dxhat) {
    const std::size_t batch = fwd.x.rows;
    const std::size_t m = fwd.x.cols;

    // Accumulate the gradient on xhat from the direct path and through the
    // two derived factors. For e: de/dxhat = diff / e = r. For r the quotient
    // rule gives ddiff = (dr - r (r . dr)) / e.
    Matrix dxh(batch, m, 0.0);
    if (dxhat) {
        if (!dxhat->same_shape(dxh))
            throw std::invalid_argument("ae_backward: dxhat shape mismatch");
        dxh = *dxhat;
    }
    if (de || dr) {
        for (std::size_t i = 0; i < batch; ++i) {
            if (fwd.e[i] <= kResidualEpsilon) continue;  // zero subgradient branch
            const double inv_e = 1.0 / fwd.e[i];
            if (de) {
                const double g = (*de)[i];
                if (g != 0.0)
                    for (std::size_t j = 0; j < m; ++j)
                        dxh(i, j) += g * fwd.diff(i, j) * inv_e;
            }
            if (dr) {
                double dot = 0.0;  // r . dr, with r = diff * inv_e
                for (std::size_t j = 0; j < m; ++j)
                    dot += fwd.diff(i, j) * inv_e * (*dr)(i, j);
                for (std::size_t j = 0; j < m; ++j) {
                    const double r_j = fwd.diff(i, j) * inv_e;
                    dxh(i, j) += ((*dr)(i, j) - r_j * dot) * inv_e;
                }
            }
        }
    }

    AeGrads g;
    g.encoder_w.resize(params.encoder.size());
    g.encoder_b.resize(params.encoder.size());
    g.decoder_w.resize(params.decoder.size());
    g.decoder_b.resize(params.decoder.size());

    // Decoder stack, from the output back to the latent.
    Matrix upstream = std::move(dxh);
    for (std::size_t li = params.decoder.size(); li-- > 0;) {
        const Matrix& in = (li == 0) ? fwd.latent() : fwd.dec_out[li - 1];
        upstream = layer_backward(in, fwd.dec_pre[li], params.decoder[li], upstream,
                                  g.decoder_w[li], g.decoder_b[li]);
    }

    // upstream is now the decoder's contribution to dL/dh; add the direct path.
    if (dh) {
        if (!dh->same_shape(upstream))
            throw std::invalid_argument("ae_backward: dh shape mismatch");
        add_inplace(upstream, *dh);
    }

    for (std::size_t li = params.encoder.size(); li-- > 0;) {
        const Matrix& in = (li == 0) ? fwd.x : fwd.enc_out[li - 1];
        upstream = layer_backward(in, fwd.enc_pre[li], params.encoder[li], upstream,
                                  g.encoder_w[li], g.encoder_b[li]);
    }
    return g;
}

std::vector<double> encode(const std::vector<double>& x, const AutoencoderParams& params) {
    Matrix xb = Matrix::row_vector(x);
    return encode(xb, params).row_as_vector(0);
}

Matrix encode(const Matrix& x, const AutoencoderParams& params) {
    check_width(x.cols, params.input_dim(), "encode input");
    Matrix cur = x;
    for (const auto& layer : params.encoder) {
        Matrix pre, out;
        layer_forward(cur, layer, pre, out);
        cur = std::move(out);
    }
    return cur;
}

std::vector<double> reconstruct(const std::vector<double>& h, const AutoencoderParams& params) {
    Matrix hb = Matrix::row_vector(h);
    return reconstruct(hb, params).row_as_vector(0);
}

Matrix reconstruct(const Matrix& h, const AutoencoderParams& params) {
    check_width(h.cols, params.latent_dim(), "reconstruct input");
    Matrix cur = h;
    for (const auto& layer : params.decoder) {
        Matrix pre, out;
        layer_forward(cur, layer, pre, out);
        cur = std::move(out);
    }
    return cur;
}

Encoding three_factors(const std::vector<double>& x, const AutoencoderParams& params) {
    const AeForward f = ae_forward(Matrix::row_vector(x), params);
    return f.encoding_row(0);
}

}  // namespace tfad
