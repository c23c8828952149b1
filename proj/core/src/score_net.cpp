#include "tfad/score_net.hpp"

#include <stdexcept>
#include <string>

namespace tfad {

void ScoreNetParams::validate() const {
    if (layers.empty()) throw std::invalid_argument("score net: empty layer stack");
    std::size_t w = layers.front().weights.cols;
    for (const auto& l : layers) {
        if (l.weights.cols != w)
            throw std::invalid_argument("score net: layer input width " +
                                        std::to_string(l.weights.cols) + ", expected " +
                                        std::to_string(w));
        if (l.bias.rows != l.weights.rows || l.bias.cols != 1)
            throw std::invalid_argument("score net: bias shape mismatch");
        if (inject_e) {
            if (l.e_weight.rows != l.weights.rows || l.e_weight.cols != 1)
                throw std::invalid_argument("score net: e_weight shape mismatch");
        } else if (l.e_weight.size() != 0) {
            throw std::invalid_argument("score net: e_weight present with injection disabled");
        }
        w = l.weights.rows;
    }
    if (w != 1) throw std::invalid_argument("score net: final layer must output a scalar");
}

std::vector<Matrix*> ScoreNetParams::parameters() {
    std::vector<Matrix*> out;
    for (auto& l : layers) {
        out.push_back(&l.weights);
        out.push_back(&l.bias);
        if (inject_e) out.push_back(&l.e_weight);
    }
    return out;
}

std::vector<const Matrix*> ScoreNetParams::parameters() const {
    std::vector<const Matrix*> out;
    for (const auto& l : layers) {
        out.push_back(&l.weights);
        out.push_back(&l.bias);
        if (inject_e) out.push_back(&l.e_weight);
    }
    return out;
}

ScoreNetParams ScoreNetParams::make(std::size_t input_width, Rng& rng, bool inject,
                                    const std::vector<std::size_t>& hidden) {
    ScoreNetParams p;
    p.inject_e = inject;
    std::size_t w = input_width;
    auto push = [&](std::size_t out_w, Activation act) {
        ScoreLayer l;
        l.weights = (w == 0) ? Matrix(out_w, 0) : init_glorot(out_w, w, rng);
        l.bias = Matrix(out_w, 1, 0.0);
        if (inject) l.e_weight = init_glorot(out_w, 1, rng);
        l.act = act;
        p.layers.push_back(std::move(l));
        w = out_w;
    };
    for (std::size_t hdim : hidden) push(hdim, Activation::relu);
    push(1, Activation::linear);
    p.validate();
    return p;
}

std::vector<double> ScoreForward::scores() const {
    const Matrix& last = out.back();
    std::vector<double> s(last.rows);
    for (std::size_t i = 0; i < last.rows; ++i) s[i] = last(i, 0);
    return s;
}

ScoreForward score_forward(const Matrix& z0, const std::vector<double>& e,
                           const ScoreNetParams& params) {
    if (z0.cols != params.input_dim())
        throw std::invalid_argument("score_forward: input width " + std::to_string(z0.cols) +
                                    ", net expects " + std::to_string(params.input_dim()));
    if (params.inject_e && e.size() != z0.rows)
        throw std::invalid_argument("score_forward: need one error value per row");

    ScoreForward f;
    f.z0 = z0;
    if (params.inject_e) f.e = e;
    const Matrix* cur = &f.z0;
    for (const auto& layer : params.layers) {
        Matrix pre = matmul(*cur, transpose(layer.weights));
        for (std::size_t i = 0; i < pre.rows; ++i) {
            for (std::size_t j = 0; j < pre.cols; ++j) {
                pre(i, j) += layer.bias(j, 0);
                if (params.inject_e) pre(i, j) += layer.e_weight(j, 0) * e[i];
            }
        }
        Matrix out = pre;
        for (double& v : out.data) v = apply_activation(layer.act, v);
        f.pre.push_back(std::move(pre));
        f.out.push_back(std::move(out));
        cur = &f.out.back();
    }
    return f;
}

std::vector<const Matrix*> ScoreGrads::parameter_order(const ScoreNetParams& params) const {
    std::vector<const Matrix*> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        out.push_back(&w[i]);
        out.push_back(&b[i]);
        if (params.inject_e) out.push_back(&e_w[i]);
    }
    return out;
}

ScoreGrads score_backward(const ScoreForward& fwd, const ScoreNetParams& params,
                          const std::vector<double>& dscores) {
    const std::size_t batch = fwd.z0.rows;
    if (dscores.size() != batch)
        throw std::invalid_argument("score_backward: need one upstream gradient per row");

    ScoreGrads g;
    const std::size_t n_layers = params.layers.size();
    g.w.resize(n_layers);
    g.b.resize(n_layers);
    g.e_w.resize(n_layers);
    g.de.assign(batch, 0.0);

    Matrix upstream(batch, 1);
    for (std::size_t i = 0; i < batch; ++i) upstream(i, 0) = dscores[i];

    for (std::size_t li = n_layers; li-- > 0;) {
        const auto& layer = params.layers[li];
        const Matrix& in = (li == 0) ? fwd.z0 : fwd.out[li - 1];
        Matrix dpre = upstream;
        for (std::size_t i = 0; i < dpre.rows; ++i)
            for (std::size_t j = 0; j < dpre.cols; ++j)
                dpre(i, j) *= activation_grad(layer.act, fwd.pre[li](i, j));

        g.w[li] = matmul(transpose(dpre), in);
        g.b[li] = Matrix(layer.bias.rows, 1, 0.0);
        for (std::size_t i = 0; i < dpre.rows; ++i)
            for (std::size_t j = 0; j < dpre.cols; ++j) g.b[li](j, 0) += dpre(i, j);

        if (params.inject_e) {
            // The injected scalar acts like a second bias scaled by e, so its
            // weight gradient is the e-weighted column sum, and every layer
            // contributes w_e . dpre to the gradient on e itself.
            g.e_w[li] = Matrix(layer.e_weight.rows, 1, 0.0);
            for (std::size_t i = 0; i < dpre.rows; ++i) {
                double dot = 0.0;
                for (std::size_t j = 0; j < dpre.cols; ++j) {
                    g.e_w[li](j, 0) += dpre(i, j) * fwd.e[i];
                    dot += dpre(i, j) * layer.e_weight(j, 0);
                }
                g.de[i] += dot;
            }
        }
        upstream = matmul(dpre, layer.weights);
    }
    g.dz0 = std::move(upstream);
    return g;
}

namespace {

Matrix concat_row(const Encoding& enc, bool with_e) {
    Matrix z(1, enc.r.size() + enc.h.size() + (with_e ? 1 : 0));
    std::size_t j = 0;
    for (double v : enc.r) z(0, j++) = v;
    for (double v : enc.h) z(0, j++) = v;
    if (with_e) z(0, j) = enc.e;
    return z;
}

}  // namespace

double score(const Encoding& enc, const ScoreNetParams& params) {
    const Matrix z0 = concat_row(enc, false);
    return score_forward(z0, {enc.e}, params).scores()[0];
}

double score_first_layer_only(const Encoding& enc, const ScoreNetParams& params) {
    if (params.inject_e)
        throw std::invalid_argument(
            "score_first_layer_only: params were built with per-layer injection");
    const Matrix z0 = concat_row(enc, true);
    return score_forward(z0, {}, params).scores()[0];
}

}  // namespace tfad
