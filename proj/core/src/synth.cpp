#include "tfad/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tfad/rng.hpp"

namespace tfad {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

Dataset make_synthetic_dataset(const SynthConfig& config) {
    if (config.intrinsic_dim >= config.ambient_dim)
        throw std::invalid_argument("synthetic data: intrinsic_dim must be < ambient_dim");
    if (config.n_normal == 0 || config.n_anomalies == 0)
        throw std::invalid_argument("synthetic data: need both normals and anomalies");

    Rng rng(config.seed);
    const std::size_t m = config.ambient_dim;
    const std::size_t k = config.intrinsic_dim;

    // Fixed random embedding t -> 0.5 + 0.45 sin(A t + b).
    Matrix a(m, k);
    for (double& v : a.data) v = rng.uniform(-2.0, 2.0);
    std::vector<double> phase(m);
    for (double& v : phase) v = rng.uniform(0.0, 6.283185307179586);

    auto embed = [&](const std::vector<double>& t, std::vector<double>& x) {
        for (std::size_t j = 0; j < m; ++j) {
            double arg = phase[j];
            for (std::size_t c = 0; c < k; ++c) arg += a(j, c) * t[c];
            x[j] = 0.5 + 0.45 * std::sin(arg) + rng.normal(0.0, config.noise);
        }
    };

    const std::size_t n = config.n_normal + config.n_anomalies;
    Dataset ds;
    ds.features = Matrix(n, m);
    ds.labels.assign(n, 0);
    ds.feature_names.reserve(m);
    for (std::size_t j = 0; j < m; ++j) ds.feature_names.push_back("f" + std::to_string(j));

    std::vector<double> t(k), x(m);
    for (std::size_t i = 0; i < config.n_normal; ++i) {
        for (double& v : t) v = rng.uniform(-1.0, 1.0);
        embed(t, x);
        for (std::size_t j = 0; j < m; ++j) ds.features(i, j) = clamp01(x[j]);
    }

    for (std::size_t i = 0; i < config.n_anomalies; ++i) {
        const std::size_t row = config.n_normal + i;
        ds.labels[row] = 1;
        const int mode = static_cast<int>(i % 3);
        if (mode == 1) {
            // On the extended surface but far outside the normal coordinate box.
            for (double& v : t) {
                const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                v = sign * rng.uniform(1.4, 2.0);
            }
            embed(t, x);
        } else {
            for (double& v : t) v = rng.uniform(-1.0, 1.0);
            embed(t, x);
            if (mode == 0) {
                // Radial push along a random direction.
                std::vector<double> u(m);
                double norm = 0.0;
                for (double& v : u) {
                    v = rng.normal();
                    norm += v * v;
                }
                norm = std::sqrt(norm);
                const double delta = rng.uniform(0.3, 0.6);
                for (std::size_t j = 0; j < m; ++j) x[j] += delta * u[j] / norm;
            } else {
                // Sparse offset: a handful of coordinates jump by +-delta.
                const std::size_t hits = std::max<std::size_t>(3, m / 5);
                for (std::size_t hit = 0; hit < hits; ++hit) {
                    const std::size_t j = rng.uniform_index(m);
                    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                    x[j] += sign * rng.uniform(0.35, 0.65);
                }
            }
        }
        for (std::size_t j = 0; j < m; ++j) ds.features(row, j) = clamp01(x[j]);
    }
    return ds;
}

}  // namespace tfad
