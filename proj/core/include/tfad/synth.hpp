#pragma once

#include <cstdint>

#include "tfad/dataset.hpp"

namespace tfad {

// Bundled benchmark data: normals live on a smooth low-dimensional manifold
// (a sinusoidal embedding of a box in R^intrinsic_dim, squashed into [0,1]^m);
// anomalies deviate in one of three ways, cycling per sample:
//   0: radial offset away from the manifold (large reconstruction distance)
//   1: intrinsic coordinates drawn outside the normal box (unusual latent)
//   2: sparse structured offset on a few coordinates (abnormal residual
//      direction)
// Ground truth holds by construction, so end-to-end checks can run offline.
struct SynthConfig {
    std::size_t n_normal = 5000;
    std::size_t n_anomalies = 250;
    std::size_t ambient_dim = 20;
    std::size_t intrinsic_dim = 3;
    double noise = 0.01;
    std::uint64_t seed = 7;
};

Dataset make_synthetic_dataset(const SynthConfig& config);

}  // namespace tfad
