#pragma once

// Stochastic replay of the game. Each shot draws an input amplitude, a Bell
// result and a heterodyne result from their exact Gaussian laws, runs both
// strategy pipelines on that trajectory and records the receivers' fidelities.
//
// Every shot owns an RNG stream derived from (seed, shot index), and partial
// sums are merged in fixed chunk order, so estimates are bit-identical for any
// thread count.

#include "telegame/gaussian.hpp"

#include <cstddef>
#include <cstdint>
#include <random>

namespace telegame {

using Rng = std::mt19937_64;

struct McConfig {
  std::size_t shots = 100000;
  std::uint64_t seed = 0;
  double alpha = 2.0;
  // Per-component std of the random input amplitude; 0 means vacuum input.
  double input_ensemble_std = 1.0;
};

struct McEstimate {
  double f_tr_hat = 0.0;
  double f_ab_hat = 0.0;
  double f_ac_hat = 0.0;
  double stderr_tr = 0.0;
  double stderr_ab = 0.0;
  double stderr_ac = 0.0;
  std::size_t shots = 0;
  // max - min of the per-shot samples.
  double spread_tr = 0.0;
  double spread_ab = 0.0;
  double spread_ac = 0.0;

  friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

inline constexpr std::size_t kShotsPerChunk = 1024;

Rng shot_rng(std::uint64_t seed, std::uint64_t shot);

// Draws from N(mean, cov); cov must be positive semidefinite.
Vector sample_gaussian(const Vector& mean, const Matrix& cov, Rng& rng);

// eta = (-X_-, P_+) for a post-beam-splitter joint state.
ComplexAmplitude sample_bell_outcome(const GaussianState& post_beam_splitter, Rng& rng);

ComplexAmplitude sample_heterodyne_outcome(const GaussianState& state, std::size_t mode, Rng& rng);

// Throws InvalidInput for shots == 0, negative or non-finite ensemble std, and
// DomainError for alpha < 1/2. threads == 0 uses the hardware concurrency.
McEstimate estimate_fidelities(const McConfig& config, unsigned threads = 1);

}  // namespace telegame
