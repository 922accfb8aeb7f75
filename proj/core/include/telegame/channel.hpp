#pragma once

// The symmetric tripartite channel shared by Alice (a), Bob (b) and Charlie (c):
//
//       | alpha I   delta Z   delta Z |
//   V = | delta Z   beta I    gamma I |
//       | delta Z   gamma I   beta I  |
//
// with beta = (alpha+1)/2, gamma = alpha/2, delta = sqrt((2 alpha-1)(alpha+1))/2.

#include "telegame/gaussian.hpp"

namespace telegame {

inline constexpr double kMinAlpha = 0.5;

struct ChannelParams {
  double alpha;
  double beta;
  double gamma;
  double delta;
};

enum class Receiver { bob, charlie };

namespace channel_mode {
inline constexpr std::size_t alice = 0;
inline constexpr std::size_t bob = 1;
inline constexpr std::size_t charlie = 2;
}  // namespace channel_mode

// Throws DomainError for alpha < 1/2 (or non-finite alpha).
ChannelParams channel_params(double alpha);

GaussianState build_cm(const ChannelParams& params);

// kappa = 1 + alpha + beta - 2 delta, the noise figure of the Alice-receiver link.
double kappa(double alpha);

// True iff swapping modes b and c leaves mean and covariance unchanged (1e-12).
bool exchange_symmetry_check(const GaussianState& state);

// Two-mode state of Alice and the chosen receiver.
GaussianState reduced_channel(const GaussianState& state, Receiver receiver);

}  // namespace telegame
