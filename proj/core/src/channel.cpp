#include "telegame/channel.hpp"

#include "telegame/error.hpp"

#include <cmath>
#include <string>

namespace telegame {

namespace {

void require_three_modes(const GaussianState& state, const char* what) {
  if (state.modes() != 3) {
    throw InvalidInput(std::string(what) + ": expected a 3-mode channel state, got " +
                       std::to_string(state.modes()) + " modes");
  }
}

}  // namespace

ChannelParams channel_params(double alpha) {
  if (!std::isfinite(alpha) || alpha < kMinAlpha) {
    throw DomainError("channel parameter alpha must satisfy alpha >= 1/2 (got " +
                      std::to_string(alpha) + ")");
  }
  return {alpha, 0.5 * (alpha + 1.0), 0.5 * alpha,
          0.5 * std::sqrt((2.0 * alpha - 1.0) * (alpha + 1.0))};
}

GaussianState build_cm(const ChannelParams& p) {
  const Matrix2 id = Matrix2::Identity();
  const Matrix2 z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  Matrix v(6, 6);
  v << p.alpha * id, p.delta * z, p.delta * z,
       p.delta * z, p.beta * id, p.gamma * id,
       p.delta * z, p.gamma * id, p.beta * id;
  return GaussianState(Vector::Zero(6), CovarianceMatrix(std::move(v)));
}

double kappa(double alpha) {
  const ChannelParams p = channel_params(alpha);
  return 1.0 + p.alpha + p.beta - 2.0 * p.delta;
}

bool exchange_symmetry_check(const GaussianState& state) {
  require_three_modes(state, "exchange_symmetry_check");
  Matrix swap = Matrix::Zero(6, 6);
  swap.block<2, 2>(0, 0).setIdentity();
  swap.block<2, 2>(2, 4).setIdentity();
  swap.block<2, 2>(4, 2).setIdentity();
  constexpr double tol = 1e-12;
  const Matrix& v = state.cov().matrix();
  const bool cov_ok = (swap * v * swap.transpose() - v).cwiseAbs().maxCoeff() <= tol;
  const bool mean_ok = (swap * state.mean() - state.mean()).cwiseAbs().maxCoeff() <= tol;
  return cov_ok && mean_ok;
}

GaussianState reduced_channel(const GaussianState& state, Receiver receiver) {
  require_three_modes(state, "reduced_channel");
  const std::size_t kept =
      receiver == Receiver::bob ? channel_mode::bob : channel_mode::charlie;
  return partial_trace(state, {channel_mode::alice, kept});
}

}  // namespace telegame
