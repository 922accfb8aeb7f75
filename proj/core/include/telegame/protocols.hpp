#pragma once

// The two receiver strategies of the teleportation game.
//
// Each strategy is available as a closed form in alpha and as a Gaussian
// pipeline that replays the protocol on an explicit state:
//
//   |phi> (x) rho_abc --BS(a,in)--> homodyne x on a, p on in  -> eta = -X_- + i P_+
//
// Non-cooperative: Bob and Charlie both displace by eta.
// Cooperative: the measuring receiver displaces by eta, heterodynes (outcome
// mu) and reconstructs |mu>; the other receiver displaces by the modified
// shift eta' = eta + (delta - gamma)/(beta + 1/2) * (mu - eta).
//
// A single trajectory's fidelity depends on the outcomes through the
// conditional mean. The closed forms are the fidelities averaged over the
// outcome distribution; `average_*_fidelities` computes that average exactly.

#include "telegame/channel.hpp"
#include "telegame/gaussian.hpp"

namespace telegame {

// Mode layout of the joint state |phi> (x) rho_abc.
namespace joint_mode {
inline constexpr std::size_t input = 0;
inline constexpr std::size_t alice = 1;
inline constexpr std::size_t bob = 2;
inline constexpr std::size_t charlie = 3;
}  // namespace joint_mode

struct StrategyOutcome {
  double fidelity_bob = 0.0;
  double fidelity_charlie = 0.0;
  Matrix2 conditional_cov_bob = Matrix2::Zero();
  Matrix2 conditional_cov_charlie = Matrix2::Zero();
  // Output mean minus the input coherent mean, in quadrature units.
  Vector2 mean_residual_bob = Vector2::Zero();
  Vector2 mean_residual_charlie = Vector2::Zero();
};

struct AveragedFidelities {
  double bob = 0.0;
  double charlie = 0.0;
};

using ShiftRule = ComplexAmplitude (*)(ComplexAmplitude eta, ComplexAmplitude mu,
                                       const ChannelParams& params);

double f_noncoop(double alpha);
double f_ac_coop(double alpha);
double f_ab_coop(double alpha);
double f_coop_avg(double alpha);

// Fidelity when the receivers swap the measuring role every other round.
double alternation_fidelity(double alpha);

// Unit-gain teleportation fidelity det(Gamma)^(-1/2) through a two-mode
// channel [[A, C], [C^T, B]] (A: sender, B: receiver), with
// Gamma = I + Z A Z + B - Z C - C^T Z. Throws DomainError if unphysical.
double two_mode_teleport_fidelity(const Matrix2& a, const Matrix2& b, const Matrix2& c);

ComplexAmplitude modified_shift(ComplexAmplitude eta, ComplexAmplitude mu,
                                const ChannelParams& params);

// Strategy pipelines for one channel. The channel state is built and
// validated once; each call replays the protocol for a given input and set
// of measurement outcomes.
class GamePipeline {
 public:
  // Throws DomainError for alpha < 1/2.
  explicit GamePipeline(double alpha);

  const ChannelParams& params() const { return params_; }
  const GaussianState& channel() const { return channel_; }

  // |phi> (x) rho_abc after the balanced beam splitter on (alice, input).
  GaussianState bell_input_state(ComplexAmplitude input_amp) const;

  // Law of mu for the measuring receiver after it has displaced by eta.
  OutcomeDistribution cooperative_heterodyne_distribution(
      ComplexAmplitude input_amp, ComplexAmplitude eta, Receiver measurer = Receiver::charlie) const;

  StrategyOutcome noncoop(ComplexAmplitude input_amp, ComplexAmplitude bell_outcome) const;

  StrategyOutcome coop(ComplexAmplitude input_amp, ComplexAmplitude bell_outcome,
                       ComplexAmplitude het_outcome, Receiver measurer = Receiver::charlie,
                       ShiftRule shift = modified_shift) const;

  // Pipeline fidelities averaged exactly over the Bell outcome distribution.
  AveragedFidelities average_noncoop(ComplexAmplitude input_amp) const;

  // Pipeline fidelities averaged exactly over the joint (eta, mu) distribution.
  AveragedFidelities average_coop(ComplexAmplitude input_amp,
                                  Receiver measurer = Receiver::charlie,
                                  ShiftRule shift = modified_shift) const;

 private:
  GaussianState ready_for_heterodyne(ComplexAmplitude input_amp, ComplexAmplitude eta,
                                     Receiver measurer) const;

  ChannelParams params_;
  GaussianState channel_;
};

// Law of eta for a post-beam-splitter joint state (covariance in eta units).
OutcomeDistribution bell_outcome_distribution(const GaussianState& post_beam_splitter);

// Two-mode (bob, charlie) state conditioned on the Bell result, before any
// displacement.
GaussianState condition_on_bell(const GaussianState& post_beam_splitter, ComplexAmplitude eta);

// One-shot conveniences over GamePipeline.
GaussianState bell_input_state(double alpha, ComplexAmplitude input_amp);

OutcomeDistribution cooperative_heterodyne_distribution(double alpha, ComplexAmplitude input_amp,
                                                        ComplexAmplitude eta,
                                                        Receiver measurer = Receiver::charlie);

StrategyOutcome run_noncoop_pipeline(double alpha, ComplexAmplitude input_amp,
                                     ComplexAmplitude bell_outcome);

StrategyOutcome run_coop_pipeline(double alpha, ComplexAmplitude input_amp,
                                  ComplexAmplitude bell_outcome, ComplexAmplitude het_outcome,
                                  Receiver measurer = Receiver::charlie,
                                  ShiftRule shift = modified_shift);

AveragedFidelities average_noncoop_fidelities(double alpha, ComplexAmplitude input_amp);

AveragedFidelities average_coop_fidelities(double alpha, ComplexAmplitude input_amp,
                                           Receiver measurer = Receiver::charlie,
                                           ShiftRule shift = modified_shift);

}  // namespace telegame
