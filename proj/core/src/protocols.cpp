#include "telegame/protocols.hpp"

#include "telegame/error.hpp"

#include <array>

namespace telegame {

namespace {

using SensitivityMatrix = Eigen::Matrix<double, 2, Eigen::Dynamic>;

// Indices of the measuring and the correcting receiver inside the two-mode
// (bob, charlie) state returned by condition_on_bell.
struct RoleModes {
  std::size_t measurer;
  std::size_t corrector;
};

RoleModes role_modes(Receiver measurer) {
  return measurer == Receiver::charlie ? RoleModes{1, 0} : RoleModes{0, 1};
}

const Matrix2& pauli_z() {
  static const Matrix2 z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  return z;
}

// A trajectory residual r(o) = r0 + L*o with outcomes o ~ N(m, S). Averaging the
// coherent overlap over o yields the overlap of the Gaussian mixture, whose
// covariance is sigma + L S L^T and whose mean offset is r0 + L m.
double average_overlap(const Matrix2& sigma, const Vector2& residual_at_origin,
                       const SensitivityMatrix& sensitivity, const Vector& outcome_mean,
                       const Matrix& outcome_cov) {
  const Matrix2 mixed = sigma + sensitivity * outcome_cov * sensitivity.transpose();
  return coherent_overlap(mixed, residual_at_origin + sensitivity * outcome_mean);
}

}  // namespace

double f_noncoop(double alpha) { return 1.0 / kappa(alpha); }

double f_ac_coop(double alpha) { return 1.0 / (kappa(alpha) + 1.0); }

double f_ab_coop(double alpha) {
  const ChannelParams p = channel_params(alpha);
  const double k = 1.0 + p.alpha + p.beta - 2.0 * p.delta;
  const double d = p.delta - p.gamma;
  return (alpha + 2.0) / ((alpha + 2.0) * k - 2.0 * d * d);
}

double f_coop_avg(double alpha) { return 0.5 * (f_ab_coop(alpha) + f_ac_coop(alpha)); }

double alternation_fidelity(double alpha) { return f_coop_avg(alpha); }

double two_mode_teleport_fidelity(const Matrix2& a, const Matrix2& b, const Matrix2& c) {
  Matrix v(4, 4);
  v << a, c, c.transpose(), b;
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance || !is_physical(v)) {
    throw DomainError("two_mode_teleport_fidelity: channel covariance is unphysical");
  }
  const Matrix2& z = pauli_z();
  const Matrix2 gamma = Matrix2::Identity() + z * a * z + b - z * c - c.transpose() * z;
  return 1.0 / std::sqrt(gamma.determinant());
}

ComplexAmplitude modified_shift(ComplexAmplitude eta, ComplexAmplitude mu,
                                const ChannelParams& params) {
  const double gain = (params.delta - params.gamma) / (params.beta + 0.5);
  return eta + gain * (mu - eta);
}

OutcomeDistribution bell_outcome_distribution(const GaussianState& post_beam_splitter) {
  if (post_beam_splitter.modes() != 4) {
    throw InvalidInput("bell_outcome_distribution: expected the 4-mode joint state");
  }
  // X_- sits in x of the alice slot, P_+ in p of the input slot.
  const std::array<QuadratureRef, 2> refs{QuadratureRef{joint_mode::alice, Quadrature::x},
                                          QuadratureRef{joint_mode::input, Quadrature::p}};
  const QuadratureMarginal marginal = quadrature_marginal(post_beam_splitter, refs);
  const Matrix2 flip = Eigen::Vector2d(-1.0, 1.0).asDiagonal();
  OutcomeDistribution out;
  out.mean = {-marginal.mean(0), marginal.mean(1)};
  out.cov = flip * marginal.cov * flip;
  return out;
}

GaussianState condition_on_bell(const GaussianState& post_beam_splitter, ComplexAmplitude eta) {
  if (post_beam_splitter.modes() != 4) {
    throw InvalidInput("condition_on_bell: expected the 4-mode joint state");
  }
  // Measuring alice's slot removes it; the input slot keeps index 0.
  const GaussianState after_x =
      homodyne_update(post_beam_splitter, joint_mode::alice, Quadrature::x, -eta.re);
  return homodyne_update(after_x, joint_mode::input, Quadrature::p, eta.im);
}

GamePipeline::GamePipeline(double alpha)
    : params_(channel_params(alpha)), channel_(build_cm(params_)) {}

GaussianState GamePipeline::bell_input_state(ComplexAmplitude input_amp) const {
  const GaussianState joint = tensor(make_coherent(input_amp), channel_);
  return beam_splitter_50_50(joint, joint_mode::alice, joint_mode::input);
}

GaussianState GamePipeline::ready_for_heterodyne(ComplexAmplitude input_amp, ComplexAmplitude eta,
                                                 Receiver measurer) const {
  const GaussianState conditioned = condition_on_bell(bell_input_state(input_amp), eta);
  return displace(conditioned, role_modes(measurer).measurer, eta);
}

OutcomeDistribution GamePipeline::cooperative_heterodyne_distribution(ComplexAmplitude input_amp,
                                                                      ComplexAmplitude eta,
                                                                      Receiver measurer) const {
  return heterodyne_outcome_distribution(ready_for_heterodyne(input_amp, eta, measurer),
                                         role_modes(measurer).measurer);
}

StrategyOutcome GamePipeline::noncoop(ComplexAmplitude input_amp,
                                      ComplexAmplitude bell_outcome) const {
  const GaussianState conditioned = condition_on_bell(bell_input_state(input_amp), bell_outcome);
  const GaussianState shifted = displace(displace(conditioned, 0, bell_outcome), 1, bell_outcome);
  const GaussianState bob = partial_trace(shifted, {0});
  const GaussianState charlie = partial_trace(shifted, {1});
  const Vector2 target = to_quadratures(input_amp);

  StrategyOutcome out;
  out.fidelity_bob = fidelity_vs_coherent(bob, input_amp);
  out.fidelity_charlie = fidelity_vs_coherent(charlie, input_amp);
  out.conditional_cov_bob = bob.mode_cov(0);
  out.conditional_cov_charlie = charlie.mode_cov(0);
  out.mean_residual_bob = bob.mode_mean(0) - target;
  out.mean_residual_charlie = charlie.mode_mean(0) - target;
  return out;
}

StrategyOutcome GamePipeline::coop(ComplexAmplitude input_amp, ComplexAmplitude bell_outcome,
                                   ComplexAmplitude het_outcome, Receiver measurer,
                                   ShiftRule shift) const {
  const RoleModes roles = role_modes(measurer);
  const GaussianState ready = ready_for_heterodyne(input_amp, bell_outcome, measurer);
  const GaussianState survivor = heterodyne_update(ready, roles.measurer, het_outcome);
  const GaussianState corrected =
      displace(survivor, 0, shift(bell_outcome, het_outcome, params_));
  const GaussianState reconstructed = make_coherent(het_outcome);
  const Vector2 target = to_quadratures(input_amp);

  const double f_corrector = fidelity_vs_coherent(corrected, input_amp);
  const double f_measurer = fidelity_vs_coherent(reconstructed, input_amp);
  const Vector2 r_corrector = corrected.mode_mean(0) - target;
  const Vector2 r_measurer = reconstructed.mode_mean(0) - target;

  StrategyOutcome out;
  if (measurer == Receiver::charlie) {
    out.fidelity_bob = f_corrector;
    out.fidelity_charlie = f_measurer;
    out.conditional_cov_bob = corrected.mode_cov(0);
    out.conditional_cov_charlie = reconstructed.mode_cov(0);
    out.mean_residual_bob = r_corrector;
    out.mean_residual_charlie = r_measurer;
  } else {
    out.fidelity_bob = f_measurer;
    out.fidelity_charlie = f_corrector;
    out.conditional_cov_bob = reconstructed.mode_cov(0);
    out.conditional_cov_charlie = corrected.mode_cov(0);
    out.mean_residual_bob = r_measurer;
    out.mean_residual_charlie = r_corrector;
  }
  return out;
}

AveragedFidelities GamePipeline::average_noncoop(ComplexAmplitude input_amp) const {
  const OutcomeDistribution eta = bell_outcome_distribution(bell_input_state(input_amp));

  // The residuals are affine in eta; read off the offset and the two columns.
  const StrategyOutcome origin = noncoop(input_amp, {0.0, 0.0});
  const StrategyOutcome unit_re = noncoop(input_amp, {1.0, 0.0});
  const StrategyOutcome unit_im = noncoop(input_amp, {0.0, 1.0});

  SensitivityMatrix l_bob(2, 2);
  l_bob << unit_re.mean_residual_bob - origin.mean_residual_bob,
      unit_im.mean_residual_bob - origin.mean_residual_bob;
  SensitivityMatrix l_charlie(2, 2);
  l_charlie << unit_re.mean_residual_charlie - origin.mean_residual_charlie,
      unit_im.mean_residual_charlie - origin.mean_residual_charlie;

  const Vector eta_mean = Vector2(eta.mean.re, eta.mean.im);
  const Matrix eta_cov = eta.cov;
  return {average_overlap(origin.conditional_cov_bob, origin.mean_residual_bob, l_bob, eta_mean,
                          eta_cov),
          average_overlap(origin.conditional_cov_charlie, origin.mean_residual_charlie, l_charlie,
                          eta_mean, eta_cov)};
}

AveragedFidelities GamePipeline::average_coop(ComplexAmplitude input_amp, Receiver measurer,
                                              ShiftRule shift) const {
  const OutcomeDistribution eta = bell_outcome_distribution(bell_input_state(input_amp));

  // mu | eta ~ N(mu0 + K eta, S_mu) with constant S_mu.
  const OutcomeDistribution mu_origin =
      cooperative_heterodyne_distribution(input_amp, {0.0, 0.0}, measurer);
  const OutcomeDistribution mu_re =
      cooperative_heterodyne_distribution(input_amp, {1.0, 0.0}, measurer);
  const OutcomeDistribution mu_im =
      cooperative_heterodyne_distribution(input_amp, {0.0, 1.0}, measurer);
  Matrix2 k;
  k << mu_re.mean.re - mu_origin.mean.re, mu_im.mean.re - mu_origin.mean.re,
      mu_re.mean.im - mu_origin.mean.im, mu_im.mean.im - mu_origin.mean.im;
  // Heterodyne covariances are in quadrature units; mu itself is an amplitude.
  const Matrix2 mu_cov = 0.5 * mu_origin.cov;

  const Vector2 eta_mean(eta.mean.re, eta.mean.im);
  Vector outcome_mean(4);
  outcome_mean << eta_mean, Vector2(mu_origin.mean.re, mu_origin.mean.im) + k * eta_mean;
  Matrix outcome_cov(4, 4);
  outcome_cov << eta.cov, eta.cov * k.transpose(), k * eta.cov,
      k * eta.cov * k.transpose() + mu_cov;

  // Residuals are affine in o = (eta, mu).
  const std::array<std::pair<ComplexAmplitude, ComplexAmplitude>, 5> probes{{
      {{0.0, 0.0}, {0.0, 0.0}},
      {{1.0, 0.0}, {0.0, 0.0}},
      {{0.0, 1.0}, {0.0, 0.0}},
      {{0.0, 0.0}, {1.0, 0.0}},
      {{0.0, 0.0}, {0.0, 1.0}},
  }};
  std::array<StrategyOutcome, 5> runs;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    runs[i] = coop(input_amp, probes[i].first, probes[i].second, measurer, shift);
  }
  SensitivityMatrix l_bob(2, 4);
  SensitivityMatrix l_charlie(2, 4);
  for (Eigen::Index col = 0; col < 4; ++col) {
    const auto& probe = runs[static_cast<std::size_t>(col) + 1];
    l_bob.col(col) = probe.mean_residual_bob - runs[0].mean_residual_bob;
    l_charlie.col(col) = probe.mean_residual_charlie - runs[0].mean_residual_charlie;
  }
  return {average_overlap(runs[0].conditional_cov_bob, runs[0].mean_residual_bob, l_bob,
                          outcome_mean, outcome_cov),
          average_overlap(runs[0].conditional_cov_charlie, runs[0].mean_residual_charlie,
                          l_charlie, outcome_mean, outcome_cov)};
}

GaussianState bell_input_state(double alpha, ComplexAmplitude input_amp) {
  return GamePipeline(alpha).bell_input_state(input_amp);
}

OutcomeDistribution cooperative_heterodyne_distribution(double alpha, ComplexAmplitude input_amp,
                                                        ComplexAmplitude eta,
                                                        Receiver measurer) {
  return GamePipeline(alpha).cooperative_heterodyne_distribution(input_amp, eta, measurer);
}

StrategyOutcome run_noncoop_pipeline(double alpha, ComplexAmplitude input_amp,
                                     ComplexAmplitude bell_outcome) {
  return GamePipeline(alpha).noncoop(input_amp, bell_outcome);
}

StrategyOutcome run_coop_pipeline(double alpha, ComplexAmplitude input_amp,
                                  ComplexAmplitude bell_outcome, ComplexAmplitude het_outcome,
                                  Receiver measurer, ShiftRule shift) {
  return GamePipeline(alpha).coop(input_amp, bell_outcome, het_outcome, measurer, shift);
}

AveragedFidelities average_noncoop_fidelities(double alpha, ComplexAmplitude input_amp) {
  return GamePipeline(alpha).average_noncoop(input_amp);
}

AveragedFidelities average_coop_fidelities(double alpha, ComplexAmplitude input_amp,
                                           Receiver measurer, ShiftRule shift) {
  return GamePipeline(alpha).average_coop(input_amp, measurer, shift);
}

}  // namespace telegame
