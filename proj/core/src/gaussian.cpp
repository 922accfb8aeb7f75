#include "telegame/gaussian.hpp"

#include "telegame/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace telegame {

namespace detail {
struct StateAccess {
  static GaussianState make(Vector mean, Matrix cov) {
    return GaussianState(GaussianState::Trusted{}, std::move(mean), std::move(cov));
  }
};
}  // namespace detail

namespace {

using detail::StateAccess;

constexpr double kSqrt2 = std::numbers::sqrt2;

void check_mode(const GaussianState& state, std::size_t mode, const char* what) {
  if (mode >= state.modes()) {
    throw InvalidInput(std::string(what) + ": mode index " + std::to_string(mode) +
                       " out of range for " + std::to_string(state.modes()) + "-mode state");
  }
}

std::vector<Eigen::Index> quadrature_indices_except(std::size_t modes, std::size_t skip) {
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * modes);
  for (std::size_t m = 0; m < modes; ++m) {
    if (m == skip) continue;
    idx.push_back(static_cast<Eigen::Index>(2 * m));
    idx.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  return idx;
}

// Splits the covariance into kept block A, measured block B and cross block
// C (kept rows, measured columns).
struct Partition {
  Matrix a;
  Matrix2 b;
  Eigen::Matrix<double, Eigen::Dynamic, 2> c;
  Vector kept_mean;
  Vector2 measured_mean;
};

Partition partition(const GaussianState& state, std::size_t mode) {
  const auto kept = quadrature_indices_except(state.modes(), mode);
  const Matrix& v = state.cov().matrix();
  const auto m0 = static_cast<Eigen::Index>(2 * mode);
  Partition part;
  part.a = v(kept, kept);
  part.b = v.block<2, 2>(m0, m0);
  part.c = v(kept, Eigen::seqN(m0, 2));
  part.kept_mean = state.mean()(kept);
  part.measured_mean = state.mean().segment<2>(m0);
  return part;
}

}  // namespace

bool is_finite(ComplexAmplitude amp) { return std::isfinite(amp.re) && std::isfinite(amp.im); }

Vector2 to_quadratures(ComplexAmplitude amp) { return {kSqrt2 * amp.re, kSqrt2 * amp.im}; }

ComplexAmplitude from_quadratures(const Vector2& q) { return {q(0) / kSqrt2, q(1) / kSqrt2}; }

CovarianceMatrix::CovarianceMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0 || entries_.rows() % 2 != 0) {
    throw InvalidInput("covariance matrix must be square with positive even dimension");
  }
  if (!entries_.allFinite()) {
    throw InvalidInput("covariance matrix has non-finite entries");
  }
  const double asymmetry = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > kSymmetryTolerance) {
    throw InvalidInput("covariance matrix is not symmetric (max |V - V^T| = " +
                       std::to_string(asymmetry) + ")");
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
}

Matrix2 CovarianceMatrix::block(std::size_t row_mode, std::size_t col_mode) const {
  return entries_.block<2, 2>(static_cast<Eigen::Index>(2 * row_mode),
                              static_cast<Eigen::Index>(2 * col_mode));
}

GaussianState::GaussianState(Vector mean, CovarianceMatrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() != cov_.dimension()) {
    throw InvalidInput("mean vector length does not match covariance dimension");
  }
  if (!mean_.allFinite()) {
    throw InvalidInput("mean vector has non-finite entries");
  }
  if (!is_physical(cov_)) {
    throw InvalidInput("covariance matrix violates the uncertainty principle");
  }
}

GaussianState::GaussianState(Trusted, Vector mean, Matrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {}

GaussianState GaussianState::vacuum(std::size_t modes) {
  if (modes == 0) throw InvalidInput("vacuum: mode count must be positive");
  const auto dim = static_cast<Eigen::Index>(2 * modes);
  return StateAccess::make(Vector::Zero(dim), kVacuumVariance * Matrix::Identity(dim, dim));
}

Vector2 GaussianState::mode_mean(std::size_t mode) const {
  check_mode(*this, mode, "mode_mean");
  return mean_.segment<2>(static_cast<Eigen::Index>(2 * mode));
}

Matrix2 GaussianState::mode_cov(std::size_t mode) const {
  check_mode(*this, mode, "mode_cov");
  return cov_.block(mode, mode);
}

GaussianState make_coherent(ComplexAmplitude amp) {
  if (!is_finite(amp)) throw InvalidInput("make_coherent: amplitude must be finite");
  return StateAccess::make(to_quadratures(amp), kVacuumVariance * Matrix::Identity(2, 2));
}

GaussianState tensor(const GaussianState& s1, const GaussianState& s2) {
  const Eigen::Index n1 = s1.cov().dimension();
  const Eigen::Index n2 = s2.cov().dimension();
  Matrix cov = Matrix::Zero(n1 + n2, n1 + n2);
  cov.topLeftCorner(n1, n1) = s1.cov().matrix();
  cov.bottomRightCorner(n2, n2) = s2.cov().matrix();
  Vector mean(n1 + n2);
  mean << s1.mean(), s2.mean();
  return StateAccess::make(std::move(mean), std::move(cov));
}

Matrix symplectic_form(std::size_t modes) {
  const auto dim = static_cast<Eigen::Index>(2 * modes);
  Matrix omega = Matrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

Matrix beam_splitter_symplectic(std::size_t modes, std::size_t i, std::size_t j) {
  if (i == j || i >= modes || j >= modes) {
    throw InvalidInput("beam splitter: modes must be distinct valid indices");
  }
  const auto dim = static_cast<Eigen::Index>(2 * modes);
  Matrix s = Matrix::Identity(dim, dim);
  const double h = 1.0 / kSqrt2;
  for (Eigen::Index q = 0; q < 2; ++q) {
    const auto ri = static_cast<Eigen::Index>(2 * i) + q;
    const auto rj = static_cast<Eigen::Index>(2 * j) + q;
    s(ri, ri) = h;
    s(ri, rj) = -h;
    s(rj, ri) = h;
    s(rj, rj) = h;
  }
  return s;
}

GaussianState beam_splitter_50_50(const GaussianState& state, std::size_t i, std::size_t j) {
  if (i == j || i >= state.modes() || j >= state.modes()) {
    throw InvalidInput("beam_splitter_50_50: modes must be distinct valid indices");
  }
  const Matrix s = beam_splitter_symplectic(state.modes(), i, j);
  return StateAccess::make(s * state.mean(), s * state.cov().matrix() * s.transpose());
}

GaussianState apply_symplectic(const GaussianState& state, const Matrix& symplectic) {
  const Eigen::Index dim = state.cov().dimension();
  if (symplectic.rows() != dim || symplectic.cols() != dim) {
    throw InvalidInput("apply_symplectic: dimension mismatch");
  }
  const Matrix omega = symplectic_form(state.modes());
  if ((symplectic * omega * symplectic.transpose() - omega).cwiseAbs().maxCoeff() > 1e-9) {
    throw InvalidInput("apply_symplectic: matrix is not symplectic");
  }
  return StateAccess::make(symplectic * state.mean(),
                           symplectic * state.cov().matrix() * symplectic.transpose());
}

GaussianState displace(const GaussianState& state, std::size_t mode, ComplexAmplitude amp) {
  check_mode(state, mode, "displace");
  if (!is_finite(amp)) throw InvalidInput("displace: amplitude must be finite");
  Vector mean = state.mean();
  mean.segment<2>(static_cast<Eigen::Index>(2 * mode)) += to_quadratures(amp);
  return StateAccess::make(std::move(mean), state.cov().matrix());
}

GaussianState partial_trace(const GaussianState& state, std::span<const std::size_t> keep) {
  if (keep.empty()) throw InvalidInput("partial_trace: keep list is empty");
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * keep.size());
  std::vector<bool> seen(state.modes(), false);
  for (std::size_t m : keep) {
    check_mode(state, m, "partial_trace");
    if (seen[m]) throw InvalidInput("partial_trace: duplicate mode index " + std::to_string(m));
    seen[m] = true;
    idx.push_back(static_cast<Eigen::Index>(2 * m));
    idx.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  return StateAccess::make(state.mean()(idx), state.cov().matrix()(idx, idx));
}

GaussianState partial_trace(const GaussianState& state, std::initializer_list<std::size_t> keep) {
  return partial_trace(state, std::span<const std::size_t>(keep.begin(), keep.size()));
}

double uncertainty_min_eigenvalue(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0 || cov.rows() % 2 != 0) {
    throw InvalidInput("physicality: matrix must be square with positive even dimension");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
    throw InvalidInput("physicality: matrix is not symmetric");
  }
  const auto modes = static_cast<std::size_t>(cov.rows() / 2);
  const Eigen::MatrixXcd h =
      cov.cast<std::complex<double>>() -
      std::complex<double>(0.0, 0.5) * symplectic_form(modes).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_physical(const Matrix& cov) {
  return uncertainty_min_eigenvalue(cov) >= -kPhysicalityTolerance;
}

bool is_physical(const CovarianceMatrix& cov) { return is_physical(cov.matrix()); }

GaussianState homodyne_update(const GaussianState& state, std::size_t mode, Quadrature quadrature,
                              double outcome) {
  check_mode(state, mode, "homodyne_update");
  if (state.modes() < 2) throw InvalidInput("homodyne_update: need at least two modes");
  if (!std::isfinite(outcome)) throw InvalidInput("homodyne_update: outcome must be finite");
  const Partition part = partition(state, mode);
  const int q = quadrature == Quadrature::x ? 0 : 1;
  // The Moore-Penrose inverse of Pi*B*Pi is e_q e_q^T / B_qq (zero if B_qq = 0).
  const double variance = part.b(q, q);
  const double inv = variance > 0.0 ? 1.0 / variance : 0.0;
  const Vector gain = part.c.col(q) * inv;
  Matrix cov = part.a - gain * part.c.col(q).transpose();
  Vector mean = part.kept_mean + gain * (outcome - part.measured_mean(q));
  return StateAccess::make(std::move(mean), std::move(cov));
}

GaussianState heterodyne_update(const GaussianState& state, std::size_t mode,
                                ComplexAmplitude outcome) {
  check_mode(state, mode, "heterodyne_update");
  if (state.modes() < 2) {
    throw InvalidInput(
        "heterodyne_update: single-mode state; use heterodyne_outcome_distribution instead");
  }
  if (!is_finite(outcome)) throw InvalidInput("heterodyne_update: outcome must be finite");
  const Partition part = partition(state, mode);
  const Matrix2 noisy = part.b + kVacuumVariance * Matrix2::Identity();
  const Eigen::Matrix<double, Eigen::Dynamic, 2> gain = part.c * noisy.inverse();
  Matrix cov = part.a - gain * part.c.transpose();
  Vector mean = part.kept_mean + gain * (to_quadratures(outcome) - part.measured_mean);
  return StateAccess::make(std::move(mean), std::move(cov));
}

OutcomeDistribution heterodyne_outcome_distribution(const GaussianState& state, std::size_t mode) {
  check_mode(state, mode, "heterodyne_outcome_distribution");
  return {from_quadratures(state.mode_mean(mode)),
          state.mode_cov(mode) + kVacuumVariance * Matrix2::Identity()};
}

QuadratureMarginal quadrature_marginal(const GaussianState& state,
                                       std::span<const QuadratureRef> quadratures) {
  std::vector<Eigen::Index> idx;
  idx.reserve(quadratures.size());
  for (const auto& ref : quadratures) {
    check_mode(state, ref.mode, "quadrature_marginal");
    idx.push_back(static_cast<Eigen::Index>(2 * ref.mode) +
                  (ref.quadrature == Quadrature::x ? 0 : 1));
  }
  return {state.mean()(idx), state.cov().matrix()(idx, idx)};
}

double coherent_overlap(const Matrix2& sigma, const Vector2& delta) {
  const Matrix2 gamma = sigma + kVacuumVariance * Matrix2::Identity();
  const double exponent = -0.5 * delta.dot(gamma.inverse() * delta);
  return std::exp(exponent) / std::sqrt(gamma.determinant());
}

double fidelity_vs_coherent(const GaussianState& state, ComplexAmplitude amp) {
  if (state.modes() != 1) throw InvalidInput("fidelity_vs_coherent: state must be single-mode");
  if (!is_finite(amp)) throw InvalidInput("fidelity_vs_coherent: amplitude must be finite");
  return coherent_overlap(state.cov().block(0, 0), state.mean() - to_quadratures(amp));
}

}  // namespace telegame
