#pragma once

// Multimode Gaussian states in the (x1,p1,x2,p2,...) quadrature ordering.
//
// Conventions: the vacuum has per-mode covariance (1/2)*I, and a complex
// amplitude phi corresponds to the quadrature mean sqrt(2)*(Re phi, Im phi).
// All states are immutable values; every operation returns a new state.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace telegame {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector2 = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

inline constexpr double kVacuumVariance = 0.5;
inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kPhysicalityTolerance = 1e-9;

struct ComplexAmplitude {
  double re = 0.0;
  double im = 0.0;

  friend bool operator==(const ComplexAmplitude&, const ComplexAmplitude&) = default;
};

inline ComplexAmplitude operator+(ComplexAmplitude a, ComplexAmplitude b) {
  return {a.re + b.re, a.im + b.im};
}
inline ComplexAmplitude operator-(ComplexAmplitude a, ComplexAmplitude b) {
  return {a.re - b.re, a.im - b.im};
}
inline ComplexAmplitude operator-(ComplexAmplitude a) { return {-a.re, -a.im}; }
inline ComplexAmplitude operator*(double s, ComplexAmplitude a) {
  return {s * a.re, s * a.im};
}

bool is_finite(ComplexAmplitude amp);

// phi -> sqrt(2) * (Re phi, Im phi)
Vector2 to_quadratures(ComplexAmplitude amp);
ComplexAmplitude from_quadratures(const Vector2& q);

// Symmetric, even-dimensional real matrix. The constructor symmetrizes its
// input and rejects anything further than kSymmetryTolerance from symmetric.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix entries);

  const Matrix& matrix() const { return entries_; }
  Eigen::Index dimension() const { return entries_.rows(); }
  std::size_t modes() const { return static_cast<std::size_t>(entries_.rows() / 2); }
  Matrix2 block(std::size_t row_mode, std::size_t col_mode) const;

 private:
  Matrix entries_;
};

enum class Quadrature { x, p };

namespace detail {
struct StateAccess;
}

class GaussianState {
 public:
  // Throws InvalidInput if dimensions disagree or cov violates the
  // uncertainty principle.
  GaussianState(Vector mean, CovarianceMatrix cov);

  static GaussianState vacuum(std::size_t modes);

  std::size_t modes() const { return cov_.modes(); }
  const Vector& mean() const { return mean_; }
  const CovarianceMatrix& cov() const { return cov_; }

  Vector2 mode_mean(std::size_t mode) const;
  Matrix2 mode_cov(std::size_t mode) const;

 private:
  friend struct detail::StateAccess;
  struct Trusted {};
  // Used by operations that provably preserve physicality.
  GaussianState(Trusted, Vector mean, Matrix cov);

  Vector mean_;
  CovarianceMatrix cov_;
};

// Gaussian law of a measurement outcome, in amplitude units for the mean and
// quadrature units for the covariance.
struct OutcomeDistribution {
  ComplexAmplitude mean;
  Matrix2 cov;
};

struct QuadratureRef {
  std::size_t mode;
  Quadrature quadrature;
};

// Joint marginal of a list of quadratures, in quadrature units.
struct QuadratureMarginal {
  Vector mean;
  Matrix cov;
};

GaussianState make_coherent(ComplexAmplitude amp);

// Block-diagonal joint state, modes of s1 first.
GaussianState tensor(const GaussianState& s1, const GaussianState& s2);

// Omega = direct sum of [[0,1],[-1,0]].
Matrix symplectic_form(std::size_t modes);

// Balanced beam splitter on modes (i, j):
//   x_i -> (x_i - x_j)/sqrt2, x_j -> (x_i + x_j)/sqrt2, same for p.
Matrix beam_splitter_symplectic(std::size_t modes, std::size_t i, std::size_t j);
GaussianState beam_splitter_50_50(const GaussianState& state, std::size_t i, std::size_t j);

// mean -> S*mean, cov -> S*cov*S^T. Rejects non-symplectic S.
GaussianState apply_symplectic(const GaussianState& state, const Matrix& symplectic);

GaussianState displace(const GaussianState& state, std::size_t mode, ComplexAmplitude amp);

GaussianState partial_trace(const GaussianState& state, std::span<const std::size_t> keep);
GaussianState partial_trace(const GaussianState& state, std::initializer_list<std::size_t> keep);

// Smallest eigenvalue of the Hermitian matrix V - (i/2)*Omega.
double uncertainty_min_eigenvalue(const Matrix& cov);
bool is_physical(const Matrix& cov);
bool is_physical(const CovarianceMatrix& cov);

// Condition the remaining modes on an ideal homodyne outcome; the measured
// mode is removed from the returned state.
GaussianState homodyne_update(const GaussianState& state, std::size_t mode, Quadrature quadrature,
                              double outcome);

// Condition on a heterodyne (coherent-state POVM) outcome; measured mode removed.
GaussianState heterodyne_update(const GaussianState& state, std::size_t mode,
                                ComplexAmplitude outcome);

OutcomeDistribution heterodyne_outcome_distribution(const GaussianState& state, std::size_t mode);

QuadratureMarginal quadrature_marginal(const GaussianState& state,
                                       std::span<const QuadratureRef> quadratures);

// Overlap of a single-mode Gaussian (cov sigma, mean offset delta from the
// target coherent mean) with that coherent state:
//   exp(-1/2 delta^T (sigma + I/2)^-1 delta) / sqrt(det(sigma + I/2)).
double coherent_overlap(const Matrix2& sigma, const Vector2& delta);

double fidelity_vs_coherent(const GaussianState& state, ComplexAmplitude amp);

}  // namespace telegame
