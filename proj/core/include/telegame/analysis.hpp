#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace telegame {

inline constexpr double kThresholdSearchMin = 1.0;
inline constexpr double kThresholdSearchMax = 50.0;
inline constexpr double kCrossingSearchMin = 2.0;
inline constexpr double kCrossingSearchMax = 200.0;
inline constexpr double kScanStep = 0.01;
inline constexpr int kMaxBisections = 200;

struct SweepRow {
  double alpha;
  double f_tr;
  double f_ab;
  double f_ac;
  double f_coop;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct ThresholdResult {
  double alpha_th;
  double f_at_threshold;
  int iterations;
  double residual;
};

struct ClassicalCrossings {
  double alpha_tr_half;
  double alpha_coop_half;
};

struct BisectionResult {
  double root;
  int iterations;
  double residual;
};

// Closed-form fidelities on alpha_min + k*(alpha_max - alpha_min)/(steps - 1),
// endpoints included.
std::vector<SweepRow> sweep(double alpha_min, double alpha_max, std::size_t steps);

// First interval [a, a + step] on the scan grid where f changes sign.
std::optional<std::pair<double, double>> first_sign_change(const std::function<double(double)>& f,
                                                           double lo, double hi, double step);

// Stops once |f(mid)| <= tol or the bracket collapses to adjacent doubles.
// Throws BracketError if f(lo), f(hi) share a sign or tol is not met within
// kMaxBisections halvings.
BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

// f_coop_avg(alpha) - f_noncoop(alpha)
double cooperation_gain(double alpha);

ThresholdResult find_threshold(double tol = 1e-9);

// Points where the two strategies drop to the classical fidelity 1/2.
ClassicalCrossings find_classical_crossings();

}  // namespace telegame
