#include "telegame/analysis.hpp"

#include "telegame/channel.hpp"
#include "telegame/error.hpp"
#include "telegame/protocols.hpp"

#include <cmath>
#include <string>

namespace telegame {

namespace {

bool opposite_signs(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

constexpr double kCrossingTolerance = 1e-13;

}  // namespace

std::vector<SweepRow> sweep(double alpha_min, double alpha_max, std::size_t steps) {
  if (!std::isfinite(alpha_min) || !std::isfinite(alpha_max) || alpha_min < kMinAlpha ||
      !(alpha_min < alpha_max)) {
    throw InvalidInput("sweep: need 1/2 <= alpha_min < alpha_max");
  }
  if (steps < 2) throw InvalidInput("sweep: steps must be at least 2");

  std::vector<SweepRow> rows;
  rows.reserve(steps);
  const double width = alpha_max - alpha_min;
  for (std::size_t k = 0; k < steps; ++k) {
    const double alpha = k + 1 == steps
                             ? alpha_max
                             : alpha_min + width * static_cast<double>(k) /
                                               static_cast<double>(steps - 1);
    const double f_ab = f_ab_coop(alpha);
    const double f_ac = f_ac_coop(alpha);
    rows.push_back({alpha, f_noncoop(alpha), f_ab, f_ac, 0.5 * (f_ab + f_ac)});
  }
  return rows;
}

std::optional<std::pair<double, double>> first_sign_change(const std::function<double(double)>& f,
                                                           double lo, double hi, double step) {
  const auto cells = static_cast<long>(std::ceil((hi - lo) / step));
  double left = lo;
  double f_left = f(left);
  for (long k = 1; k <= cells; ++k) {
    const double right = k == cells ? hi : lo + step * static_cast<double>(k);
    const double f_right = f(right);
    if (f_left == 0.0) return std::pair{left, left};
    if (opposite_signs(f_left, f_right) || f_right == 0.0) return std::pair{left, right};
    left = right;
    f_left = f_right;
  }
  return std::nullopt;
}

BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("bisect: tolerance must be positive");
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0, 0.0};
  if (f_hi == 0.0) return {hi, 0, 0.0};
  if (!opposite_signs(f_lo, f_hi)) {
    throw BracketError("bisect: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  for (int it = 1; it <= kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= tol || mid == lo || mid == hi) {
      if (std::abs(f_mid) > tol) {
        throw BracketError("bisect: bracket collapsed with residual " + std::to_string(f_mid));
      }
      return {mid, it, std::abs(f_mid)};
    }
    if (opposite_signs(f_lo, f_mid)) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  throw BracketError("bisect: no convergence within " + std::to_string(kMaxBisections) +
                     " iterations");
}

double cooperation_gain(double alpha) { return f_coop_avg(alpha) - f_noncoop(alpha); }

ThresholdResult find_threshold(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidInput("find_threshold: tol must be > 0");
  const auto bracket =
      first_sign_change(cooperation_gain, kThresholdSearchMin, kThresholdSearchMax, kScanStep);
  if (!bracket) {
    throw BracketError("find_threshold: cooperation gain never changes sign on [1, 50]");
  }
  const BisectionResult root = bisect(cooperation_gain, bracket->first, bracket->second, tol);
  return {root.root, f_noncoop(root.root), root.iterations, root.residual};
}

ClassicalCrossings find_classical_crossings() {
  auto crossing = [](const std::function<double(double)>& f, const char* name) {
    const auto bracket = first_sign_change(f, kCrossingSearchMin, kCrossingSearchMax, kScanStep);
    if (!bracket) {
      throw BracketError(std::string("find_classical_crossings: ") + name +
                         " never reaches 1/2 on (2, 200]");
    }
    return bisect(f, bracket->first, bracket->second, kCrossingTolerance).root;
  };
  return {crossing([](double a) { return f_noncoop(a) - 0.5; }, "f_tr"),
          crossing([](double a) { return f_coop_avg(a) - 0.5; }, "f_coop")};
}

}  // namespace telegame
