#include "telegame/monte_carlo.hpp"

#include "telegame/channel.hpp"
#include "telegame/error.hpp"
#include "telegame/protocols.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace telegame {

namespace {

// Running moments merged with Chan's parallel update.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
    min = std::min(min, x);
    max = std::max(max, x);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / n;
    m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / n;
    count += other.count;
    min = std::min(min, other.min);
    max = std::max(max, other.max);
  }

  double standard_error() const {
    if (count < 2) return 0.0;
    const double variance = m2 / static_cast<double>(count - 1);
    return std::sqrt(variance / static_cast<double>(count));
  }
};

struct ChunkStats {
  Moments tr;
  Moments ab;
  Moments ac;
};

ChunkStats run_chunk(const McConfig& config, const GamePipeline& game, std::size_t first,
                     std::size_t last) {
  ChunkStats stats;
  for (std::size_t shot = first; shot < last; ++shot) {
    Rng rng = shot_rng(config.seed, shot);
    ComplexAmplitude input{};
    if (config.input_ensemble_std > 0.0) {
      std::normal_distribution<double> amp(0.0, config.input_ensemble_std);
      input.re = amp(rng);
      input.im = amp(rng);
    }
    const GaussianState post_bs = game.bell_input_state(input);
    const ComplexAmplitude eta = sample_bell_outcome(post_bs, rng);

    const StrategyOutcome noncoop = game.noncoop(input, eta);

    const OutcomeDistribution mu_law = game.cooperative_heterodyne_distribution(input, eta);
    // The heterodyne covariance is in quadrature units; sample there and map back.
    const Vector q = sample_gaussian(to_quadratures(mu_law.mean), mu_law.cov, rng);
    const ComplexAmplitude mu = from_quadratures(Vector2(q(0), q(1)));
    const StrategyOutcome coop = game.coop(input, eta, mu);

    stats.tr.add(noncoop.fidelity_bob);
    stats.ab.add(coop.fidelity_bob);
    stats.ac.add(coop.fidelity_charlie);
  }
  return stats;
}

void validate(const McConfig& config) {
  if (config.shots == 0) throw InvalidInput("monte carlo: shots must be at least 1");
  if (!std::isfinite(config.input_ensemble_std) || config.input_ensemble_std < 0.0) {
    throw InvalidInput("monte carlo: input ensemble std must be finite and >= 0");
  }
}

}  // namespace

Rng shot_rng(std::uint64_t seed, std::uint64_t shot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shot), static_cast<std::uint32_t>(shot >> 32)};
  return Rng(seq);
}

Vector sample_gaussian(const Vector& mean, const Matrix& cov, Rng& rng) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  const Vector scale = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(mean.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(rng);
  return mean + solver.eigenvectors() * scale.asDiagonal() * z;
}

ComplexAmplitude sample_bell_outcome(const GaussianState& post_beam_splitter, Rng& rng) {
  const OutcomeDistribution law = bell_outcome_distribution(post_beam_splitter);
  const Vector draw = sample_gaussian(Vector2(law.mean.re, law.mean.im), law.cov, rng);
  return {draw(0), draw(1)};
}

ComplexAmplitude sample_heterodyne_outcome(const GaussianState& state, std::size_t mode, Rng& rng) {
  const OutcomeDistribution law = heterodyne_outcome_distribution(state, mode);
  const Vector q = sample_gaussian(to_quadratures(law.mean), law.cov, rng);
  return from_quadratures(Vector2(q(0), q(1)));
}

McEstimate estimate_fidelities(const McConfig& config, unsigned threads) {
  validate(config);
  const GamePipeline game(config.alpha);
  const std::size_t chunks = (config.shots + kShotsPerChunk - 1) / kShotsPerChunk;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));

  std::vector<ChunkStats> partials(chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) {
        const std::size_t first = c * kShotsPerChunk;
        partials[c] = run_chunk(config, game, first, std::min(config.shots, first + kShotsPerChunk));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ChunkStats total;
  for (const ChunkStats& part : partials) {
    total.tr.merge(part.tr);
    total.ab.merge(part.ab);
    total.ac.merge(part.ac);
  }

  McEstimate est;
  est.shots = config.shots;
  est.f_tr_hat = total.tr.mean;
  est.f_ab_hat = total.ab.mean;
  est.f_ac_hat = total.ac.mean;
  est.stderr_tr = total.tr.standard_error();
  est.stderr_ab = total.ab.standard_error();
  est.stderr_ac = total.ac.standard_error();
  est.spread_tr = total.tr.max - total.tr.min;
  est.spread_ab = total.ab.max - total.ab.min;
  est.spread_ac = total.ac.max - total.ac.min;
  return est;
}

}  // namespace telegame
