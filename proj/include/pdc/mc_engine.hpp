#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <numbers>
#include <span>
#include <sstream>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include "pdc/errors.hpp"

namespace pdc::mc {

/// Philox4x32-10 counter-based generator.
class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Block operator()(Block counter) const {
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * counter[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * counter[2];
      counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0],
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1],
                 static_cast<std::uint32_t>(p0)};
    }
    return counter;
  }

  /// Two uniforms in the open interval (0, 1) for (sample index, coordinate).
  std::array<double, 2> uniforms(std::uint64_t index, std::uint32_t coordinate) const {
    const Block b = (*this)({static_cast<std::uint32_t>(index),
                             static_cast<std::uint32_t>(index >> 32), coordinate, 0u});
    auto to_unit = [](std::uint32_t hi, std::uint32_t lo) {
      const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
      return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    };
    return {to_unit(b[0], b[1]), to_unit(b[2], b[3])};
  }

 private:
  std::array<std::uint32_t, 2> key_;
};

/// SplitMix64 finalizer; derives independent stream seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct Gaussian {
  double std = 1.0;  // mean zero
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};

using Proposal = std::variant<Gaussian, Uniform>;

/// Product proposal density, one independent factor per coordinate.
class SamplerSpec {
 public:
  SamplerSpec() = default;
  explicit SamplerSpec(std::vector<Proposal> coordinates);

  SamplerSpec& gaussian(double std);
  SamplerSpec& uniform(double lo, double hi);

  std::size_t dimension() const { return coords_.size(); }
  const std::vector<Proposal>& coordinates() const { return coords_; }

  double density(std::span<const double> u) const;

  /// Deterministic point for a global sample index.
  void draw(const Philox& rng, std::uint64_t index, std::span<double> out) const;

 private:
  std::vector<Proposal> coords_;
  double log_norm_ = 0.0;       // log of the constant factor of the density
  std::vector<double> inv_var_;  // 1/σ² for Gaussian coordinates, 0 otherwise
};

struct McOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::uint32_t shards = 64;
  unsigned workers = 0;  // 0: hardware concurrency
};

inline constexpr std::uint64_t kMinSamples = 10000;
inline constexpr int kBatches = 32;

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;  // batch means
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::uint32_t n_shards = 0;

  double relative_error() const { return value != 0.0 ? std_error / std::abs(value) : INFINITY; }
};

struct ComplexMcEstimate {
  McEstimate real;
  McEstimate imag;
};

namespace detail {

void validate(const SamplerSpec& spec, const McOptions& options);
unsigned worker_count(const McOptions& options);
double pairwise_sum(std::span<const double> values);
McEstimate summarize(std::span<const double> batch_sums, std::span<const std::uint64_t> batch_counts,
                     const McOptions& options);
std::string describe_point(std::span<const double> u);

template <int Channels, class Weight>
std::array<McEstimate, Channels> run(Weight&& weight, const SamplerSpec& spec,
                                     const McOptions& options) {
  validate(spec, options);
  const std::uint64_t n = options.samples;
  const std::uint32_t shards = options.shards;
  const Philox rng(options.seed);

  using Partial = std::array<std::array<double, Channels>, kBatches>;
  std::vector<Partial> partials(shards);
  std::vector<std::array<std::uint64_t, kBatches>> counts(shards);
  std::vector<std::exception_ptr> failures(shards);
  std::atomic<std::uint32_t> next{0};

  auto work = [&] {
    std::vector<double> u(spec.dimension());
    for (std::uint32_t s = next++; s < shards; s = next++) {
      try {
        Partial sums{};
        std::array<std::uint64_t, kBatches> cnt{};
        const std::uint64_t begin = n * s / shards;
        const std::uint64_t end = n * (s + 1) / shards;
        for (std::uint64_t i = begin; i < end; ++i) {
          spec.draw(rng, i, u);
          const std::array<double, Channels> w = weight(std::span<const double>(u));
          const auto batch = static_cast<std::size_t>(i * kBatches / n);
          for (int c = 0; c < Channels; ++c) {
            if (!std::isfinite(w[c])) {
              std::ostringstream msg;
              msg << "non-finite integrand sample " << i << " at " << describe_point(u);
              throw NumericalError(msg.str());
            }
            sums[batch][c] += w[c];
          }
          ++cnt[batch];
        }
        partials[s] = sums;
        counts[s] = cnt;
      } catch (...) {
        failures[s] = std::current_exception();
      }
    }
  };

  const unsigned workers = std::min<unsigned>(worker_count(options), shards);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  std::array<McEstimate, Channels> out;
  std::vector<double> column(shards);
  std::array<std::uint64_t, kBatches> batch_counts{};
  for (std::uint32_t s = 0; s < shards; ++s)
    for (int b = 0; b < kBatches; ++b) batch_counts[b] += counts[s][b];
  for (int c = 0; c < Channels; ++c) {
    std::array<double, kBatches> batch_sums{};
    for (int b = 0; b < kBatches; ++b) {
      for (std::uint32_t s = 0; s < shards; ++s) column[s] = partials[s][b][c];
      batch_sums[b] = pairwise_sum(column);
    }
    out[c] = summarize(batch_sums, batch_counts, options);
  }
  return out;
}

}  // namespace detail

/// Importance-sampled estimate of ∫ f(u) du, drawing u from the proposal and averaging f/p.
/// Identical (seed, samples, shards, spec) give bit-identical results for any worker count.
template <class F>
McEstimate estimate(F&& f, const SamplerSpec& spec, const McOptions& options) {
  auto weight = [&](std::span<const double> u) -> std::array<double, 1> {
    return {static_cast<double>(f(u)) / spec.density(u)};
  };
  return detail::run<1>(weight, spec, options)[0];
}

template <class F>
ComplexMcEstimate estimate_complex(F&& f, const SamplerSpec& spec, const McOptions& options) {
  auto weight = [&](std::span<const double> u) -> std::array<double, 2> {
    const std::complex<double> w = f(u) / spec.density(u);
    return {w.real(), w.imag()};
  };
  const auto r = detail::run<2>(weight, spec, options);
  return {r[0], r[1]};
}

}  // namespace pdc::mc
