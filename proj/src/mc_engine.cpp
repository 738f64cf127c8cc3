#include "pdc/mc_engine.hpp"

#include <numeric>

namespace pdc::mc {

SamplerSpec::SamplerSpec(std::vector<Proposal> coordinates) {
  for (const auto& c : coordinates) {
    if (const auto* g = std::get_if<Gaussian>(&c))
      gaussian(g->std);
    else
      uniform(std::get<Uniform>(c).lo, std::get<Uniform>(c).hi);
  }
}

SamplerSpec& SamplerSpec::gaussian(double std) {
  if (!(std > 0.0) || !std::isfinite(std))
    throw std::invalid_argument("Gaussian proposal needs a positive finite std");
  coords_.push_back(Gaussian{std});
  log_norm_ -= std::log(std * std::sqrt(2.0 * std::numbers::pi));
  inv_var_.push_back(1.0 / (std * std));
  return *this;
}

SamplerSpec& SamplerSpec::uniform(double lo, double hi) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("uniform proposal needs finite lo < hi");
  coords_.push_back(Uniform{lo, hi});
  log_norm_ -= std::log(hi - lo);
  inv_var_.push_back(0.0);
  return *this;
}

double SamplerSpec::density(std::span<const double> u) const {
  double exponent = log_norm_;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (inv_var_[i] > 0.0) {
      exponent -= 0.5 * u[i] * u[i] * inv_var_[i];
    } else {
      const auto& box = std::get<Uniform>(coords_[i]);
      if (u[i] < box.lo || u[i] > box.hi) return 0.0;
    }
  }
  return std::exp(exponent);
}

void SamplerSpec::draw(const Philox& rng, std::uint64_t index, std::span<double> out) const {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const auto [a, b] = rng.uniforms(index, static_cast<std::uint32_t>(i));
    if (const auto* g = std::get_if<Gaussian>(&coords_[i])) {
      out[i] = g->std * std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * std::numbers::pi * b);
    } else {
      const auto& box = std::get<Uniform>(coords_[i]);
      out[i] = box.lo + (box.hi - box.lo) * a;
    }
  }
}

namespace detail {

void validate(const SamplerSpec& spec, const McOptions& options) {
  if (spec.dimension() == 0) throw std::invalid_argument("sampler has no coordinates");
  if (options.samples < kMinSamples)
    throw std::invalid_argument("Monte Carlo needs at least 10^4 samples");
  if (options.shards == 0) throw std::invalid_argument("Monte Carlo needs at least one shard");
  if (options.shards > options.samples / kBatches)
    throw std::invalid_argument("too many shards for the sample count");
}

unsigned worker_count(const McOptions& options) {
  if (options.workers > 0) return options.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McEstimate summarize(std::span<const double> batch_sums, std::span<const std::uint64_t> batch_counts,
                     const McOptions& options) {
  McEstimate e;
  e.n_samples = options.samples;
  e.seed = options.seed;
  e.n_shards = options.shards;
  e.value = pairwise_sum(batch_sums) / static_cast<double>(options.samples);
  const std::size_t batches = batch_sums.size();
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b)
    means[b] = batch_sums[b] / static_cast<double>(batch_counts[b]);
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / batches;
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);
  e.std_error = std::sqrt(ss / (batches * (batches - 1.0)));
  return e;
}

std::string describe_point(std::span<const double> u) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t i = 0; i < u.size(); ++i) out << (i ? ", " : "") << "u" << i << '=' << u[i];
  out << ')';
  return out.str();
}

}  // namespace detail

}  // namespace pdc::mc
