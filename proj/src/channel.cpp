#include "impwf/channel.hpp"

namespace impwf {

void ChannelParams::validate() const {
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite");
  if (!std::isfinite(mu_db)) throw ConfigError("mu_db must be finite");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("impulse probability p must lie in [0, 1]");
  if (!(avg_power > 0.0) || !std::isfinite(avg_power)) {
    throw ConfigError("avg_power must be positive");
  }
}

SinrDensity SinrDensity::clean(const ChannelParams& params) {
  return {Kind::CleanExponential, params.snr_linear(), params.impulse_mean_sinr(), 0.0};
}

SinrDensity SinrDensity::impulse(const ChannelParams& params) {
  return {Kind::ImpulseExponential, params.snr_linear(), params.impulse_mean_sinr(), 1.0};
}

SinrDensity SinrDensity::mixture(const ChannelParams& params) {
  return {Kind::Mixture, params.snr_linear(), params.impulse_mean_sinr(), params.p};
}

SinrDensity SinrDensity::unit_exponential() {
  return {Kind::CleanExponential, 1.0, 1.0, 0.0};
}

std::vector<SinrDensity::Component> SinrDensity::components() const {
  switch (kind) {
    case Kind::CleanExponential:
      return {{1.0, mean_clean}};
    case Kind::ImpulseExponential:
      return {{1.0, mean_impulse}};
    case Kind::Mixture:
      break;
  }
  std::vector<Component> out;
  if (weight_impulse < 1.0) out.push_back({1.0 - weight_impulse, mean_clean});
  if (weight_impulse > 0.0) out.push_back({weight_impulse, mean_impulse});
  return out;
}

double density_at(const SinrDensity& density, double gamma) {
  double value = 0.0;
  for (const auto& c : density.components()) {
    value += c.weight * std::exp(-gamma / c.mean) / c.mean;
  }
  return value;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double RandomStream::uniform() {
  // 53 random mantissa bits, offset by half an ulp to stay off 0 and 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

CoherenceBlock sample_block(const ChannelParams& params, std::size_t block_len,
                            RandomStream& rng) {
  CoherenceBlock block;
  block.h = rng.exponential();
  block.impulse_mask.resize(block_len);
  for (std::size_t m = 0; m < block_len; ++m) block.impulse_mask[m] = rng.bernoulli(params.p);
  return block;
}

double sinr_of(const ChannelParams& params, double h, bool impulse, double tx_power) {
  const double clean = h * tx_power / params.noise_var();
  return impulse ? clean / (1.0 + params.mu_linear()) : clean;
}

}  // namespace impwf
