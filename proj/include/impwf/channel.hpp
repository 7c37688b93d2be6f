#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace impwf {

/// Invalid user-supplied configuration (bad probability, target BER, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Rayleigh block fading with Bernoulli-Gaussian impulsive interference.
///
/// Mean SNR and interference-to-noise ratio are given in dB. Average signal
/// power is normalised to one, so the noise variance is 1 / snr_linear.
struct ChannelParams {
  double snr_db = 0.0;
  double mu_db = 0.0;
  double p = 0.0;
  double avg_power = 1.0;

  void validate() const;

  double snr_linear() const { return db_to_linear(snr_db); }
  double mu_linear() const { return db_to_linear(mu_db); }
  double noise_var() const { return avg_power / snr_linear(); }
  double interference_var() const { return mu_linear() * noise_var(); }
  /// Mean SINR of a symbol hit by an impulse.
  double impulse_mean_sinr() const { return snr_linear() / (1.0 + mu_linear()); }
};

/// Post-fading SINR density: one exponential or a two-component mixture.
struct SinrDensity {
  enum class Kind { CleanExponential, ImpulseExponential, Mixture };

  struct Component {
    double weight;
    double mean;
  };

  Kind kind = Kind::CleanExponential;
  double mean_clean = 1.0;
  double mean_impulse = 1.0;
  double weight_impulse = 0.0;

  static SinrDensity clean(const ChannelParams& params);
  static SinrDensity impulse(const ChannelParams& params);
  static SinrDensity mixture(const ChannelParams& params);
  /// Unit-mean exponential, the density of the channel power H itself.
  static SinrDensity unit_exponential();

  /// Exponential components with nonzero weight, clean first.
  std::vector<Component> components() const;
};

double density_at(const SinrDensity& density, double gamma);

/// Deterministic random stream derived from (seed, stream index).
///
/// Uniforms are built directly from the 64-bit engine output so a given
/// (seed, stream) reproduces the same draws with any standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Unit-mean exponential by inverse transform.
  double exponential() { return -std::log(uniform()); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// One coherence interval: constant channel power and per-symbol impulse flags.
struct CoherenceBlock {
  double h = 1.0;
  std::vector<bool> impulse_mask;

  std::size_t block_len() const { return impulse_mask.size(); }
};

inline constexpr std::size_t kDefaultBlockLen = 4;

/// Draws H first, then the N impulse flags in symbol order.
CoherenceBlock sample_block(const ChannelParams& params, std::size_t block_len,
                            RandomStream& rng);

/// Instantaneous SINR of a symbol sent at `tx_power` over channel power `h`.
double sinr_of(const ChannelParams& params, double h, bool impulse, double tx_power);

}  // namespace impwf
