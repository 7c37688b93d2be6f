#pragma once

#include <array>
#include <stdexcept>
#include <string_view>

#include "impwf/channel.hpp"

namespace impwf {

enum class Scheme { Conventional, Aggressive, Conservative };

inline constexpr std::array<Scheme, 3> kAllSchemes = {
    Scheme::Conventional, Scheme::Aggressive, Scheme::Conservative};

std::string_view scheme_name(Scheme scheme);
/// Accepts the lower-case names printed by scheme_name. Throws ConfigError.
Scheme parse_scheme(std::string_view name);

/// What the adaptation variable is: the fed-back SINR or the channel power H.
enum class AdaptationDomain { Sinr, ChannelGain };

inline constexpr double kDefaultBerConst = 0.2;
inline constexpr double kDefaultTargetPb = 1e-3;

/// M-QAM bit error approximation c * exp(-1.5 gamma / (M - 1)) with target P_b.
struct ErrorModel {
  double c = kDefaultBerConst;
  double target_pb = kDefaultTargetPb;

  /// Requires 0 < target_pb < min(c, 1).
  void validate() const;
  /// ln(P_b / c), strictly negative for a valid model.
  double log_ratio() const;
};

/// Rate-mapping constants M = 1 + k x P / P_avg in each adaptation domain.
struct KConstants {
  double k_sinr;     // SINR domain
  double k_clean;    // channel gain, noise only
  double k_impulse;  // channel gain, noise plus impulse

  static KConstants compute(const ChannelParams& params, const ErrorModel& em);
};

/// A solved water-filling policy. Immutable once built.
struct Policy {
  Scheme scheme;
  double threshold;
  double k_used;
  AdaptationDomain domain;
};

Policy make_policy(Scheme scheme, const ChannelParams& params, const ErrorModel& em);

/// Clamped to [0, 1]. M = 1 carries no bits and returns c. Throws
/// std::domain_error for M < 1 or gamma < 0.
double qam_ber(double gamma, double m, double c);

/// P(x) / P_avg for adaptation variable x (SINR or H, per policy domain).
double wf_power_fraction(double x, const Policy& policy);
/// log2 M(x) = log2(x / threshold) above the cutoff, 0 below.
double wf_rate_bits(double x, const Policy& policy);
/// Constellation size implied by the rate mapping; 1 below the cutoff.
double wf_constellation(double x, const Policy& policy);

/// Left side of the power-budget equation, int_t^inf (1/t - 1/g) f(g) dg, in
/// closed form over the exponential components.
double threshold_lhs(const SinrDensity& density, double threshold);
/// Unique t > 0 with threshold_lhs(density, t) = k.
double solve_threshold(const SinrDensity& density, double k);

/// Conventional water-filling on the mixture SINR, with clean-governed
/// impulse symbols dropped as outage.
double rate_conventional(const ChannelParams& params, const ErrorModel& em);
/// Water-filling on H as if impulses never occur; impulse symbols are lost.
double rate_aggressive(const ChannelParams& params, const ErrorModel& em);
/// Water-filling on H as if every symbol were hit; never in outage.
double rate_conservative(const ChannelParams& params, const ErrorModel& em);
double rate_theory(Scheme scheme, const ChannelParams& params, const ErrorModel& em);

double outage_prob_conventional(double p);
/// Fraction of symbols whose adapted operating point misses the target.
double outage_theory(Scheme scheme, const ChannelParams& params, const ErrorModel& em);

/// BER of an impulse symbol sent with the rate and power chosen for a clean
/// governing SINR: c * exp(-1.5 / (k_sinr (1 + mu))).
double impulse_ber_under_conventional(const ErrorModel& em, double mu_linear);

/// BER delivered when the link is adapted for SINR g_b but experiences g_a.
///
/// Water-filling keeps P / (M - 1) = 1 / (k g_b), so the BER depends only on
/// the ratio g_a / g_b and equals c (P_b / c)^ratio.
double operating_point_ber(const ErrorModel& em, double sinr_ratio);

class NoCrossoverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Impulse probability where aggressive and conservative rates meet.
double crossover_pth(const ChannelParams& params, const ErrorModel& em);

}  // namespace impwf
