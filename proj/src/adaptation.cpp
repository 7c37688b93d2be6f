#include "impwf/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "impwf/numerics.hpp"

namespace impwf {

namespace {

constexpr double kLog2e = std::numbers::log2e;

// Average rate of water-filling on a unit-mean exponential H with constant k:
// log2(e) E1(alpha), written through the threshold equation.
double unit_exponential_rate(double k) {
  const double alpha = solve_threshold(SinrDensity::unit_exponential(), k);
  return kLog2e * (std::exp(-alpha) / alpha - k);
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Conventional:
      return "conventional";
    case Scheme::Aggressive:
      return "aggressive";
    case Scheme::Conservative:
      return "conservative";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (scheme_name(s) == name) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

void ErrorModel::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("BER constant c must be positive");
  if (!(target_pb > 0.0 && target_pb < 1.0)) {
    throw ConfigError("target BER must lie in (0, 1)");
  }
  if (!(target_pb < c)) {
    throw ConfigError("target BER must be below the BER constant c");
  }
}

double ErrorModel::log_ratio() const { return std::log(target_pb / c); }

KConstants KConstants::compute(const ChannelParams& params, const ErrorModel& em) {
  const double k_sinr = -1.5 / em.log_ratio();
  const double k_clean = k_sinr * params.avg_power / params.noise_var();
  return {k_sinr, k_clean, k_clean / (1.0 + params.mu_linear())};
}

Policy make_policy(Scheme scheme, const ChannelParams& params, const ErrorModel& em) {
  const KConstants k = KConstants::compute(params, em);
  switch (scheme) {
    case Scheme::Conventional:
      return {scheme, solve_threshold(SinrDensity::mixture(params), k.k_sinr), k.k_sinr,
              AdaptationDomain::Sinr};
    case Scheme::Aggressive:
      return {scheme, solve_threshold(SinrDensity::unit_exponential(), k.k_clean), k.k_clean,
              AdaptationDomain::ChannelGain};
    case Scheme::Conservative:
      return {scheme, solve_threshold(SinrDensity::unit_exponential(), k.k_impulse),
              k.k_impulse, AdaptationDomain::ChannelGain};
  }
  throw ConfigError("unknown scheme");
}

double qam_ber(double gamma, double m, double c) {
  if (!(m >= 1.0)) throw std::domain_error("qam_ber: constellation size below 1");
  if (!(gamma >= 0.0)) throw std::domain_error("qam_ber: negative SINR");
  if (m == 1.0) return std::min(c, 1.0);
  return std::clamp(c * std::exp(-1.5 * gamma / (m - 1.0)), 0.0, 1.0);
}

double wf_power_fraction(double x, const Policy& policy) {
  if (x < policy.threshold) return 0.0;
  return (1.0 / policy.threshold - 1.0 / x) / policy.k_used;
}

double wf_rate_bits(double x, const Policy& policy) {
  if (x < policy.threshold) return 0.0;
  return std::log2(x / policy.threshold);
}

double wf_constellation(double x, const Policy& policy) {
  return 1.0 + policy.k_used * x * wf_power_fraction(x, policy);
}

double threshold_lhs(const SinrDensity& density, double threshold) {
  double lhs = 0.0;
  for (const auto& c : density.components()) {
    const double z = threshold / c.mean;
    lhs += c.weight * (std::exp(-z) / threshold - numerics::exp_integral_e1(z) / c.mean);
  }
  return lhs;
}

double solve_threshold(const SinrDensity& density, double k) {
  if (!(k > 0.0)) throw std::domain_error("solve_threshold: k must be positive");
  const numerics::ScalarFn residual = [&](double t) { return threshold_lhs(density, t) - k; };
  return numerics::solve_monotone_root(residual, numerics::expand_decreasing_bracket(residual));
}

double rate_conventional(const ChannelParams& params, const ErrorModel& em) {
  params.validate();
  em.validate();
  const SinrDensity mix = SinrDensity::mixture(params);
  const double eta = solve_threshold(mix, KConstants::compute(params, em).k_sinr);
  const double p = params.p;
  // The clean term is weighted (1-p)^2: clean-governed symbols hit by an
  // impulse exceed the target and carry nothing.
  double rate = 0.0;
  if (p < 1.0) {
    rate += (1.0 - p) * (1.0 - p) * kLog2e * numerics::exp_integral_e1(eta / mix.mean_clean);
  }
  if (p > 0.0) rate += p * kLog2e * numerics::exp_integral_e1(eta / mix.mean_impulse);
  return rate;
}

double rate_aggressive(const ChannelParams& params, const ErrorModel& em) {
  params.validate();
  em.validate();
  return (1.0 - params.p) * unit_exponential_rate(KConstants::compute(params, em).k_clean);
}

double rate_conservative(const ChannelParams& params, const ErrorModel& em) {
  params.validate();
  em.validate();
  return unit_exponential_rate(KConstants::compute(params, em).k_impulse);
}

double rate_theory(Scheme scheme, const ChannelParams& params, const ErrorModel& em) {
  switch (scheme) {
    case Scheme::Conventional:
      return rate_conventional(params, em);
    case Scheme::Aggressive:
      return rate_aggressive(params, em);
    case Scheme::Conservative:
      return rate_conservative(params, em);
  }
  throw ConfigError("unknown scheme");
}

double outage_prob_conventional(double p) { return p * (1.0 - p); }

double outage_theory(Scheme scheme, const ChannelParams& params, const ErrorModel& em) {
  params.validate();
  em.validate();
  // With mu > 0 an impulse symbol always misses a target met on a clean one.
  const bool impulse_hurts = impulse_ber_under_conventional(em, params.mu_linear()) > em.target_pb;
  switch (scheme) {
    case Scheme::Conventional:
      return impulse_hurts ? outage_prob_conventional(params.p) : 0.0;
    case Scheme::Aggressive:
      return impulse_hurts ? params.p : 0.0;
    case Scheme::Conservative:
      return 0.0;
  }
  throw ConfigError("unknown scheme");
}

double impulse_ber_under_conventional(const ErrorModel& em, double mu_linear) {
  const double k_sinr = -1.5 / em.log_ratio();
  return em.c * std::exp(-1.5 / (k_sinr * (1.0 + mu_linear)));
}

double operating_point_ber(const ErrorModel& em, double sinr_ratio) {
  return std::clamp(em.c * std::exp(sinr_ratio * em.log_ratio()), 0.0, 1.0);
}

double crossover_pth(const ChannelParams& params, const ErrorModel& em) {
  ChannelParams clean_params = params;
  clean_params.p = 0.0;
  const double rn0 = rate_aggressive(clean_params, em);
  const double ri = rate_conservative(params, em);
  if (!(ri < rn0)) {
    throw NoCrossoverError("conservative rate is not below the interference-free aggressive rate");
  }
  return 1.0 - ri / rn0;
}

}  // namespace impwf
