#include "impwf/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

namespace impwf {

namespace {

constexpr double kOutageSlack = 1e-12;

class Accumulator {
 public:
  Accumulator(const ChannelParams& params, const ErrorModel& em, const Policy& policy,
              SimResult& out)
      : params_(params), em_(em), policy_(policy), out_(out) {}

  void symbol(double h, bool governing, bool actual) {
    const Belief belief = governing_state(policy_, params_, h, governing);
    const double power = wf_power_fraction(belief.basis, policy_);
    const double bits = wf_rate_bits(belief.basis, policy_);

    ++out_.n_symbols;
    ++out_.counts[governing][actual];
    out_.power_sum += power;

    bool outage;
    if (bits > 0.0) {
      const double m = wf_constellation(belief.basis, policy_);
      const double sinr = sinr_of(params_, h, actual, power * params_.avg_power);
      outage = qam_ber(sinr, m, em_.c) > em_.target_pb + kOutageSlack;
      out_.active_outage_count += outage;
    } else {
      // Nothing is sent, but the operating point still fixes the BER an
      // impulse would cause.
      const double ratio = sinr_of(params_, h, actual, 1.0) / belief.unit_sinr;
      outage = operating_point_ber(em_, ratio) > em_.target_pb + kOutageSlack;
    }

    if (outage) {
      ++out_.outage_count;
    } else {
      out_.rate_sum += bits;
      out_.rate_sq_sum += bits * bits;
    }
  }

 private:
  const ChannelParams& params_;
  const ErrorModel& em_;
  const Policy& policy_;
  SimResult& out_;
};

std::uint64_t symbols_per_unit(const SimConfig& cfg) {
  return cfg.mode == SimMode::Block ? cfg.block_len : 1;
}

}  // namespace

void SimConfig::validate() const {
  if (n_symbols < 1) throw ConfigError("n_symbols must be at least 1");
  if (block_len < 1) throw ConfigError("block_len must be at least 1");
  if (chunk_symbols < 1) throw ConfigError("chunk_symbols must be at least 1");
}

double SimResult::avg_se() const {
  return n_symbols ? rate_sum / static_cast<double>(n_symbols) : 0.0;
}

double SimResult::rate_std_error() const {
  if (n_symbols < 2) return 0.0;
  const double n = static_cast<double>(n_symbols);
  const double var = std::max(0.0, (rate_sq_sum - rate_sum * rate_sum / n) / (n - 1.0));
  return std::sqrt(var / n);
}

double SimResult::outage_frac() const {
  return n_symbols ? static_cast<double>(outage_count) / static_cast<double>(n_symbols) : 0.0;
}

double SimResult::active_outage_frac() const {
  return n_symbols ? static_cast<double>(active_outage_count) / static_cast<double>(n_symbols)
                   : 0.0;
}

double SimResult::mean_power_frac() const {
  return n_symbols ? power_sum / static_cast<double>(n_symbols) : 0.0;
}

Belief governing_state(const Policy& policy, const ChannelParams& params, double h,
                       bool governing_impulse) {
  switch (policy.scheme) {
    case Scheme::Conventional: {
      const double sinr = sinr_of(params, h, governing_impulse, 1.0);
      return {sinr, sinr};
    }
    case Scheme::Aggressive:
      return {h, sinr_of(params, h, false, 1.0)};
    case Scheme::Conservative:
      return {h, sinr_of(params, h, true, 1.0)};
  }
  return {h, sinr_of(params, h, false, 1.0)};
}

SimResult simulate_chunk(const ChannelParams& params, const ErrorModel& em,
                         const Policy& policy, const SimConfig& cfg,
                         std::uint64_t stream_index, std::uint64_t units) {
  SimResult out;
  out.scheme = policy.scheme;
  out.seed_used = cfg.seed;
  Accumulator acc(params, em, policy, out);
  RandomStream rng(cfg.seed, stream_index);

  if (cfg.mode == SimMode::PerSymbolGoverning) {
    for (std::uint64_t i = 0; i < units; ++i) {
      const double h = rng.exponential();
      const bool governing = rng.bernoulli(params.p);
      const bool actual = rng.bernoulli(params.p);
      acc.symbol(h, governing, actual);
    }
  } else {
    for (std::uint64_t i = 0; i < units; ++i) {
      const CoherenceBlock block = sample_block(params, cfg.block_len, rng);
      const bool governing = block.impulse_mask.front();
      for (const bool actual : block.impulse_mask) acc.symbol(block.h, governing, actual);
    }
  }
  return out;
}

SimResult simulate(const ChannelParams& params, const ErrorModel& em, Scheme scheme,
                   const SimConfig& cfg) {
  params.validate();
  em.validate();
  cfg.validate();
  const Policy policy = make_policy(scheme, params, em);

  const std::uint64_t unit = symbols_per_unit(cfg);
  const std::uint64_t total_units = (cfg.n_symbols + unit - 1) / unit;
  const std::uint64_t chunk_units = std::max<std::uint64_t>(1, cfg.chunk_symbols / unit);
  const std::uint64_t n_chunks = (total_units + chunk_units - 1) / chunk_units;

  std::vector<SimResult> parts(n_chunks);
  auto run = [&](std::uint64_t c) {
    const std::uint64_t units = std::min(chunk_units, total_units - c * chunk_units);
    parts[c] = simulate_chunk(params, em, policy, cfg, c, units);
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_chunks));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::uint64_t c = next++; c < n_chunks; c = next++) run(c);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return aggregate(parts);
}

SimResult aggregate(std::span<const SimResult> results) {
  if (results.empty()) throw SimMismatchError("aggregate: no results");
  SimResult out;
  out.scheme = results.front().scheme;
  out.seed_used = results.front().seed_used;
  for (const SimResult& r : results) {
    if (r.scheme != out.scheme || r.seed_used != out.seed_used) {
      throw SimMismatchError("aggregate: results come from different configurations");
    }
    out.n_symbols += r.n_symbols;
    out.rate_sum += r.rate_sum;
    out.rate_sq_sum += r.rate_sq_sum;
    out.power_sum += r.power_sum;
    out.outage_count += r.outage_count;
    out.active_outage_count += r.active_outage_count;
    for (int g = 0; g < 2; ++g) {
      for (int a = 0; a < 2; ++a) out.counts[g][a] += r.counts[g][a];
    }
  }
  return out;
}

}  // namespace impwf
