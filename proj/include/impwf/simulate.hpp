#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "impwf/adaptation.hpp"
#include "impwf/channel.hpp"

namespace impwf {

enum class SimMode {
  /// Every symbol draws its own H, governing state and actual state.
  PerSymbolGoverning,
  /// H and the governing (first-symbol) state are shared by block_len symbols.
  Block,
};

struct SimConfig {
  std::uint64_t n_symbols = 100000;
  std::uint64_t seed = 1;
  SimMode mode = SimMode::PerSymbolGoverning;
  std::size_t block_len = kDefaultBlockLen;
  /// Symbols per independent random stream. Part of the experiment
  /// definition: changing it changes the draws.
  std::uint64_t chunk_symbols = 12500;
  /// Worker threads; 0 picks the hardware concurrency. Never changes results.
  unsigned threads = 0;

  void validate() const;
};

/// Raw accumulators of a run; all summary statistics derive from them so
/// chunk results merge exactly.
struct SimResult {
  Scheme scheme = Scheme::Conventional;
  std::uint64_t seed_used = 0;
  std::uint64_t n_symbols = 0;
  double rate_sum = 0.0;
  double rate_sq_sum = 0.0;
  double power_sum = 0.0;
  std::uint64_t outage_count = 0;
  std::uint64_t active_outage_count = 0;
  /// counts[governing][actual], index 1 = impulse.
  std::array<std::array<std::uint64_t, 2>, 2> counts{};

  /// Credited bits per symbol over all symbols, outage symbols counting 0.
  double avg_se() const;
  double rate_std_error() const;
  /// Symbols whose adapted operating point misses the BER target at the
  /// actual SINR, cutoff symbols included.
  double outage_frac() const;
  /// Symbols actually transmitted (M > 1) that miss the BER target.
  double active_outage_frac() const;
  double mean_power_frac() const;
};

class SimMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// What the transmitter believes about a symbol.
struct Belief {
  double basis;      // adaptation variable in the policy's domain
  double unit_sinr;  // believed SINR at unit transmit power
};

/// Conventional trusts the governing symbol's state, Aggressive assumes a
/// clean symbol and Conservative an impulse-hit one.
Belief governing_state(const Policy& policy, const ChannelParams& params, double h,
                       bool governing_impulse);

/// Runs one random stream of `units` draws (symbols, or blocks in Block mode).
SimResult simulate_chunk(const ChannelParams& params, const ErrorModel& em,
                         const Policy& policy, const SimConfig& cfg,
                         std::uint64_t stream_index, std::uint64_t units);

/// Shards the run over streams 0, 1, ... and merges them in stream order.
SimResult simulate(const ChannelParams& params, const ErrorModel& em, Scheme scheme,
                   const SimConfig& cfg);

/// Count-weighted merge. Throws SimMismatchError on differing scheme or seed.
SimResult aggregate(std::span<const SimResult> results);

}  // namespace impwf
