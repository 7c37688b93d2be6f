#include <cmath>
#include <vector>

#include "doctest.h"
#include "impwf/simulate.hpp"

using namespace impwf;

namespace {

ChannelParams make(double snr_db, double mu_db, double p) {
  ChannelParams c;
  c.snr_db = snr_db;
  c.mu_db = mu_db;
  c.p = p;
  return c;
}

const ErrorModel kEm{};

SimConfig cfg_with(std::uint64_t n, std::uint64_t seed) {
  SimConfig cfg;
  cfg.n_symbols = n;
  cfg.seed = seed;
  return cfg;
}

double binomial_sigma(double q, std::uint64_t n) { return std::sqrt(q * (1.0 - q) / double(n)); }

bool same(const SimResult& a, const SimResult& b) {
  return a.scheme == b.scheme && a.seed_used == b.seed_used && a.n_symbols == b.n_symbols &&
         a.rate_sum == b.rate_sum && a.rate_sq_sum == b.rate_sq_sum && a.power_sum == b.power_sum &&
         a.outage_count == b.outage_count && a.active_outage_count == b.active_outage_count &&
         a.counts == b.counts;
}

// Mean and variance of the number of outage symbols in one block of length n,
// by enumerating every impulse mask. Position 0 governs; a later symbol is
// lost when the governing symbol is clean and it is hit.
struct BlockOutage {
  double mean;
  double var;
};

BlockOutage enumerate_block_outage(double p, unsigned n) {
  double m1 = 0.0, m2 = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double prob = 1.0;
    int ones = 0;
    for (unsigned b = 0; b < n; ++b) {
      const bool hit = mask >> b & 1u;
      prob *= hit ? p : 1.0 - p;
      ones += hit && b > 0;
    }
    const double lost = (mask & 1u) ? 0.0 : ones;
    m1 += prob * lost;
    m2 += prob * lost * lost;
  }
  return {m1, m2 - m1 * m1};
}

}  // namespace

TEST_CASE("governing state per scheme") {
  const ChannelParams c = make(0, 0, 0.5);
  const Policy cons = make_policy(Scheme::Conservative, c, kEm);
  const Policy aggr = make_policy(Scheme::Aggressive, c, kEm);
  const Policy conv = make_policy(Scheme::Conventional, c, kEm);
  const double h = 1.7;
  CHECK(governing_state(cons, c, h, false).unit_sinr == sinr_of(c, h, true, 1.0));
  CHECK(governing_state(cons, c, h, false).basis == h);
  CHECK(governing_state(aggr, c, h, true).unit_sinr == sinr_of(c, h, false, 1.0));
  CHECK(governing_state(conv, c, h, true).basis == sinr_of(c, h, true, 1.0));
  CHECK(governing_state(conv, c, h, false).basis == sinr_of(c, h, false, 1.0));
}

TEST_CASE("conventional: clean governing symbol, impulse-hit actual symbol is lost") {
  ChannelParams c = make(0, 0, 0.5);
  const Policy conv = make_policy(Scheme::Conventional, c, kEm);
  const double h = 3.0;  // above threshold
  const Belief b = governing_state(conv, c, h, false);
  REQUIRE(wf_rate_bits(b.basis, conv) > 0.0);
  const double power = wf_power_fraction(b.basis, conv);
  const double m = wf_constellation(b.basis, conv);
  CHECK(qam_ber(sinr_of(c, h, true, power), m, kEm.c) > kEm.target_pb);
  CHECK(qam_ber(sinr_of(c, h, false, power), m, kEm.c) ==
        doctest::Approx(kEm.target_pb).epsilon(1e-12));
}

TEST_CASE("reference operating points at 1e5 symbols") {
  const SimConfig cfg = cfg_with(100000, 11);
  for (double p : {0.0, 0.5, 1.0}) {
    const SimResult r = simulate(make(0, 0, p), kEm, Scheme::Conservative, cfg);
    CHECK(std::abs(r.avg_se() - 0.3064) <= 0.005);
    CHECK(r.outage_count == 0);
  }
  const SimResult w = simulate(make(0, 0, 0.5), kEm, Scheme::Conventional, cfg);
  CHECK(std::abs(w.avg_se() - 0.2544) <= 0.005);

  const ChannelParams all_hit = make(0, 0, 1.0);
  const SimResult a = simulate(all_hit, kEm, Scheme::Aggressive, cfg);
  CHECK(a.avg_se() == 0.0);
  CHECK(a.outage_frac() == 1.0);
  const double alpha = make_policy(Scheme::Aggressive, all_hit, kEm).threshold;
  const double above = std::exp(-alpha);
  CHECK(std::abs(a.active_outage_frac() - above) <= 3 * binomial_sigma(above, a.n_symbols));
}

TEST_CASE("counts add up and summary statistics are in range") {
  const SimResult r = simulate(make(3, 5, 0.3), kEm, Scheme::Conventional, cfg_with(20000, 3));
  std::uint64_t total = 0;
  for (const auto& row : r.counts) {
    for (auto v : row) total += v;
  }
  CHECK(total == r.n_symbols);
  CHECK(r.n_symbols == 20000);
  CHECK(r.outage_frac() >= 0.0);
  CHECK(r.outage_frac() <= 1.0);
  CHECK(r.active_outage_frac() <= r.outage_frac());
  CHECK(r.avg_se() >= 0.0);
  CHECK(r.seed_used == 3);
}

TEST_CASE("outage laws in per-symbol mode") {
  const SimConfig cfg = cfg_with(100000, 21);
  for (double p = 0.0; p <= 1.0001; p += 0.1) {
    const ChannelParams c = make(0, 0, p);
    const SimResult w = simulate(c, kEm, Scheme::Conventional, cfg);
    const double q = outage_prob_conventional(p);
    CHECK(std::abs(w.outage_frac() - q) <= 3 * binomial_sigma(q, w.n_symbols) + 1e-15);

    const SimResult a = simulate(c, kEm, Scheme::Aggressive, cfg);
    const double qa = p * std::exp(-make_policy(Scheme::Aggressive, c, kEm).threshold);
    CHECK(std::abs(a.active_outage_frac() - qa) <= 3 * binomial_sigma(qa, a.n_symbols) + 1e-15);
    CHECK(std::abs(a.outage_frac() - p) <= 3 * binomial_sigma(p, a.n_symbols) + 1e-15);

    CHECK(simulate(c, kEm, Scheme::Conservative, cfg).outage_count == 0);
  }
}

TEST_CASE("empirical power budget and rate agree with theory") {
  const SimConfig cfg = cfg_with(100000, 5);
  for (const auto& [snr, mu] : {std::pair{0.0, 0.0}, std::pair{10.0, 20.0}}) {
    for (double p : {0.0, 0.2, 0.5, 0.8, 1.0}) {
      const ChannelParams c = make(snr, mu, p);
      for (Scheme s : kAllSchemes) {
        CAPTURE(snr);
        CAPTURE(p);
        CAPTURE(scheme_name(s));
        const SimResult r = simulate(c, kEm, s, cfg);
        CHECK(std::abs(r.mean_power_frac() - 1.0) <= 0.02);
        const double theory = rate_theory(s, c, kEm);
        CHECK(std::abs(r.avg_se() - theory) <= 3 * r.rate_std_error() + 1e-15);
      }
    }
  }
}

TEST_CASE("block mode outage matches mask enumeration") {
  const double p = 0.4;
  const ChannelParams c = make(0, 0, p);
  for (unsigned n : {2u, 4u, 16u}) {
    const BlockOutage oracle = enumerate_block_outage(p, n);
    CHECK(oracle.mean / n == doctest::Approx(p * (1 - p) * (n - 1) / n));
    SimConfig cfg = cfg_with(200000, 9);
    cfg.mode = SimMode::Block;
    cfg.block_len = n;
    const SimResult r = simulate(c, kEm, Scheme::Conventional, cfg);
    const double blocks = double(r.n_symbols) / n;
    const double sigma = std::sqrt(oracle.var / blocks) / n;
    CHECK(std::abs(r.outage_frac() - oracle.mean / n) <= 3 * sigma);
    // The governing symbol never disagrees with itself.
    CHECK(r.counts[0][1] + r.counts[1][0] <= r.n_symbols - r.n_symbols / n);
  }
}

TEST_CASE("block mode rounds up to whole blocks") {
  SimConfig cfg = cfg_with(10, 1);
  cfg.mode = SimMode::Block;
  cfg.block_len = 4;
  CHECK(simulate(make(0, 0, 0.5), kEm, Scheme::Aggressive, cfg).n_symbols == 12);
}

TEST_CASE("determinism, threading and chunk merge") {
  const ChannelParams c = make(0, 0, 0.5);
  SimConfig cfg = cfg_with(100000, 77);
  cfg.chunk_symbols = 12500;
  cfg.threads = 1;
  const SimResult serial = simulate(c, kEm, Scheme::Conventional, cfg);
  CHECK(same(serial, simulate(c, kEm, Scheme::Conventional, cfg)));
  cfg.threads = 4;
  CHECK(same(serial, simulate(c, kEm, Scheme::Conventional, cfg)));

  const Policy pol = make_policy(Scheme::Conventional, c, kEm);
  std::vector<SimResult> chunks;
  for (std::uint64_t i = 0; i < 8; ++i) chunks.push_back(simulate_chunk(c, kEm, pol, cfg, i, 12500));
  const SimResult merged = aggregate(chunks);
  CHECK(merged.counts == serial.counts);
  CHECK(same(merged, serial));
}

TEST_CASE("aggregate") {
  const ChannelParams c = make(0, 0, 0.3);
  const Policy pol = make_policy(Scheme::Aggressive, c, kEm);
  const SimConfig cfg = cfg_with(1000, 4);
  const SimResult a = simulate_chunk(c, kEm, pol, cfg, 0, 5000);
  const SimResult b = simulate_chunk(c, kEm, pol, cfg, 1, 5000);
  CHECK(same(aggregate(std::vector{a}), a));
  CHECK(aggregate(std::vector{a, b}).avg_se() == doctest::Approx((a.avg_se() + b.avg_se()) / 2));

  SimResult other = b;
  other.scheme = Scheme::Conservative;
  CHECK_THROWS_AS(aggregate(std::vector{a, other}), SimMismatchError);
  other = b;
  other.seed_used = 5;
  CHECK_THROWS_AS(aggregate(std::vector{a, other}), SimMismatchError);
  CHECK_THROWS_AS(aggregate(std::vector<SimResult>{}), SimMismatchError);
}

TEST_CASE("config errors propagate") {
  SimConfig cfg = cfg_with(0, 1);
  CHECK_THROWS_AS(simulate(make(0, 0, 0.5), kEm, Scheme::Conventional, cfg), ConfigError);
  CHECK_THROWS_AS(simulate(make(0, 0, 0.5), ErrorModel{0.2, 0.5}, Scheme::Conventional,
                           cfg_with(10, 1)),
                  ConfigError);
}
