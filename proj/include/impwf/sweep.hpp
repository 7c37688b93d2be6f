#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "impwf/adaptation.hpp"
#include "impwf/channel.hpp"
#include "impwf/simulate.hpp"

namespace impwf {

/// 0.0, 0.1, ..., 1.0
std::vector<double> default_p_grid();

/// Comma list ("0,0.25,1") or inclusive range "start:step:stop".
std::vector<double> parse_p_grid(std::string_view text);
std::vector<Scheme> parse_schemes(std::string_view text);
SimMode parse_mode(std::string_view text);
std::string_view mode_name(SimMode mode);

struct SweepSpec {
  std::vector<double> p_grid = default_p_grid();
  ChannelParams params;  // p is overwritten per grid point
  ErrorModel em;
  SimConfig sim;
  std::vector<Scheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};

  /// Throws ConfigError before any computation runs.
  void validate() const;
  /// Seed of the simulation at grid index i.
  std::uint64_t row_seed(std::size_t i) const { return sim.seed + i; }
};

struct CsvRow {
  double p = 0.0;
  Scheme scheme = Scheme::Conventional;
  double rate_theory = 0.0;
  std::optional<double> rate_sim;
  double outage_theory = 0.0;
  std::optional<double> outage_sim;
  std::optional<double> mean_power_sim;
  std::optional<std::uint64_t> seed;

  bool operator==(const CsvRow&) const = default;
};

struct SweepPoint {
  CsvRow row;
  std::optional<SimResult> sim;
};

/// One point per (p, scheme), ordered by p then by the scheme list.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec, bool with_simulation);

std::vector<CsvRow> rows_of(std::span<const SweepPoint> points);

inline constexpr std::string_view kCsvHeader =
    "p,scheme,rate_theory,rate_sim,outage_theory,outage_sim,mean_power_sim,seed";

/// %.15g: enough digits that parse -> serialize reproduces the text.
std::string format_number(double value);

void write_csv(std::ostream& out, std::span<const CsvRow> rows);
/// Throws std::runtime_error on a malformed file.
std::vector<CsvRow> read_csv(std::istream& in);

struct CrossoverReport {
  double snr_db;
  double mu_db;
  std::optional<double> p_th;  // empty when there is no crossover
  double rate_aggressive_p0;
  double rate_conservative;
};

CrossoverReport crossover_report(const ChannelParams& params, const ErrorModel& em);

inline constexpr std::string_view kCrossoverHeader =
    "snr_db,mu_db,p_th,rate_aggressive_p0,rate_conservative,status";
void write_crossover(std::ostream& out, std::span<const CrossoverReport> reports);

struct VerifyRow {
  SweepPoint point;
  double std_error;
  double tolerance;
  bool pass;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_pass() const;
};

inline constexpr double kDefaultVerifyFloor = 0.005;

/// Simulates every point and passes rows with
/// |rate_sim - rate_theory| <= max(abs_floor, 3 standard errors).
VerifyReport verify(const SweepSpec& spec, double abs_floor = kDefaultVerifyFloor);

inline constexpr std::string_view kVerifyHeader =
    "p,scheme,rate_theory,rate_sim,std_error,tolerance,outage_theory,outage_sim,status";
void write_verify(std::ostream& out, const VerifyReport& report);

/// Reads a JSON object whose keys match the CLI flag names (snr-db, mu-db, pb,
/// ber-const, p-grid, symbols, seed, mode, block-len, schemes, threads;
/// '_' may replace '-'). Unknown keys are a ConfigError.
void apply_json_config(std::string_view json_text, SweepSpec& spec,
                       std::optional<std::string>* out_path = nullptr);

}  // namespace impwf
