// impwf: water-filling under impulsive interference, theory and Monte Carlo.
//
//   impwf theory    [flags]   closed-form rate and outage per (p, scheme)
//   impwf simulate  [flags]   same rows plus Monte Carlo columns
//   impwf crossover [flags]   p where aggressive and conservative rates meet
//   impwf verify    [flags]   simulation vs theory, exit 2 on any failure
//
// A JSON file given with --config supplies the same keys as the flags;
// flags given on the command line win. Exit codes: 0 ok, 1 configuration
// error, 2 verification failure.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "impwf/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;

struct Flags {
  std::string config;
  std::optional<double> snr_db;
  std::optional<double> mu_db;
  std::optional<double> pb;
  std::optional<double> ber_const;
  std::optional<std::string> p_grid;
  std::optional<std::uint64_t> symbols;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::size_t> block_len;
  std::optional<std::string> schemes;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::optional<std::string> mu_sweep;
  double abs_floor = impwf::kDefaultVerifyFloor;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "JSON config file with the same keys as the flags");
  cmd.add_option("--snr-db", f.snr_db, "mean SNR in dB (default 0)");
  cmd.add_option("--mu-db", f.mu_db, "interference-to-noise ratio in dB (default 0)");
  cmd.add_option("--pb", f.pb, "target bit error probability (default 1e-3)");
  cmd.add_option("--ber-const", f.ber_const, "BER approximation constant c (default 0.2)");
  cmd.add_option("--p-grid", f.p_grid, "impulse probabilities: a,b,c or start:step:stop");
  cmd.add_option("--schemes", f.schemes, "comma list of conventional,aggressive,conservative");
  cmd.add_option("--out", f.out, "write output here instead of stdout");
}

void add_simulation(CLI::App& cmd, Flags& f) {
  cmd.add_option("--symbols", f.symbols, "symbols per point (default 100000)");
  cmd.add_option("--seed", f.seed, "base seed; row i uses seed + i (default 1)");
  cmd.add_option("--mode", f.mode, "per-symbol (default) or block");
  cmd.add_option("--block-len", f.block_len, "symbols per coherence block (default 4)");
  cmd.add_option("--threads", f.threads, "worker threads, 0 = all cores (does not change output)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw impwf::ConfigError("cannot open config file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

impwf::SweepSpec build_spec(const Flags& f, std::optional<std::string>& out_path) {
  impwf::SweepSpec spec;
  if (!f.config.empty()) impwf::apply_json_config(read_file(f.config), spec, &out_path);
  if (f.snr_db) spec.params.snr_db = *f.snr_db;
  if (f.mu_db) spec.params.mu_db = *f.mu_db;
  if (f.pb) spec.em.target_pb = *f.pb;
  if (f.ber_const) spec.em.c = *f.ber_const;
  if (f.p_grid) spec.p_grid = impwf::parse_p_grid(*f.p_grid);
  if (f.symbols) spec.sim.n_symbols = *f.symbols;
  if (f.seed) spec.sim.seed = *f.seed;
  if (f.mode) spec.sim.mode = impwf::parse_mode(*f.mode);
  if (f.block_len) spec.sim.block_len = *f.block_len;
  if (f.schemes) spec.schemes = impwf::parse_schemes(*f.schemes);
  if (f.threads) spec.sim.threads = *f.threads;
  if (f.out) out_path = *f.out;
  spec.validate();
  return spec;
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw impwf::ConfigError("cannot write '" + *path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Water-filling adaptation under Bernoulli-Gaussian impulsive interference"};
  app.require_subcommand(1);

  Flags f;
  auto* theory = app.add_subcommand("theory", "closed-form rates and outage per (p, scheme)");
  auto* simulate = app.add_subcommand("simulate", "theory plus Monte Carlo columns");
  auto* crossover = app.add_subcommand("crossover", "aggressive/conservative crossover p_th");
  auto* verify = app.add_subcommand("verify", "flag rows where simulation misses theory");
  for (auto* cmd : {theory, simulate, crossover, verify}) add_common(*cmd, f);
  for (auto* cmd : {simulate, verify}) add_simulation(*cmd, f);
  crossover->add_option("--mu-sweep", f.mu_sweep, "comma list of mu values in dB, one line each");
  verify->add_option("--abs-floor", f.abs_floor, "minimum allowed |sim - theory| (default 0.005)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    std::optional<std::string> out_path;
    const impwf::SweepSpec spec = build_spec(f, out_path);
    std::ostringstream text;

    if (theory->parsed() || simulate->parsed()) {
      const auto points = impwf::run_sweep(spec, simulate->parsed());
      const auto rows = impwf::rows_of(points);
      impwf::write_csv(text, rows);
      emit(out_path, text.str());
      return kExitOk;
    }

    if (crossover->parsed()) {
      std::vector<double> mus{spec.params.mu_db};
      if (f.mu_sweep) {
        mus.clear();
        std::stringstream ss(*f.mu_sweep);
        for (std::string item; std::getline(ss, item, ',');) mus.push_back(std::stod(item));
      }
      std::vector<impwf::CrossoverReport> reports;
      for (double mu : mus) {
        impwf::ChannelParams params = spec.params;
        params.mu_db = mu;
        params.validate();
        reports.push_back(impwf::crossover_report(params, spec.em));
      }
      impwf::write_crossover(text, reports);
      emit(out_path, text.str());
      return kExitOk;
    }

    const impwf::VerifyReport report = impwf::verify(spec, f.abs_floor);
    impwf::write_verify(text, report);
    emit(out_path, text.str());
    std::size_t failed = 0;
    for (const auto& r : report.rows) failed += !r.pass;
    std::cerr << (failed ? "verify: FAILED " : "verify: ok ") << report.rows.size() - failed
              << "/" << report.rows.size() << " rows within tolerance\n";
    return failed ? kExitVerify : kExitOk;
  } catch (const impwf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
