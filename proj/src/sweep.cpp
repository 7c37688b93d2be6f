#include "impwf/sweep.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace impwf {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& s, std::string_view what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ConfigError("cannot parse " + std::string(what) + " from '" + s + "'");
  }
  return v;
}

// Grid points built as start + i * step pick up representation noise
// (0.30000000000000004); snap them to 12 significant digits.
double snap(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string opt_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

std::optional<double> parse_opt_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, "csv field");
}

}  // namespace

std::vector<double> default_p_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::vector<double> parse_p_grid(std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("p-grid range must be start:step:stop");
    const double start = parse_double(trim(parts[0]), "p-grid start");
    const double step = parse_double(trim(parts[1]), "p-grid step");
    const double stop = parse_double(trim(parts[2]), "p-grid stop");
    if (!(step > 0.0)) throw ConfigError("p-grid step must be positive");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
      const double v = snap(start + i * step);
      if (v > stop + 1e-12 * std::max(1.0, std::abs(stop))) break;
      grid.push_back(v);
      if (grid.size() > 1000000) throw ConfigError("p-grid range too long");
    }
    return grid;
  }
  std::vector<double> grid;
  for (const auto& item : split(text, ',')) grid.push_back(parse_double(trim(item), "p-grid value"));
  return grid;
}

std::vector<Scheme> parse_schemes(std::string_view text) {
  std::vector<Scheme> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_scheme(trim(item)));
  return out;
}

SimMode parse_mode(std::string_view text) {
  if (text == "per-symbol") return SimMode::PerSymbolGoverning;
  if (text == "block") return SimMode::Block;
  throw ConfigError("unknown mode '" + std::string(text) + "' (per-symbol|block)");
}

std::string_view mode_name(SimMode mode) {
  return mode == SimMode::Block ? "block" : "per-symbol";
}

void SweepSpec::validate() const {
  if (p_grid.empty()) throw ConfigError("p-grid is empty");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0 && p_grid[i] <= 1.0)) throw ConfigError("p-grid values must lie in [0, 1]");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) {
      throw ConfigError("p-grid must be strictly increasing");
    }
  }
  if (schemes.empty()) throw ConfigError("no schemes selected");
  ChannelParams probe = params;
  probe.p = p_grid.front();
  probe.validate();
  em.validate();
  sim.validate();
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec, bool with_simulation) {
  spec.validate();
  std::vector<SweepPoint> points;
  for (std::size_t i = 0; i < spec.p_grid.size(); ++i) {
    ChannelParams params = spec.params;
    params.p = spec.p_grid[i];
    SimConfig cfg = spec.sim;
    cfg.seed = spec.row_seed(i);
    for (Scheme scheme : spec.schemes) {
      SweepPoint pt;
      pt.row.p = params.p;
      pt.row.scheme = scheme;
      pt.row.rate_theory = rate_theory(scheme, params, spec.em);
      pt.row.outage_theory = outage_theory(scheme, params, spec.em);
      if (with_simulation) {
        const SimResult r = simulate(params, spec.em, scheme, cfg);
        pt.row.rate_sim = r.avg_se();
        pt.row.outage_sim = r.outage_frac();
        pt.row.mean_power_sim = r.mean_power_frac();
        pt.row.seed = r.seed_used;
        pt.sim = r;
      }
      points.push_back(std::move(pt));
    }
  }
  return points;
}

std::vector<CsvRow> rows_of(std::span<const SweepPoint> points) {
  std::vector<CsvRow> rows;
  rows.reserve(points.size());
  for (const auto& pt : points) rows.push_back(pt.row);
  return rows;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

void write_csv(std::ostream& out, std::span<const CsvRow> rows) {
  out << kCsvHeader << '\n';
  for (const CsvRow& r : rows) {
    out << format_number(r.p) << ',' << scheme_name(r.scheme) << ','
        << format_number(r.rate_theory) << ',' << opt_number(r.rate_sim) << ','
        << format_number(r.outage_theory) << ',' << opt_number(r.outage_sim) << ','
        << opt_number(r.mean_power_sim) << ',' << (r.seed ? std::to_string(*r.seed) : "")
        << '\n';
  }
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("read_csv: missing or unexpected header");
  }
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw std::runtime_error("read_csv: expected 8 fields in '" + line + "'");
    CsvRow r;
    r.p = parse_double(f[0], "p");
    r.scheme = parse_scheme(f[1]);
    r.rate_theory = parse_double(f[2], "rate_theory");
    r.rate_sim = parse_opt_number(f[3]);
    r.outage_theory = parse_double(f[4], "outage_theory");
    r.outage_sim = parse_opt_number(f[5]);
    r.mean_power_sim = parse_opt_number(f[6]);
    if (!f[7].empty()) r.seed = std::stoull(f[7]);
    rows.push_back(r);
  }
  return rows;
}

CrossoverReport crossover_report(const ChannelParams& params, const ErrorModel& em) {
  ChannelParams clean = params;
  clean.p = 0.0;
  CrossoverReport rep{params.snr_db, params.mu_db, std::nullopt, rate_aggressive(clean, em),
                      rate_conservative(params, em)};
  try {
    rep.p_th = crossover_pth(params, em);
  } catch (const NoCrossoverError&) {
  }
  return rep;
}

void write_crossover(std::ostream& out, std::span<const CrossoverReport> reports) {
  out << kCrossoverHeader << '\n';
  for (const auto& r : reports) {
    out << format_number(r.snr_db) << ',' << format_number(r.mu_db) << ','
        << opt_number(r.p_th) << ',' << format_number(r.rate_aggressive_p0) << ','
        << format_number(r.rate_conservative) << ',' << (r.p_th ? "ok" : "no_crossover") << '\n';
  }
}

bool VerifyReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });
}

VerifyReport verify(const SweepSpec& spec, double abs_floor) {
  VerifyReport report;
  for (SweepPoint& pt : run_sweep(spec, true)) {
    const double se = pt.sim->rate_std_error();
    const double tol = std::max(abs_floor, 3.0 * se);
    const bool pass = std::abs(*pt.row.rate_sim - pt.row.rate_theory) <= tol;
    report.rows.push_back({std::move(pt), se, tol, pass});
  }
  return report;
}

void write_verify(std::ostream& out, const VerifyReport& report) {
  out << kVerifyHeader << '\n';
  for (const auto& v : report.rows) {
    const CsvRow& r = v.point.row;
    out << format_number(r.p) << ',' << scheme_name(r.scheme) << ','
        << format_number(r.rate_theory) << ',' << opt_number(r.rate_sim) << ','
        << format_number(v.std_error) << ',' << format_number(v.tolerance) << ','
        << format_number(r.outage_theory) << ',' << opt_number(r.outage_sim) << ','
        << (v.pass ? "pass" : "FAIL") << '\n';
  }
}

void apply_json_config(std::string_view json_text, SweepSpec& spec,
                       std::optional<std::string>* out_path) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  try {
    for (const auto& [raw_key, value] : doc.items()) {
      std::string key = raw_key;
      std::replace(key.begin(), key.end(), '_', '-');
      if (key == "snr-db") {
        spec.params.snr_db = value.get<double>();
      } else if (key == "mu-db") {
        spec.params.mu_db = value.get<double>();
      } else if (key == "pb") {
        spec.em.target_pb = value.get<double>();
      } else if (key == "ber-const") {
        spec.em.c = value.get<double>();
      } else if (key == "p-grid") {
        spec.p_grid = value.is_string() ? parse_p_grid(value.get<std::string>())
                                        : value.get<std::vector<double>>();
      } else if (key == "symbols") {
        spec.sim.n_symbols = value.get<std::uint64_t>();
      } else if (key == "seed") {
        spec.sim.seed = value.get<std::uint64_t>();
      } else if (key == "mode") {
        spec.sim.mode = parse_mode(value.get<std::string>());
      } else if (key == "block-len") {
        spec.sim.block_len = value.get<std::size_t>();
      } else if (key == "threads") {
        spec.sim.threads = value.get<unsigned>();
      } else if (key == "schemes") {
        if (value.is_string()) {
          spec.schemes = parse_schemes(value.get<std::string>());
        } else {
          spec.schemes.clear();
          for (const auto& s : value) spec.schemes.push_back(parse_scheme(s.get<std::string>()));
        }
      } else if (key == "out") {
        if (out_path) *out_path = value.get<std::string>();
      } else {
        throw ConfigError("unknown config key '" + raw_key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
}

}  // namespace impwf
