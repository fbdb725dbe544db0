// Command-line front end for the lagtime library.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lagtime/figures.hpp"
#include "lagtime/verify.hpp"
#include "lagtime/version.hpp"

namespace {

using lagtime::Grid1D;
using lagtime::UsageError;
using Json = nlohmann::ordered_json;

enum Exit : int { kOk = 0, kUsage = 1, kTolerance = 2, kIo = 3 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  double alpha = 2.0;
  double omega0 = 1.0;
  int n = 0;
  int m = 0;
  int nmax = 20;
  double tau = 0.0;
  double x = 0.0;
  int s = 1;
  std::string grid;
  std::string energy_grid;
  std::string domain = "energy";
  int quad_order = 0;
  std::string out;
};

struct GridSpec {
  double lo, hi;
  std::size_t count;
};

GridSpec parse_grid(const std::string& text, const std::string& flag) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos) {
    throw UsageError(flag + " must have the form MIN:MAX:COUNT");
  }
  try {
    std::size_t used = 0;
    const std::string slo = text.substr(0, a), shi = text.substr(a + 1, b - a - 1), sc = text.substr(b + 1);
    const double lo = std::stod(slo, &used);
    if (used != slo.size()) throw std::invalid_argument(slo);
    const double hi = std::stod(shi, &used);
    if (used != shi.size()) throw std::invalid_argument(shi);
    const long long count = std::stoll(sc, &used);
    if (used != sc.size()) throw std::invalid_argument(sc);
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) throw UsageError(flag + ": need finite MIN < MAX");
    if (count < 2 || count > 10000000) throw UsageError(flag + ": COUNT must lie in [2, 10000000]");
    return {lo, hi, static_cast<std::size_t>(count)};
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const UsageError*>(&e)) throw;
    throw UsageError(flag + " must have the form MIN:MAX:COUNT with numeric fields");
  }
}

Grid1D grid_or(const std::string& text, const std::string& flag, Grid1D fallback) {
  if (text.empty()) return fallback;
  const auto g = parse_grid(text, flag);
  return Grid1D::uniform(g.lo, g.hi, g.count);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

// lower is an integer bound.
void check_alpha(double alpha, int lower, bool inclusive, const std::string& why = "") {
  const bool ok = std::isfinite(alpha) && (inclusive ? alpha >= lower : alpha > lower);
  if (!ok) {
    std::string msg = "--alpha must be " + std::string(inclusive ? ">= " : "> ") + std::to_string(lower);
    if (!why.empty()) msg += " (" + why + ")";
    throw UsageError(msg);
  }
}

void check_omega0(double w0) { require(std::isfinite(w0) && w0 > 0.0, "--omega0 must be finite and positive"); }
void check_n(int n, const std::string& flag) { require(n >= 0 && n <= 1000, flag + " must lie in [0, 1000]"); }
void check_s(int s) { require(s == 1 || s == -1, "--s must be +1 or -1"); }
void check_finite(double v, const std::string& flag) { require(std::isfinite(v), flag + " must be finite"); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

// Writes to --out when given, otherwise to stdout.
void emit(const Options& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content << std::flush;
    if (!std::cout) throw IoError("failed writing to stdout");
  } else {
    write_file(o.out, content);
  }
}

void write_tables(const std::string& dir, const std::vector<lagtime::Table>& tables) {
  std::filesystem::path root(dir.empty() ? "." : dir);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec || !std::filesystem::is_directory(root)) throw IoError("cannot use output directory " + root.string());
  for (const auto& t : tables) {
    const auto path = root / (t.name + ".csv");
    write_file(path, lagtime::format_csv(t));
    std::cerr << "wrote " << path.string() << "\n";
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int run_mode_figure(const std::string& name, const Options& o, lagtime::ModePanelConfig cfg, bool alpha_set,
                    bool n_set) {
  if (alpha_set) cfg.alpha = o.alpha;
  check_alpha(cfg.alpha, 0, true, "mode values at omega = 0 are needed");
  check_omega0(o.omega0);
  check_finite(o.tau, "--tau");
  if (n_set) {
    require(o.n >= 0 && o.n <= 50, "--n must lie in [0, 50] (highest mode plotted)");
    cfg.max_n = o.n;
  }
  cfg.omega0 = o.omega0;
  cfg.tau = o.tau;
  cfg.time_grid = grid_or(o.grid, "--grid", cfg.time_grid);
  cfg.energy_grid = grid_or(o.energy_grid, "--energy-grid", cfg.energy_grid);
  require(cfg.energy_grid[0] >= 0.0, "--energy-grid must start at omega >= 0");
  write_tables(o.out, lagtime::mode_panels(name, cfg));
  return kOk;
}

int run_sweep_figure(const std::string& name, const Options& o) {
  check_omega0(o.omega0);
  lagtime::AlphaSweepConfig cfg;
  cfg.omega0 = o.omega0;
  if (!o.grid.empty()) {
    const auto g = parse_grid(o.grid, "--grid");
    require(g.lo >= 2.0, "--grid must start at alpha >= 2");
    cfg.alpha_min = g.lo;
    cfg.alpha_max = g.hi;
    cfg.count = static_cast<int>(g.count);
  }
  write_tables(o.out, {name == "fig3" ? lagtime::fig3_table(cfg) : lagtime::fig4_table(cfg)});
  return kOk;
}

int run_arrival_figure(const std::string& name, const Options& o, lagtime::ArrivalPanelConfig cfg, bool alpha_set,
                       bool m_set, bool n_set) {
  if (alpha_set) cfg.alpha = o.alpha;
  check_alpha(cfg.alpha, -1, false);
  check_omega0(o.omega0);
  check_finite(o.x, "--x");
  check_s(o.s);
  if (m_set) check_n(o.m, "--m"), cfg.detector_n = o.m;
  if (n_set) check_n(o.n, "--n"), cfg.state_n = o.n;
  cfg.omega0 = o.omega0;
  cfg.x = o.x;
  cfg.s = o.s;
  cfg.u_grid = grid_or(o.grid, "--grid", cfg.u_grid);
  write_tables(o.out, {lagtime::arrival_table(name, cfg)});
  return kOk;
}

int run_modes(const Options& o) {
  check_omega0(o.omega0);
  check_n(o.n, "--n");
  check_finite(o.tau, "--tau");
  require(o.domain == "energy" || o.domain == "time", "--domain must be 'energy' or 'time'");
  if (o.domain == "energy") {
    check_alpha(o.alpha, -1, false);
    const auto grid = grid_or(o.grid, "--grid", Grid1D::uniform(0.0, 30.0 * o.omega0, 601));
    require(grid[0] >= 0.0, "--grid must start at omega >= 0");
    require(o.alpha >= 0.0 || grid[0] > 0.0, "--grid must exclude omega = 0 when --alpha < 0");
    const lagtime::ModeSpec mode(o.n, o.alpha, o.omega0);
    lagtime::Table t{"modes", {"omega", "phi"}, {}};
    for (double w : grid.points()) t.rows.push_back({w, lagtime::mode_energy(mode, w)});
    emit(o, lagtime::format_csv(t));
    return kOk;
  }
  check_alpha(o.alpha, -1, false);
  const lagtime::PacketSpec packet{lagtime::ModeSpec(o.n, o.alpha, o.omega0), o.tau};
  const auto grid = grid_or(o.grid, "--grid", Grid1D::uniform(o.tau - 6.0 / o.omega0, o.tau + 6.0 / o.omega0, 1201));
  lagtime::ComplexSamples psi = [&] {
    if (o.quad_order > 0) {
      require(o.quad_order >= o.n + 24 && o.quad_order <= 512, "--quad-order must lie in [n + 24, 512]");
      return lagtime::psi_numeric(packet, grid, o.quad_order);
    }
    require(o.quad_order == 0, "--quad-order must be positive");
    return lagtime::psi_closed_form(packet, grid);
  }();
  lagtime::Table t{"modes", {"t", "re", "im", "density"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto v = psi.values[i];
    t.rows.push_back({grid[i], v.real(), v.imag(), std::norm(v)});
  }
  emit(o, lagtime::format_csv(t));
  return kOk;
}

int run_spectrum(const Options& o) {
  check_alpha(o.alpha, -1, false);
  check_omega0(o.omega0);
  require(o.nmax >= 2 && o.nmax <= 2048, "--nmax must lie in [2, 2048]");
  const auto s = lagtime::spectrum_truncated(o.nmax, o.alpha, o.omega0);
  lagtime::Table t{"spectrum", {"k", "eigenvalue"}, {}};
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
    t.rows.push_back({static_cast<double>(k), s.eigenvalues[k]});
  }
  emit(o, lagtime::format_csv(t));
  return kOk;
}

int run_uncertainty(const Options& o) {
  check_alpha(o.alpha, 2, true, "time moments need alpha >= 2");
  check_omega0(o.omega0);
  check_n(o.n, "--n");
  check_finite(o.tau, "--tau");
  const auto r = lagtime::uncertainty_report(lagtime::ModeSpec(o.n, o.alpha, o.omega0), o.tau);
  const auto t = lagtime::time_moments({r.mode, o.tau});
  Json j;
  j["version"] = lagtime::kVersion;
  j["n"] = o.n;
  j["alpha"] = o.alpha;
  j["omega0"] = o.omega0;
  j["tau"] = o.tau;
  j["mean_H"] = r.mean_H;
  j["second_H"] = r.second_H;
  j["var_H"] = r.var_H;
  j["mean_T"] = r.mean_T;
  j["second_T"] = r.second_T;
  j["var_T"] = r.var_T;
  j["var_T_printed"] = t.variance_printed;
  j["var_T_expansion"] = t.variance_expansion;
  j["var_T_quadrature"] = t.variance_quadrature;
  j["delta_H"] = std::sqrt(r.var_H);
  j["delta_T"] = std::sqrt(r.var_T);
  j["product"] = r.product;
  j["heisenberg_margin"] = r.product - 0.5;
  bool pass = r.product >= 0.5 - 1e-9;
  for (const auto& [k, v] : r.oracle_residuals) {
    j[k] = v;
    const double tol = k.rfind("var_T", 0) == 0 ? lagtime::kTimeVarianceTolerance : 1e-11;
    pass = pass && v <= tol;
  }
  j["pass"] = pass;
  emit(o, dump(j));
  return pass ? kOk : kTolerance;
}

int run_arrival(const Options& o) {
  check_alpha(o.alpha, -1, false);
  check_omega0(o.omega0);
  check_n(o.m, "--m");
  check_n(o.n, "--n");
  check_finite(o.x, "--x");
  check_s(o.s);
  const double c = o.s * o.x;
  const auto grid = grid_or(o.grid, "--grid", Grid1D::uniform(c - 8.0 / o.omega0, c + 8.0 / o.omega0, 801));
  const lagtime::ModeSpec det(o.m, o.alpha, o.omega0);
  lagtime::Table t{"arrival", {"tau", "re", "im", "density"}, {}};
  for (double tau : grid.points()) {
    const auto a = lagtime::toa_amplitude_mode(lagtime::ArrivalQuery(det, tau, o.x, o.s), o.n);
    t.rows.push_back({tau, a.real(), a.imag(), std::norm(a)});
  }
  emit(o, lagtime::format_csv(t));
  return kOk;
}

int run_verify(const Options& o) {
  lagtime::VerifyConfig cfg;
  cfg.alpha = o.alpha;
  cfg.omega0 = o.omega0;
  cfg.nmax = o.nmax;
  const auto rep = lagtime::run_verify(cfg);
  Json j;
  j["version"] = lagtime::kVersion;
  j["alpha"] = cfg.alpha;
  j["omega0"] = cfg.omega0;
  j["nmax"] = cfg.nmax;
  for (const auto& c : rep.checks) j[c.name] = c.value;
  for (const auto& c : rep.checks) j[c.name + (c.lower_bound ? "_min_allowed" : "_tolerance")] = c.tolerance;
  for (const auto& [k, v] : rep.values) j[k] = v;
  j["pass"] = rep.passed();
  emit(o, dump(j));
  for (const auto& c : rep.checks) {
    if (!c.passed()) std::cerr << "FAIL " << c.name << " = " << c.value << "\n";
  }
  return rep.passed() ? kOk : kTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laguerre time/energy modes: figure data and verification reports", "lagtime"};
  app.set_version_flag("--version", std::string(lagtime::kVersion));
  app.require_subcommand(1);

  Options o;
  std::vector<CLI::App*> subs;
  std::map<std::string, std::map<std::string, CLI::Option*>> opts;

  auto sub = [&](const std::string& name, const std::string& desc) {
    auto* s = app.add_subcommand(name, desc);
    subs.push_back(s);
    return s;
  };
  auto add_alpha = [&](CLI::App* s, const std::string& def) {
    opts[s->get_name()]["alpha"] = s->add_option("--alpha", o.alpha, "Mode index alpha (default " + def + ")");
  };
  auto add_common = [&](CLI::App* s) { s->add_option("--omega0", o.omega0, "Energy scale omega0 (default 1)"); };

  for (const std::string fig : {"fig1", "fig2"}) {
    auto* s = sub(fig, fig == "fig1" ? "Lowest modes at alpha=2 (energy and time panels)"
                                     : "Lowest modes at alpha=20 (energy and time panels)");
    add_alpha(s, fig == "fig1" ? "2" : "20");
    add_common(s);
    opts[fig]["n"] = s->add_option("--n", o.n, "Highest mode index (default 3)");
    s->add_option("--tau", o.tau, "Packet centre tau (default 0)");
    s->add_option("--grid", o.grid, "Time grid for t - tau as MIN:MAX:COUNT");
    s->add_option("--energy-grid", o.energy_grid, "Energy grid as MIN:MAX:COUNT");
    s->add_option("--out", o.out, "Output directory (default .)");
  }
  for (const std::string fig : {"fig3", "fig4"}) {
    auto* s = sub(fig, fig == "fig3" ? "Time spread versus alpha for n=0,3" : "Uncertainty product versus alpha for n=0,3");
    add_common(s);
    s->add_option("--grid", o.grid, "Alpha grid as MIN:MAX:COUNT (default 2:40:77)");
    s->add_option("--out", o.out, "Output directory (default .)");
  }
  for (const std::string fig : {"fig5", "fig6"}) {
    auto* s = sub(fig, fig == "fig5" ? "Arrival density for m=1, n=3 at alpha=2"
                                     : "Arrival density for m=1, n=3 at alpha=20");
    add_alpha(s, fig == "fig5" ? "2" : "20");
    add_common(s);
    opts[fig]["m"] = s->add_option("--m", o.m, "Detector mode m (default 1)");
    opts[fig]["n"] = s->add_option("--n", o.n, "State mode n (default 3)");
    s->add_option("--x", o.x, "Detector position x (default 0)");
    s->add_option("--s", o.s, "Direction s = +1 or -1 (default 1)");
    s->add_option("--grid", o.grid, "Grid of omega0 (tau - s x) as MIN:MAX:COUNT (default -8:8:801)");
    s->add_option("--out", o.out, "Output directory (default .)");
  }
  {
    auto* s = sub("modes", "Tabulate one mode in energy or time");
    add_alpha(s, "2");
    add_common(s);
    s->add_option("--n", o.n, "Mode index n (default 0)");
    s->add_option("--tau", o.tau, "Packet centre tau (default 0)");
    s->add_option("--domain", o.domain, "energy or time (default energy)");
    s->add_option("--grid", o.grid, "Grid as MIN:MAX:COUNT");
    s->add_option("--quad-order", o.quad_order, "Use the numeric Fourier oracle with this order (time domain)");
    s->add_option("--out", o.out, "Output file (default stdout)");
  }
  {
    auto* s = sub("spectrum", "Eigenvalues of the truncated Hamiltonian");
    add_alpha(s, "2");
    add_common(s);
    s->add_option("--nmax", o.nmax, "Truncation dimension (default 20)");
    s->add_option("--out", o.out, "Output file (default stdout)");
  }
  {
    auto* s = sub("uncertainty", "Energy and time moments of one mode as JSON");
    add_alpha(s, "2");
    add_common(s);
    s->add_option("--n", o.n, "Mode index n (default 0)");
    s->add_option("--tau", o.tau, "Packet centre tau (default 0)");
    s->add_option("--out", o.out, "Output file (default stdout)");
  }
  {
    auto* s = sub("arrival", "Arrival amplitude <m tau x s|n> over a tau grid");
    add_alpha(s, "2");
    add_common(s);
    s->add_option("--m", o.m, "Detector mode m (default 0)");
    s->add_option("--n", o.n, "State mode n (default 0)");
    s->add_option("--x", o.x, "Detector position x (default 0)");
    s->add_option("--s", o.s, "Direction s = +1 or -1 (default 1)");
    s->add_option("--grid", o.grid, "Tau grid as MIN:MAX:COUNT (default s x -/+ 8/omega0, 801 points)");
    s->add_option("--out", o.out, "Output file (default stdout)");
  }
  {
    auto* s = sub("verify", "Check every closed form against its oracle; JSON report");
    add_alpha(s, "2");
    add_common(s);
    s->add_option("--nmax", o.nmax, "Highest mode index checked, at most 64 (default 20)");
    s->add_option("--out", o.out, "Output file (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (auto* s : subs) {
      if (!s->parsed()) continue;
      const std::string name = s->get_name();
      auto given = [&](const char* key) {
        const auto it = opts[name].find(key);
        return it != opts[name].end() && it->second->count() > 0;
      };
      if (name == "fig1") return run_mode_figure(name, o, lagtime::fig1_defaults(), given("alpha"), given("n"));
      if (name == "fig2") return run_mode_figure(name, o, lagtime::fig2_defaults(), given("alpha"), given("n"));
      if (name == "fig3" || name == "fig4") return run_sweep_figure(name, o);
      if (name == "fig5") return run_arrival_figure(name, o, lagtime::fig5_defaults(), given("alpha"), given("m"), given("n"));
      if (name == "fig6") return run_arrival_figure(name, o, lagtime::fig6_defaults(), given("alpha"), given("m"), given("n"));
      if (name == "modes") return run_modes(o);
      if (name == "spectrum") return run_spectrum(o);
      if (name == "uncertainty") return run_uncertainty(o);
      if (name == "arrival") return run_arrival(o);
      if (name == "verify") return run_verify(o);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const lagtime::DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTolerance;
  }
  return kUsage;
}
