#pragma once

// Data tables behind the figure subcommands, plus deterministic CSV output.

#include <cstdio>
#include <string>
#include <vector>

#include "lagtime/arrival.hpp"
#include "lagtime/errors.hpp"
#include "lagtime/modes.hpp"
#include "lagtime/operators.hpp"
#include "lagtime/quadrature.hpp"
#include "lagtime/timerep.hpp"

namespace lagtime {

struct Table {
  std::string name;  // file stem, e.g. "fig1_energy"
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits in scientific notation.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

/// Comma-separated, header line first, LF endings.
inline std::string format_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.header.size(); ++j) {
    if (j) out += ',';
    out += t.header[j];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw UsageError("format_csv: row width differs from header");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_number(row[j]);
    }
    out += '\n';
  }
  return out;
}

struct ModePanelConfig {
  double alpha = 2.0;
  double omega0 = 1.0;
  double tau = 0.0;
  int max_n = 3;
  Grid1D energy_grid = Grid1D::uniform(0.0, 30.0, 601);  // physical ω
  Grid1D time_grid = Grid1D::uniform(-6.0, 6.0, 1201);   // t - τ
};

inline ModePanelConfig fig1_defaults() { return {}; }

inline ModePanelConfig fig2_defaults() {
  ModePanelConfig c;
  c.alpha = 20.0;
  c.energy_grid = Grid1D::uniform(0.0, 60.0, 601);
  c.time_grid = Grid1D::uniform(-0.6, 0.6, 1201);
  return c;
}

/// Energy panel (omega, phi_0..phi_N) and time panel (t, psi2_0..psi2_N).
inline std::vector<Table> mode_panels(const std::string& stem, const ModePanelConfig& c) {
  Table energy{stem + "_energy", {"omega"}, {}};
  Table time{stem + "_time", {"t"}, {}};
  for (int n = 0; n <= c.max_n; ++n) {
    energy.header.push_back("phi_" + std::to_string(n));
    time.header.push_back("psi2_" + std::to_string(n));
  }
  std::vector<ModeSpec> modes;
  for (int n = 0; n <= c.max_n; ++n) modes.emplace_back(n, c.alpha, c.omega0);

  for (double w : c.energy_grid.points()) {
    std::vector<double> row{w};
    for (const auto& m : modes) row.push_back(mode_energy(m, w));
    energy.rows.push_back(std::move(row));
  }
  for (double s : c.time_grid.points()) {
    const double t = c.tau + s;
    std::vector<double> row{t};
    for (const auto& m : modes) row.push_back(std::norm(psi_closed_form({m, c.tau}, t)));
    time.rows.push_back(std::move(row));
  }
  return {std::move(energy), std::move(time)};
}

struct AlphaSweepConfig {
  double alpha_min = 2.0;
  double alpha_max = 40.0;
  int count = 77;  // step 0.5
  double omega0 = 1.0;
  std::vector<int> modes{0, 3};
};

inline Grid1D sweep_grid(const AlphaSweepConfig& c) {
  if (!(c.alpha_min >= 2.0)) throw UsageError("alpha sweep requires alpha >= 2");
  return Grid1D::uniform(c.alpha_min, c.alpha_max, static_cast<std::size_t>(c.count));
}

/// (alpha, deltaT_n...) with ΔT = sqrt((ΔT)²).
inline Table fig3_table(const AlphaSweepConfig& c) {
  Table t{"fig3", {"alpha"}, {}};
  for (int n : c.modes) t.header.push_back("deltaT_n" + std::to_string(n));
  const Grid1D grid = sweep_grid(c);
  for (double a : grid.points()) {
    std::vector<double> row{a};
    for (int n : c.modes) row.push_back(std::sqrt(time_moments({ModeSpec(n, a, c.omega0), 0.0}).variance));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// (alpha, product_n...) with product = ΔH ΔT.
inline Table fig4_table(const AlphaSweepConfig& c) {
  Table t{"fig4", {"alpha"}, {}};
  for (int n : c.modes) t.header.push_back("product_n" + std::to_string(n));
  const Grid1D grid = sweep_grid(c);
  for (double a : grid.points()) {
    std::vector<double> row{a};
    for (int n : c.modes) row.push_back(uncertainty_report(ModeSpec(n, a, c.omega0), 0.0).product);
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct ArrivalPanelConfig {
  double alpha = 2.0;
  double omega0 = 1.0;
  int detector_n = 1;  // m in <m τ x s|n>
  int state_n = 3;
  double x = 0.0;
  int s = 1;
  Grid1D u_grid = Grid1D::uniform(-8.0, 8.0, 801);  // ω0 (τ - s x)
};

inline ArrivalPanelConfig fig5_defaults() { return {}; }

inline ArrivalPanelConfig fig6_defaults() {
  ArrivalPanelConfig c;
  c.alpha = 20.0;
  return c;
}

/// (tau, density) for |<m τ x s|n>|².
inline Table arrival_table(const std::string& name, const ArrivalPanelConfig& c) {
  const ModeSpec det(c.detector_n, c.alpha, c.omega0);
  const auto state = StateCoefficients::basis(c.state_n, c.alpha, c.omega0);
  std::vector<double> taus;
  taus.reserve(c.u_grid.size());
  for (double u : c.u_grid.points()) taus.push_back(c.s * c.x + u / c.omega0);
  Table t{name, {"tau", "density"}, {}};
  for (double tau : taus) {
    t.rows.push_back({tau, std::norm(toa_amplitude_state(ArrivalQuery(det, tau, c.x, c.s), state))});
  }
  return t;
}

}  // namespace lagtime
