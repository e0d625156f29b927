#include "vdpdelay/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <random>

#include <json.hpp>

#include "vdpdelay/error.hpp"
#include "vdpdelay/model.hpp"
#include "vdpdelay/spectral.hpp"

namespace vdpdelay::reports {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Finite values are re-parsed from their 15-digit text so JSON and CSV agree.
ordered_json to_json(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return nullptr;
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  const double v = std::get<double>(cell);
  const std::string text = format_number(v);
  if (!std::isfinite(v)) return text;
  return std::strtod(text.c_str(), nullptr);
}

std::string to_text(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return "";
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  const double v = std::get<double>(cell);
  return format_number(v);
}

Cell number_or_gap(double v) {
  if (std::isnan(v)) return std::monostate{};
  return v;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

void validate_range(const Range& r, const std::string& field) {
  require(std::isfinite(r.min) && std::isfinite(r.max), field, "bounds must be finite");
  require(r.steps >= 1, field + "-steps", "must be >= 1");
  require(r.max >= r.min, field + "-max", "must be >= " + field + "-min");
}

void validate_eps(double eps, const std::string& field = "eps") {
  require(std::isfinite(eps) && eps >= 0.0, field, "must be finite and >= 0");
}

template <class F>
Cell guarded(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::monostate{};
  }
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  if (name == "text") return Format::Text;
  throw ConfigError("format", "expected csv, json or text, got '" + name + "'");
}

std::vector<double> Range::values() const {
  std::vector<double> v;
  v.reserve(steps);
  if (steps == 1) {
    v.push_back(min);
    return v;
  }
  for (std::size_t i = 0; i < steps; ++i) {
    v.push_back(min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  return v;
}

void write_table(std::ostream& os, const Table& table, Format format) {
  switch (format) {
    case Format::Csv: {
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        os << (c ? "," : "") << table.columns[c];
      }
      os << '\n';
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << to_text(row[c]);
        os << '\n';
      }
      return;
    }
    case Format::Json: {
      ordered_json doc;
      doc["name"] = table.name;
      doc["columns"] = table.columns;
      ordered_json rows = ordered_json::array();
      for (const auto& row : table.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
          obj[table.columns[c]] = to_json(row[c]);
        }
        rows.push_back(std::move(obj));
      }
      doc["rows"] = std::move(rows);
      os << doc.dump(2) << '\n';
      return;
    }
    case Format::Text: {
      std::vector<std::size_t> width(table.columns.size());
      for (std::size_t c = 0; c < width.size(); ++c) width[c] = table.columns[c].size();
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
          width[c] = std::max(width[c], to_text(row[c]).size());
        }
      }
      auto emit = [&](std::size_t c, const std::string& s) {
        os << (c ? "  " : "") << s << std::string(width[c] - s.size(), ' ');
      };
      for (std::size_t c = 0; c < width.size(); ++c) emit(c, table.columns[c]);
      os << '\n';
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) emit(c, to_text(row[c]));
        os << '\n';
      }
      return;
    }
  }
}

void validate(const ScanConfig& cfg) {
  require(std::isfinite(cfg.step) && cfg.step > 0.0, "step", "must be > 0");
  require(std::isfinite(cfg.window) && cfg.window >= kMinGrowthSpan, "window",
          "must be >= " + format_number(kMinGrowthSpan));
  require(cfg.window / cfg.step >= static_cast<double>(kMinGrowthNodes), "step",
          "window/step must give at least 200 nodes");
  require(std::isfinite(cfg.max_window) && cfg.max_window > 0.0, "max-window", "must be > 0");
  require(std::isfinite(cfg.tol) && cfg.tol > 0.0, "tol", "must be > 0");
  require(std::isfinite(cfg.bracket) && cfg.bracket > 0.0, "bracket", "must be > 0");
}

Table cmd_inphase(const InphaseConfig& cfg) {
  validate_range(cfg.alpha, "alpha");
  validate_range(cfg.T, "T");
  require(cfg.T.min >= 0.0, "T-min", "must be >= 0");
  validate_eps(cfg.eps);

  Table t{"inphase", {"alpha", "T", "eps", "R", "omega", "k", "status"}, {}};
  for (double a : cfg.alpha.values()) {
    for (double T : cfg.T.values()) {
      std::vector<Cell> row{a, T, cfg.eps};
      try {
        const InPhaseMode m = in_phase_mode(Params{a, T, cfg.eps, ModeSign::Antisymmetric});
        row.insert(row.end(), {m.R, m.omega, m.k, std::string("ok")});
      } catch (const Error& e) {
        row.insert(row.end(), {std::monostate{}, std::monostate{}, std::monostate{},
                               std::string(to_string(e.code()))});
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table cmd_curves(const CurvesConfig& cfg) {
  validate_range(cfg.alpha, "alpha");
  Table t{"curves", {"alpha", "T_hopf_ode", "T_saddle_node", "T_mode_birth"}, {}};
  for (double a : cfg.alpha.values()) {
    t.rows.push_back({a, guarded([&]() -> Cell { return hopf_curve_ode(a); }),
                      guarded([&]() -> Cell { return saddle_node_curve(a); }),
                      guarded([&]() -> Cell { return mode_birth_curve(a); })});
  }
  return t;
}

Table cmd_fig1(const Fig1Config& cfg) {
  validate_range(cfg.alpha, "alpha");
  require(cfg.alpha.min >= kAlphaHopfMin - 1e-12, "alpha-min", "must be >= sqrt(2)/3");
  validate_eps(cfg.eps);
  validate(cfg.scan);

  std::vector<double> grid = cfg.alpha.values();
  if (!grid.empty() && std::abs(grid.front() - kAlphaHopfMin) < 1e-12) grid.front() += 1e-3;
  const std::vector<ScanResult> scan = sweep(grid, cfg.eps, cfg.scan);

  Table t{"fig1", {"alpha", "eps", "T_n1", "T_n2", "T_n3", "T_sim", "T_newton", "status"}, {}};
  for (const ScanResult& r : scan) {
    t.rows.push_back({r.alpha, r.eps, number_or_gap(r.T_series[0]), number_or_gap(r.T_series[1]),
                      number_or_gap(r.T_series[2]), number_or_gap(r.T_sim),
                      number_or_gap(r.T_newton), r.ok() ? std::string("ok") : r.error});
  }
  return t;
}

Table table1_layout(const ErrorTable& table) {
  Table t{"table1", {"metric"}, {}};
  for (double eps : table.eps) {
    for (int n : table.n_terms) {
      t.columns.push_back("eps" + format_number(eps) + "_n" + std::to_string(n));
    }
  }
  const char* metrics[] = {"abs", "rel", "pct", "alpha_at_max"};
  for (const char* metric : metrics) {
    std::vector<Cell> row{std::string(metric)};
    for (std::size_t e = 0; e < table.eps.size(); ++e) {
      for (int n : table.n_terms) {
        const ErrorCell& c = table.at(e, n);
        const std::string m = metric;
        row.emplace_back(m == "abs" ? c.abs : m == "rel" ? c.rel : m == "pct" ? c.pct : c.alpha_at_max);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_table1(const Table1Config& cfg) {
  require(!cfg.eps.empty(), "eps", "needs at least one value");
  for (double e : cfg.eps) validate_eps(e);
  require(!cfg.n_terms.empty(), "n-terms", "needs at least one value");
  for (int n : cfg.n_terms) require(n >= 1 && n <= 3, "n-terms", "must be 1, 2 or 3");
  require(cfg.grid_size >= 2, "alpha-steps", "must be >= 2");
  validate(cfg.scan);
  return table1_layout(error_table(cfg.eps, cfg.n_terms, cfg.grid_size, cfg.scan));
}

Table cmd_hopf(const HopfConfig& cfg) {
  require(std::isfinite(cfg.alpha) && cfg.alpha >= kAlphaHopfMin - 1e-12, "alpha",
          "must be >= sqrt(2)/3");
  validate_eps(cfg.eps);
  require(cfg.n_terms >= 1 && cfg.n_terms <= 3, "n-terms", "must be 1, 2 or 3");

  Table t{"hopf", {"method", "alpha", "eps", "T", "Omega", "iterations", "residual", "status"}, {}};
  const HopfPoint s = hopf_series(cfg.alpha, cfg.eps, cfg.n_terms);
  t.rows.push_back({std::string(to_string(s.method)), s.alpha, cfg.eps, s.T, s.Omega,
                    std::monostate{}, std::monostate{}, std::string("ok")});
  try {
    const HopfPoint h = hopf_newton(cfg.alpha, cfg.eps, hopf_series(cfg.alpha, cfg.eps, 3));
    t.rows.push_back({std::string(to_string(h.method)), h.alpha, cfg.eps, h.T, h.Omega,
                      static_cast<double>(h.iterations), h.residual, std::string("ok")});
  } catch (const Error& e) {
    t.rows.push_back({std::string("newton"), cfg.alpha, cfg.eps, std::monostate{}, std::monostate{},
                      std::monostate{}, std::monostate{}, std::string(to_string(e.code()))});
  }
  return t;
}

SimulationReport cmd_simulate(const SimulateConfig& cfg) {
  const Params& p = cfg.params;
  require(std::isfinite(p.alpha), "alpha", "must be finite");
  require(std::isfinite(p.T) && p.T >= 0.0, "T", "must be finite and >= 0");
  validate_eps(p.eps);
  require(std::isfinite(cfg.step) && cfg.step > 0.0, "step", "must be > 0");
  require(std::isfinite(cfg.window) && cfg.window > 0.0, "window", "must be > 0");

  DdeProblem prob;
  std::string kind;
  if (cfg.system == SimSystem::SlowFlow) {
    std::array<double, 2> init = cfg.initial;
    if (cfg.random_history_seed) {
      std::mt19937_64 rng(*cfg.random_history_seed);
      std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
      const double th = angle(rng);
      init = {std::cos(th), std::sin(th)};
    }
    prob = slow_flow_problem(p, init);
    kind = "state_norm";
  } else {
    prob = full_system_problem(p, cfg.perturbation);
    kind = "antisymmetric";
  }

  SimulationReport report{integrate(prob, cfg.window, cfg.step), std::nullopt, kind};
  try {
    report.growth = cfg.system == SimSystem::SlowFlow ? growth_rate(report.trajectory)
                                                      : antisymmetric_growth_rate(report.trajectory);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooShort) throw;
  }
  return report;
}

void write_simulation(std::ostream& os, const SimulationReport& report, Format format) {
  const Trajectory& tr = report.trajectory;
  if (format != Format::Json) {
    write_csv(os, tr);
    return;
  }
  ordered_json doc;
  doc["growth_kind"] = report.growth_kind;
  if (report.growth) {
    doc["growth_rate"] = to_json(report.growth->rate);
    doc["r_squared"] = to_json(report.growth->r_squared);
    doc["fit_window"] = {to_json(report.growth->window.first), to_json(report.growth->window.second)};
  } else {
    doc["growth_rate"] = nullptr;
  }
  doc["blow_up_time"] = tr.blow_up_time() ? to_json(*tr.blow_up_time()) : ordered_json(nullptr);
  std::vector<std::string> columns{"t"};
  columns.insert(columns.end(), tr.labels.begin(), tr.labels.end());
  doc["columns"] = columns;
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    ordered_json row = ordered_json::array();
    row.push_back(to_json(tr.time(i)));
    for (double v : tr.state(i)) row.push_back(to_json(v));
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump() << '\n';
}

}  // namespace vdpdelay::reports
