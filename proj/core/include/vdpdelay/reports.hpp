#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vdpdelay/dde.hpp"
#include "vdpdelay/stability.hpp"

namespace vdpdelay::reports {

/// Invalid user configuration; `field` names the offending option.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Format { Csv, Json, Text };

Format parse_format(const std::string& name);

/// Empty cells mark domain gaps or failed points.
using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// CSV uses 15 significant digits and empty fields for gaps. JSON carries the
/// same rounded numbers (null for gaps). Text is space-aligned.
void write_table(std::ostream& os, const Table& table, Format format);

/// Inclusive linear grid; `steps` is the number of points.
struct Range {
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 1;

  std::vector<double> values() const;
};

struct InphaseConfig {
  Range alpha{0.0, 1.0, 11};
  Range T{0.0, kPi, 9};
  double eps = 0.1;
};

struct CurvesConfig {
  Range alpha{1.0 / 3.0, 2.0, 51};
};

struct Fig1Config {
  Range alpha{kAlphaHopfMin, 1.0, 20};
  double eps = 0.5;
  ScanConfig scan;
};

struct Table1Config {
  std::vector<double> eps{0.1, 0.3, 0.5};
  std::vector<int> n_terms{1, 2, 3};
  std::size_t grid_size = 20;
  ScanConfig scan;
};

enum class SimSystem { SlowFlow, Full };

struct SimulateConfig {
  SimSystem system = SimSystem::SlowFlow;
  Params params{1.0, std::acos(-1.0 / 3.0), 0.0, ModeSign::Antisymmetric};
  double step = 0.01;
  double window = 60.0;
  std::array<double, 2> initial{1.0, 0.0};       // slow flow history
  std::array<double, 2> perturbation{0.0, 0.0};  // full system, oscillator 1
  std::optional<std::uint64_t> random_history_seed;
};

struct HopfConfig {
  double alpha = 1.0;
  double eps = 0.5;
  int n_terms = 3;
};

struct SimulationReport {
  Trajectory trajectory;
  std::optional<GrowthEstimate> growth;  // unset when the run is too short to fit
  std::string growth_kind;               // "state_norm" or "antisymmetric"
};

Table cmd_inphase(const InphaseConfig& cfg);
Table cmd_curves(const CurvesConfig& cfg);
Table cmd_fig1(const Fig1Config& cfg);
Table cmd_hopf(const HopfConfig& cfg);

/// Rows abs/rel/pct, one column per (eps, n) pair.
Table cmd_table1(const Table1Config& cfg);
Table table1_layout(const ErrorTable& table);

/// Diverging runs are returned with trajectory.blow_up_time() set and the
/// growth rate at +inf; callers decide whether that is a failure.
SimulationReport cmd_simulate(const SimulateConfig& cfg);

/// Trajectory plus growth summary, in the requested format.
void write_simulation(std::ostream& os, const SimulationReport& report, Format format);

/// Checks shared by every command. Throws ConfigError.
void validate(const ScanConfig& cfg);

}  // namespace vdpdelay::reports
