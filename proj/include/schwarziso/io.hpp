#pragma once

// JSON configuration, CSV/JSON export with 17 significant digits and a
// small SVG polyline emitter.

#include "schwarziso/equilibria.hpp"
#include "schwarziso/flow.hpp"
#include "schwarziso/manifold.hpp"
#include "schwarziso/model.hpp"
#include "schwarziso/orbits.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace schwarziso {

/// Fixed "%.17g" rendering; nan and inf print as "nan", "inf", "-inf".
std::string fmt17(double x);

struct RunConfig {
  ModelParams params;
  EnergyConvention convention = EnergyConvention::physical;
  double rtol = 1e-10;
  double atol = 1e-12;
  long max_steps = 10'000'000;
  double mu_threshold = 100.0;
  SinkBound sink_bound = SinkBound::printed;
  std::uint64_t seed = 20240917;
  std::filesystem::path output_dir = ".";
};

/// Parses a JSON text.  Unknown keys, wrong types and invalid parameters
/// raise InvalidInput.  Accepted top-level keys: params, energy_convention,
/// tolerances {rtol, atol, max_steps}, mu_threshold, sink_bound, seed,
/// output_dir.  A bare {M, m, A, A1, B, B1} object is accepted as params.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
ModelParams parse_params(const std::string& json_text);

std::string params_json(const ModelParams& p);
std::string derived_json(const DerivedConstants& d);

IntegratorOptions integrator_options(const RunConfig& cfg);

/// Trajectory CSV: a "# chart=<name>" comment line, then a header naming
/// t and the chart coordinates.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
/// Event log as a JSON array of {t, label, terminal, state}.
std::string events_json(const Trajectory& tr);

void write_em_csv(std::ostream& os, const std::vector<EMPoint>& pts);
void write_planar_csv(std::ostream& os, double C, double h, const std::vector<PlanarSample>& s);
void write_fate_csv_header(std::ostream& os);
void write_fate_csv_row(std::ostream& os, std::size_t index, const FateJob& job, const FateReport& r);

std::string equilibria_json(const std::vector<EquilibriumInfo>& eqs, EnergyConvention conv);
std::string manifold_json(const ModelParams& p, const std::vector<CMEquilibrium>& eqs,
                          const ConnectionCondition& cc);
std::string fate_json(const FateReport& r);

/// Reads a batch file: a JSON array of {C, h, state0: {r, v, theta, w}}.
std::vector<FateJob> parse_fate_jobs(const std::string& json_text);

struct SvgSeries {
  std::string label;
  std::vector<double> x, y;  // NaN breaks the polyline
};

/// Minimal plot: axes with min/max tick labels, one polyline per series.
std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<SvgSeries>& series, int width = 640, int height = 480);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace schwarziso
