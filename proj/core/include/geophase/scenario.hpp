#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geophase/hamiltonian.hpp"
#include "geophase/phase_report.hpp"
#include "geophase/state.hpp"

namespace geophase {

using Json = nlohmann::ordered_json;

enum class InitialKind { w_plus, w_minus, v_plus, v_minus, amplitudes };

enum class AnalysisKind { phases, frame, superpose, interfere, resonance, gauge_fuzz };

const char* to_string(InitialKind kind) noexcept;
const char* to_string(AnalysisKind kind) noexcept;

struct AnalysisRequest {
  AnalysisKind kind = AnalysisKind::phases;
  Json options = Json::object();
};

/// Parsed scenario. t_start is fixed at 0; unset grid fields resolve to the
/// natural period and default_steps.
struct Scenario {
  Family model = Family::static_spin;
  std::map<std::string, double> params;
  std::optional<double> t_end;
  std::optional<int> steps;
  InitialKind initial = InitialKind::w_plus;
  std::vector<Complex> amplitudes;
  std::vector<AnalysisRequest> analyses;
  std::uint64_t seed = 0;
  double cyclic_tol = 1e-6;
  /// Tolerance of oracle comparison rows unless an analysis overrides it.
  double tolerance = 1e-6;
  std::optional<HamiltonianSpec> custom;
};

/// Field-level ErrorCode::validation on malformed input. A relative
/// `samples_file` resolves against `base_dir`.
Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);
Json to_json(const Scenario& s);

/// Parameter names accepted by a family, in report order.
const std::vector<std::string>& parameter_names(Family family);

HamiltonianSpec make_spec(const Scenario& s);
ComplexState make_initial_state(const Scenario& s, const HamiltonianSpec& spec);
/// Grid with all defaults applied.
TimeGrid make_grid(const Scenario& s, const HamiltonianSpec& spec);

struct ComparisonRow {
  std::string quantity;
  double numeric = 0.0;
  double analytic = 0.0;
  double diff = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  /// Deterministic document: scenario echo, resolved defaults, phases,
  /// comparison rows, residuals, per-analysis sections and the verdict.
  Json document;
  std::vector<ComparisonRow> rows;
  bool pass = true;
  std::optional<Trajectory> trajectory;
  std::optional<FrameTrajectory> frame;
  std::optional<PhaseReport> phases;
};

Report run_scenario(const Scenario& s);

struct SweepRow {
  std::size_t index = 0;
  double value = 0.0;
  std::map<std::string, double> params;
  std::optional<double> condition_gap;
  std::optional<double> residual;
  std::optional<PhaseReport> phases;
  bool cyclic = false;
  bool pass = false;
  std::string error;
};

/// One independent run per value, in input order. A failing row carries its
/// error message and does not stop the sweep.
std::vector<SweepRow> run_sweep(const Scenario& base, const std::string& axis,
                                const std::vector<double>& values);

/// Header: index,axis,value,theta,omega,mu_b,condition_gap,residual,aa_phase,
/// berry_phase,total_phase,dynamical_phase,decomposition_residual,cyclic,pass,error
void write_sweep_csv(std::ostream& out, const std::string& axis, const std::vector<SweepRow>& rows);

}  // namespace geophase
