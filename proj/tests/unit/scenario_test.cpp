#include <gtest/gtest.h>

#include <sstream>

#include "geophase/propagator.hpp"
#include "geophase/scenario.hpp"
#include "support/test_support.hpp"

namespace geophase {
namespace {

using namespace testing;

const std::filesystem::path kScenarios = GEOPHASE_SCENARIO_DIR;

std::string validation_message(const char* text) {
  try {
    parse_scenario(Json::parse(text));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::validation) << e.what();
    return e.what();
  }
  return "no error";
}

const ComparisonRow* find_row(const Report& r, const std::string& quantity) {
  for (const auto& row : r.rows) {
    if (row.quantity == quantity) return &row;
  }
  return nullptr;
}

TEST(ParseScenario, FieldLevelValidation) {
  EXPECT_EQ(validation_message(R"({"model": "rotating_spin", "params": {"mu_b": 1, "omega": 1, "theta": 4.0}})"),
            "params.theta: 4 outside [0, pi]");
  EXPECT_EQ(validation_message(R"({"model": "static_spin", "params": {"mu_b": 1}})"), "params.theta: missing");
  EXPECT_EQ(validation_message(R"({"model": "static_spin", "params": {"mu_b": 1, "theta": 0, "omega": 1}})"),
            "params.omega: not a parameter of static_spin");
  EXPECT_EQ(validation_message(R"({"model": "static_spin", "params": {"mu_b": 1, "theta": 0}, "colour": 1})"),
            "colour: unknown field");
  EXPECT_EQ(validation_message(R"({"model": "static_spin", "params": {"mu_b": 1, "theta": 0}, "grid": {"steps": 10}})"),
            "grid.steps: must be at least 100");
  EXPECT_EQ(validation_message(R"({"model": "quartic", "params": {}})").rfind("model: unknown family", 0), 0u);
  EXPECT_EQ(validation_message(R"({"model": "static_spin", "params": {"mu_b": 1, "theta": 0},
                                   "initial": {"amplitudes": [[1, 0], [1, 0]]}})")
                .rfind("initial.amplitudes: not normalized", 0),
            0u);
  EXPECT_EQ(validation_message(R"({"model": "static_spin", "params": {"mu_b": 1, "theta": 0},
                                   "analyses": [{"kind": "superpose", "mix": 1, "c1": 1, "c2": 0}]})"),
            "analyses[0]: give either c1/c2 or mix");
  EXPECT_EQ(validation_message(R"({"model": "static_spin", "params": {"mu_b": 1, "theta": 0},
                                   "analyses": [{"kind": "phases", "count": 3}]})"),
            "analyses[0].count: unknown field");
  EXPECT_EQ(validation_message(R"({"model": "static_spin", "params": {"mu_b": 1, "theta": 0}, "analyses": ["fourier"]})"),
            "analyses[0]: unknown analysis 'fourier'");
  EXPECT_EQ(validation_message(R"({"model": "custom", "initial": "w_plus",
                                   "custom": {"samples": [{"t": 0, "matrix": [[1,0],[0,0],[0,0],[-1,0]]},
                                                          {"t": 1, "matrix": [[1,0],[0,0],[0,0],[-1,0]]}]}})"),
            "initial: w_plus and w_minus need a spin model");
  EXPECT_EQ(validation_message(R"({"model": "custom", "grid": {"t_end": 2},
                                   "custom": {"samples": [{"t": 0, "matrix": [[1,0],[0,0],[0,0],[-1,0]]},
                                                          {"t": 1, "matrix": [[1,0],[0,0],[0,0],[-1,0]]}]}})"),
            "grid.t_end: custom samples must cover [0, t_end]");
  EXPECT_EQ(error_code_of([] { load_scenario(kScenarios / "does_not_exist.json"); }), ErrorCode::io);
}

TEST(ParseScenario, DefaultsAndRoundTrip) {
  const Scenario s = load_scenario(kScenarios / "rotating_full.json");
  EXPECT_EQ(s.model, Family::rotating_spin);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.analyses.size(), 6u);
  const Scenario again = parse_scenario(to_json(s));
  EXPECT_EQ(to_json(again).dump(), to_json(s).dump());

  const Scenario bare = parse_scenario(Json::parse(R"({"model": "static_spin", "params": {"mu_b": 2, "theta": 1}})"));
  const auto spec = make_spec(bare);
  const TimeGrid grid = make_grid(bare, spec);
  EXPECT_DOUBLE_EQ(grid.t_end(), kPi / 2.0);
  EXPECT_EQ(grid.steps(), default_steps(spec, kPi / 2.0));
  EXPECT_EQ(bare.initial, InitialKind::w_plus);
}

TEST(ParseScenario, CustomInitialIsLowestEigenvector) {
  const Scenario s = load_scenario(kScenarios / "custom_pulse.json");
  EXPECT_EQ(s.initial, InitialKind::v_plus);
  ASSERT_TRUE(s.custom.has_value());
  const Scenario eig = parse_scenario(Json::parse(R"({"model": "rotating_spin",
      "params": {"mu_b": 1, "omega": 1, "theta": 1}, "initial": "v_minus"})"));
  const auto spec = make_spec(eig);
  const ComplexState v = make_initial_state(eig, spec);
  const Matrix h = evaluate(spec, 0.0);
  EXPECT_NEAR(v.amplitudes().dot(h * v.amplitudes()).real(), 1.0, 1e-12);
}

TEST(RunScenario, StaticPhasesPassAndAreDeterministic) {
  const Scenario s = load_scenario(kScenarios / "static_phases.json");
  const Report a = run_scenario(s);
  const Report b = run_scenario(s);
  EXPECT_EQ(a.document.dump(), b.document.dump());
  EXPECT_TRUE(a.pass);
  const auto* row = find_row(a, "aa_phase");
  ASSERT_NE(row, nullptr);
  EXPECT_NEAR(row->analytic, kPi / 2.0, 1e-15);
  EXPECT_LE(row->diff, 1e-6);
  const Json& interfere = a.document["analyses"]["interfere"];
  EXPECT_NEAR(interfere["exact"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(interfere["unsigned_solid_angle"].get<double>(), 4.0, 1e-12);
  EXPECT_FALSE(interfere["unsigned_agrees_with_exact"].get<bool>());
  EXPECT_TRUE(a.document["verdict"]["cyclic"].get<bool>());
}

TEST(RunScenario, FullRotatingScenarioPasses) {
  const Report r = run_scenario(load_scenario(kScenarios / "rotating_full.json"));
  for (const auto& row : r.rows) EXPECT_TRUE(row.pass) << row.quantity << " diff " << row.diff;
  EXPECT_TRUE(r.pass);
  ASSERT_TRUE(r.frame.has_value());
  const Json& interfere = r.document["analyses"]["interfere"];
  EXPECT_NEAR(interfere["exact"].get<double>(), kRefInterference, 1e-12);
  EXPECT_NEAR(r.document["analyses"]["resonance"]["m_residual"].get<double>(), 3.0 - std::sqrt(7.0), 1e-12);
  EXPECT_FALSE(r.document["analyses"]["resonance"]["superposition"]["is_cyclic"].get<bool>());
}

TEST(RunScenario, FastRotationApproachesTrivialPhase) {
  const Report r = run_scenario(load_scenario(kScenarios / "rotating_extreme.json"));
  const auto* row = find_row(r, "aa_phase_trivial_limit");
  ASSERT_NE(row, nullptr);
  EXPECT_TRUE(row->pass);
  EXPECT_LE(std::abs(row->numeric), 0.02);
  EXPECT_TRUE(r.pass);
}

TEST(RunScenario, CustomHasNoOracle) {
  const Report r = run_scenario(load_scenario(kScenarios / "custom_pulse.json"));
  EXPECT_EQ(r.document["analyses"]["phases"]["oracle"].get<std::string>().rfind("unavailable", 0), 0u);
  EXPECT_EQ(find_row(r, "aa_phase"), nullptr);
  // A sign-flipping pulse satisfies only the integrated adiabatic condition.
  const Json& ad = r.document["analyses"]["interfere"]["adiabatic"];
  EXPECT_FALSE(ad["stronger_holds"].get<bool>());
  EXPECT_TRUE(ad["weaker_holds"].get<bool>());
}

TEST(RunScenario, SuperposeNeedsSpinModel) {
  Scenario s = load_scenario(kScenarios / "custom_pulse.json");
  s.analyses = {AnalysisRequest{AnalysisKind::superpose, Json::object()}};
  EXPECT_EQ(error_code_of([&] { run_scenario(s); }), ErrorCode::validation);
}

TEST(RunSweep, RowsMatchSingleRuns) {
  const Scenario base = load_scenario(kScenarios / "static_phases.json");
  const std::vector<double> values{kPi / 6.0, kPi / 3.0};
  const auto rows = run_sweep(base, "theta", values);
  ASSERT_EQ(rows.size(), 2u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Scenario single = base;
    single.params["theta"] = values[i];
    const Report r = run_scenario(single);
    ASSERT_TRUE(rows[i].phases.has_value());
    EXPECT_EQ(rows[i].phases->aa_phase, r.phases->aa_phase);
    EXPECT_EQ(rows[i].phases->total_phase, r.phases->total_phase);
    EXPECT_EQ(rows[i].pass, r.pass);
    EXPECT_NEAR(rows[i].phases->aa_phase, kPi * (1.0 - std::cos(values[i])), 1e-6);
  }
}

TEST(RunSweep, ErrorsAreCapturedPerRow) {
  const Scenario base = load_scenario(kScenarios / "static_phases.json");
  EXPECT_EQ(error_code_of([&] { run_sweep(base, "omega", {1.0}); }), ErrorCode::validation);
  const auto rows = run_sweep(base, "theta", {4.0, kPi / 2.0});
  EXPECT_FALSE(rows[0].pass);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_TRUE(rows[1].pass);
  EXPECT_TRUE(run_sweep(base, "theta", {}).empty());

  std::ostringstream out;
  write_sweep_csv(out, "theta", rows);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "index,axis,value,theta,omega,mu_b,condition_gap,residual,aa_phase,berry_phase,total_phase,"
            "dynamical_phase,decomposition_residual,cyclic,pass,error");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

}  // namespace
}  // namespace geophase
