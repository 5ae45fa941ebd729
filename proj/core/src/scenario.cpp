#include "geophase/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "geophase/error.hpp"
#include "geophase/gauge.hpp"
#include "geophase/io.hpp"
#include "geophase/phases.hpp"
#include "geophase/propagator.hpp"
#include "geophase/superposition.hpp"
#include "geophase/wframe.hpp"

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMinScenarioSteps = 100;
constexpr double kAmplitudeNormTolerance = 1e-9;
constexpr double kTrivialLimitRatio = 100.0;
constexpr double kTrivialLimitTolerance = 0.02;

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::validation, field + ": " + message);
}

double number_field(const Json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(field, "must be finite");
  return x;
}

Complex complex_field(const Json& v, const std::string& field) {
  if (v.is_number()) return {number_field(v, field), 0.0};
  if (!v.is_array() || v.size() != 2) invalid(field, "expected [re, im]");
  return {number_field(v[0], field + "[0]"), number_field(v[1], field + "[1]")};
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

void check_keys(const Json& obj, const std::string& field, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) invalid(field.empty() ? key : field + "." + key, "unknown field");
  }
}

Family parse_family(const Json& v) {
  if (!v.is_string()) invalid("model", "expected a string");
  const std::string name = v.get<std::string>();
  if (name == "static_spin") return Family::static_spin;
  if (name == "rotating_spin") return Family::rotating_spin;
  if (name == "custom") return Family::custom;
  invalid("model", "unknown family '" + name + "' (static_spin, rotating_spin, custom)");
}

AnalysisKind parse_analysis_kind(const std::string& name, const std::string& field) {
  static const std::pair<const char*, AnalysisKind> table[] = {
      {"phases", AnalysisKind::phases},       {"frame", AnalysisKind::frame},
      {"superpose", AnalysisKind::superpose}, {"interfere", AnalysisKind::interfere},
      {"resonance", AnalysisKind::resonance}, {"gauge_fuzz", AnalysisKind::gauge_fuzz}};
  for (const auto& [n, k] : table) {
    if (name == n) return k;
  }
  invalid(field, "unknown analysis '" + name + "'");
}

const std::set<std::string>& option_names(AnalysisKind kind) {
  static const std::set<std::string> phases{"tolerance"};
  static const std::set<std::string> frame{"tolerance"};
  static const std::set<std::string> superpose{"c1", "c2", "mix", "tolerance"};
  static const std::set<std::string> interfere{"tolerance", "track_a", "track_b", "adiabatic_tolerance"};
  static const std::set<std::string> resonance{"mix", "tolerance"};
  static const std::set<std::string> gauge_fuzz{"count", "tolerance", "reconstruction_tolerance",
                                                "covariance_tolerance"};
  switch (kind) {
    case AnalysisKind::phases: return phases;
    case AnalysisKind::frame: return frame;
    case AnalysisKind::superpose: return superpose;
    case AnalysisKind::interfere: return interfere;
    case AnalysisKind::resonance: return resonance;
    case AnalysisKind::gauge_fuzz: return gauge_fuzz;
  }
  return phases;
}

double option_or(const AnalysisRequest& a, const char* key, double fallback) {
  return a.options.contains(key) ? a.options[key].get<double>() : fallback;
}

int int_option_or(const AnalysisRequest& a, const char* key, int fallback) {
  return a.options.contains(key) ? a.options[key].get<int>() : fallback;
}

void validate_options(AnalysisRequest& a, const std::string& field) {
  check_keys(a.options, field, option_names(a.kind));
  for (const auto& [key, value] : a.options.items()) {
    const std::string f = field + "." + key;
    if (key == "c1" || key == "c2") {
      complex_field(value, f);
    } else if (key == "count" || key == "track_a" || key == "track_b") {
      if (!value.is_number_integer() || value.get<long long>() < 0) {
        invalid(f, "expected a non-negative integer");
      }
    } else {
      const double x = number_field(value, f);
      if (key != "mix" && x <= 0.0) invalid(f, "must be positive");
    }
  }
  if (a.kind == AnalysisKind::superpose) {
    const bool has_c = a.options.contains("c1") || a.options.contains("c2");
    if (has_c && a.options.contains("mix")) invalid(field, "give either c1/c2 or mix");
    if (has_c && !(a.options.contains("c1") && a.options.contains("c2"))) {
      invalid(field, "c1 and c2 must be given together");
    }
    if (has_c) {
      const Complex c1 = complex_field(a.options["c1"], field + ".c1");
      const Complex c2 = complex_field(a.options["c2"], field + ".c2");
      if (std::abs(std::norm(c1) + std::norm(c2) - 1.0) > 1e-12) {
        invalid(field, "|c1|^2 + |c2|^2 must equal 1");
      }
    }
  }
}

void validate_params(const Scenario& s) {
  const auto& names = parameter_names(s.model);
  for (const auto& [key, value] : s.params) {
    if (std::find(names.begin(), names.end(), key) == names.end()) {
      invalid("params." + key, std::string("not a parameter of ") + to_string(s.model));
    }
    if (!std::isfinite(value)) invalid("params." + key, "must be finite");
  }
  for (const auto& name : names) {
    if (!s.params.contains(name)) invalid("params." + name, "missing");
  }
  if (s.params.contains("mu_b") && !(s.params.at("mu_b") > 0.0)) {
    invalid("params.mu_b", "must be positive");
  }
  if (s.params.contains("omega") && !(s.params.at("omega") > 0.0)) {
    invalid("params.omega", "must be positive");
  }
  if (s.params.contains("theta")) {
    const double theta = s.params.at("theta");
    if (theta < 0.0 || theta > kPi) {
      invalid("params.theta", io::format_double(theta) + " outside [0, pi]");
    }
  }
}

double find_param(const Scenario& s, const char* name) { return s.params.at(name); }

bool has_oracle(const Scenario& s) {
  return s.model != Family::custom &&
         (s.initial == InitialKind::w_plus || s.initial == InitialKind::w_minus);
}

Branch oracle_branch(const Scenario& s) {
  return s.initial == InitialKind::w_minus ? Branch::minus : Branch::plus;
}

class RowSink {
 public:
  explicit RowSink(Report& r) : report_(r) {}

  void add(std::string quantity, double numeric, double analytic, double diff, double tolerance) {
    ComparisonRow row{std::move(quantity), numeric, analytic, diff, tolerance, diff <= tolerance};
    report_.pass = report_.pass && row.pass;
    report_.rows.push_back(std::move(row));
  }
  void add_phase(std::string quantity, double numeric, double analytic, double tolerance) {
    add(std::move(quantity), numeric, analytic, std::abs(wrap_phase(numeric - analytic)), tolerance);
  }
  void add_value(std::string quantity, double numeric, double analytic, double tolerance) {
    add(std::move(quantity), numeric, analytic, std::abs(numeric - analytic), tolerance);
  }

 private:
  Report& report_;
};

Json phase_json(const PhaseReport& p) {
  Json j;
  j["total_phase"] = p.total_phase;
  j["dynamical_phase"] = p.dynamical;
  j["aa_phase"] = p.aa_phase;
  j["aa_phase_unwrapped"] = p.aa_phase_unwrapped ? Json(*p.aa_phase_unwrapped) : Json();
  j["berry_phase"] = p.berry_phase ? Json(*p.berry_phase) : Json();
  j["berry_phase_unwrapped"] = p.berry_phase_unwrapped ? Json(*p.berry_phase_unwrapped) : Json();
  j["decomposition_residual"] = p.decomposition_residual;
  j["solid_angle"] = p.solid_angle ? Json(*p.solid_angle) : Json();
  j["period"] = p.period ? Json(*p.period) : Json();
  return j;
}

Json verdict_json(const CyclicityVerdict& v) {
  Json j;
  j["is_cyclic"] = v.is_cyclic;
  j["overlap_magnitude"] = v.overlap_magnitude;
  j["total_phase"] = v.total_phase ? Json(*v.total_phase) : Json();
  j["tolerance"] = v.tolerance;
  return j;
}

// Distance of x to `target` on the lattice target + n * spacing.
double reduce_to(double x, double target, double spacing) {
  return x - std::round((x - target) / spacing) * spacing;
}

struct Context {
  const Scenario& s;
  const HamiltonianSpec& spec;
  const TimeGrid& grid;
  const Trajectory& traj;
  const CyclicityVerdict& verdict;
  Report& report;
  RowSink rows;
};

Json run_phases(Context& c, const AnalysisRequest& a) {
  const double tol = option_or(a, "tolerance", c.s.tolerance);
  Json out;
  out["options"] = {{"tolerance", tol}};
  if (!c.report.phases) {
    out["status"] = "not_cyclic";
    return out;
  }
  const PhaseReport& num = *c.report.phases;
  if (!has_oracle(c.s)) {
    out["oracle"] = c.s.model == Family::custom
                        ? "unavailable: no closed form for custom Hamiltonians"
                        : "unavailable: closed forms cover the w_plus and w_minus initial states";
    return out;
  }
  const PhaseReport ana = analytic_phase_report(c.spec, oracle_branch(c.s));
  out["oracle"] = "closed_form";
  out["analytic"] = phase_json(ana);
  c.rows.add_phase("aa_phase", num.aa_phase, ana.aa_phase, tol);
  c.rows.add_phase("total_phase", num.total_phase, ana.total_phase, tol);
  c.rows.add_value("dynamical_phase", num.dynamical, ana.dynamical, tol);
  if (num.berry_phase && ana.berry_phase) {
    c.rows.add_phase("berry_phase", *num.berry_phase, *ana.berry_phase, tol);
  }
  c.rows.add_value("decomposition_residual", num.decomposition_residual, 0.0, tol);
  if (const auto* p = c.spec.as_rotating(); p && p->omega / p->mu_b >= kTrivialLimitRatio) {
    c.rows.add_phase("aa_phase_trivial_limit", num.aa_phase, 0.0, kTrivialLimitTolerance);
  }
  return out;
}

Json run_frame(Context& c, const AnalysisRequest& a) {
  const double tol = option_or(a, "tolerance", c.s.tolerance);
  Json out;
  out["options"] = {{"tolerance", tol}};
  if (!c.verdict.is_cyclic) {
    out["status"] = "not_cyclic";
    return out;
  }
  FrameTrajectory frame = build_w_frame(c.traj, c.verdict);
  const EffectiveHamiltonianTrack heff = effective_hamiltonian(frame, c.spec);
  const Trajectory rebuilt = reconstruct_amplitude(frame, c.spec);
  double reconstruction = 0.0;
  for (std::size_t k = 0; k < rebuilt.size(); ++k) {
    reconstruction = std::max(
        reconstruction, (rebuilt[k].amplitudes() - c.traj[k].amplitudes()).norm());
  }
  const double holonomy = frame_holonomy(frame, 0);

  out["max_off_diagonal"] = heff.max_off_diagonal();
  out["hermiticity_defect"] = heff.hermiticity_defect();
  out["orthonormality_defect"] = frame.orthonormality_defect();
  out["periodicity_defect"] = frame.periodicity_defect();
  out["reconstruction_deviation"] = reconstruction;
  out["holonomy_track_0"] = holonomy;
  Json diag = Json::array();
  for (Index n = 0; n < frame.dimension(); ++n) diag.push_back(heff.matrices.front()(n, n).real());
  out["diagonal_at_t0"] = diag;

  c.rows.add_value("heff_off_diagonal", heff.max_off_diagonal(), 0.0, tol);
  c.rows.add_value("reconstruction_deviation", reconstruction, 0.0, tol);
  if (c.report.phases) {
    c.rows.add_phase("holonomy_vs_aa_phase", holonomy, c.report.phases->aa_phase, tol);
  }
  if (has_oracle(c.s)) {
    // The first column is e^{-i phi t/T} psi with phi a principal value, so
    // each diagonal matches the closed-form energy only modulo 2 pi / T.
    const double spacing = 2.0 * kPi / c.grid.duration();
    const Branch first = oracle_branch(c.s);
    const Branch second = first == Branch::plus ? Branch::minus : Branch::plus;
    const Branch order[2] = {first, second};
    out["diagonal_modulus"] = spacing;
    for (Index n = 0; n < 2; ++n) {
      const double energy = c.spec.as_static() ? spin::frame_energy(*c.spec.as_static(), order[n])
                                               : spin::frame_energy(*c.spec.as_rotating(), order[n]);
      double worst = 0.0;
      for (const auto& m : heff.matrices) {
        worst = std::max(worst, std::abs(reduce_to(m(n, n).real(), energy, spacing) - energy));
      }
      const double numeric = reduce_to(heff.matrices.front()(n, n).real(), energy, spacing);
      c.rows.add("heff_diagonal_" + std::to_string(n), numeric, energy, worst, tol);
    }
  }
  c.report.frame = std::move(frame);
  return out;
}

SuperpositionSpec superposition_from(const AnalysisRequest& a) {
  if (a.options.contains("mix")) return SuperpositionSpec::mixing(a.options["mix"].get<double>());
  if (a.options.contains("c1")) {
    return SuperpositionSpec(complex_field(a.options["c1"], "c1"), complex_field(a.options["c2"], "c2"));
  }
  return SuperpositionSpec(Complex(std::numbers::sqrt2 / 2.0, 0.0), Complex(0.0, std::numbers::sqrt2 / 2.0));
}

ComplexState branch_state(const HamiltonianSpec& spec, Branch b) {
  if (const auto* p = spec.as_static()) return spin::static_w(*p, b, 0.0);
  const auto* r = spec.as_rotating();
  return spin::rotating_w(*r, alpha_tilt(r->mu_b, r->omega, r->theta), b, 0.0);
}

Json run_superpose(Context& c, const AnalysisRequest& a) {
  if (c.s.model == Family::custom) {
    invalid("analyses.superpose", "requires static_spin or rotating_spin");
  }
  const double tol = option_or(a, "tolerance", 1e-5);
  const SuperpositionSpec sup = superposition_from(a);
  const Trajectory t1 = propagate(c.spec, branch_state(c.spec, Branch::plus), c.grid);
  const Trajectory t2 = propagate(c.spec, branch_state(c.spec, Branch::minus), c.grid);
  const NonlinearSuperpositionResult r = nonlinear_superposition_test(t1, t2, sup, c.spec);
  const double linear = linear_residual(superpose(t1, t2, sup), c.spec);

  Json out;
  out["options"] = {{"c1", complex_json(sup.c1())}, {"c2", complex_json(sup.c2())}, {"tolerance", tol}};
  out["condition_gap"] = r.condition_gap;
  out["residual"] = r.residual;
  out["common_generator_residual"] = r.common_generator_residual;
  out["cross_term"] = r.cross_term;
  out["linear_residual"] = linear;
  out["condition_satisfied"] = r.condition_gap < 1e-12;
  // Empirical c in residual >= c * gap * min(|c1|, |c2|); no universal bound is claimed.
  const double weight = std::min(std::abs(sup.c1()), std::abs(sup.c2()));
  out["lower_bound_constant"] =
      r.condition_gap > 1e-10 && weight > 0.0 ? Json(r.residual / (r.condition_gap * weight)) : Json();
  c.rows.add_value("linear_superposition_residual", linear, 0.0, tol);
  return out;
}

Json run_interfere(Context& c, const AnalysisRequest& a) {
  const double tol = option_or(a, "tolerance", c.s.tolerance);
  const int track_a = int_option_or(a, "track_a", 0);
  const int track_b = int_option_or(a, "track_b", 1);
  const double adiabatic_tol = option_or(a, "adiabatic_tolerance", 1e-9);
  Json out;
  out["options"] = {{"tolerance", tol},
                    {"track_a", track_a},
                    {"track_b", track_b},
                    {"adiabatic_tolerance", adiabatic_tol}};
  const double numeric = interference_intensity(c.traj.back(), c.traj.front());
  out["intensity"] = numeric;
  const Trajectory bar = parallel_transport_representative(c.traj);
  const double representative = interference_intensity(bar.back(), bar.front());
  out["representative_intensity"] = representative;
  out["representative_difference"] = representative - numeric;
  if (has_oracle(c.s)) {
    const Branch b = oracle_branch(c.s);
    const double exact = analytic_interference(c.spec, b);
    out["exact"] = exact;
    c.rows.add_value("interference", numeric, exact, tol);
    if (b == Branch::plus) {
      const double unsigned_value = unsigned_solid_angle_interference(c.spec, b);
      out["unsigned_solid_angle"] = unsigned_value;
      out["unsigned_agrees_with_exact"] = std::abs(unsigned_value - exact) <= tol;
    }
  }
  if (track_a >= c.spec.dimension() || track_b >= c.spec.dimension()) {
    invalid("analyses.interfere", "track index exceeds the Hamiltonian dimension");
  }
  const AdiabaticConditions ad =
      adiabatic_interference_conditions(c.spec, c.grid, track_a, track_b, adiabatic_tol);
  out["adiabatic"] = {{"pointwise_gap", ad.pointwise_gap},
                      {"integrated_gap", ad.integrated_gap},
                      {"stronger_holds", ad.stronger_holds},
                      {"weaker_holds", ad.weaker_holds}};
  return out;
}

Json run_resonance(Context& c, const AnalysisRequest& a) {
  const auto* p = c.spec.as_rotating();
  if (!p) invalid("analyses.resonance", "requires rotating_spin");
  const double mix = option_or(a, "mix", kPi / 2.0);
  const double tol = option_or(a, "tolerance", c.s.cyclic_tol);
  const ResonanceResidual res = resonance_check(*p, c.grid.duration());
  const Trajectory t = propagate(c.spec, spin::rotating_superposition_initial(*p, mix, Branch::plus), c.grid);
  const CyclicityVerdict v = check_cyclic(t, tol);

  Json out;
  out["options"] = {{"mix", mix}, {"tolerance", tol}};
  out["n_value"] = res.n_value;
  out["m_value"] = res.m_value;
  out["n_residual"] = res.n_residual;
  out["m_residual"] = res.m_residual;
  out["superposition"] = verdict_json(v);
  return out;
}

Json run_gauge_fuzz(Context& c, const AnalysisRequest& a) {
  const int count = int_option_or(a, "count", 100);
  const double tol = option_or(a, "tolerance", 1e-8);
  const double rec_tol = option_or(a, "reconstruction_tolerance", 1e-9);
  const double cov_tol = option_or(a, "covariance_tolerance", 1e-10);
  Json out;
  out["options"] = {{"count", count},
                    {"tolerance", tol},
                    {"reconstruction_tolerance", rec_tol},
                    {"covariance_tolerance", cov_tol},
                    {"seed", c.s.seed}};
  std::mt19937_64 rng(c.s.seed);
  const double t0 = c.grid.t_start();
  const double t1 = c.grid.t_end();

  // Parallel-transport representative covariance holds for any trajectory.
  const Trajectory bar = parallel_transport_representative(c.traj);
  double covariance = 0.0;
  for (int i = 0; i < count; ++i) {
    const GaugeFunction g = GaugeFunction::random(rng, t0, t1, false);
    const Trajectory shifted = parallel_transport_representative(rephase_trajectory(c.traj, g));
    const Complex factor = std::polar(1.0, g(t0));
    for (std::size_t k = 0; k < bar.size(); ++k) {
      covariance = std::max(covariance, (shifted[k].amplitudes() - factor * bar[k].amplitudes()).norm());
    }
  }
  out["representative_covariance"] = covariance;
  c.rows.add_value("gauge_representative_covariance", covariance, 0.0, cov_tol);

  if (!c.verdict.is_cyclic) {
    out["status"] = "not_cyclic";
    return out;
  }
  const double beta = aa_phase(c.traj, c.verdict);
  double beta_shift = 0.0;
  for (int i = 0; i < count; ++i) {
    const Trajectory shifted = rephase_trajectory(c.traj, GaugeFunction::random(rng, t0, t1, true));
    const CyclicityVerdict v = check_cyclic(shifted, c.s.cyclic_tol);
    beta_shift = std::max(beta_shift, std::abs(wrap_phase(aa_phase(shifted, v) - beta)));
  }
  out["aa_phase_shift"] = beta_shift;
  c.rows.add_value("gauge_aa_phase_shift", beta_shift, 0.0, tol);

  try {
    const EigenFrame ef = eigen_frame(c.spec, c.grid);
    if (ef.loop_closed) {
      Index track = 0;
      (ef.frame[0].adjoint() * c.traj.front().amplitudes()).cwiseAbs().maxCoeff(&track);
      const double gamma = berry_phase(ef, track);
      double gamma_shift = 0.0;
      for (int i = 0; i < count; ++i) {
        std::vector<GaugeFunction> gauges;
        for (Index n = 0; n < c.spec.dimension(); ++n) {
          gauges.push_back(GaugeFunction::random(rng, t0, t1, true));
        }
        const EigenFrame fuzzed{rephase_frame(ef.frame, gauges), ef.energies, ef.loop_closed};
        gamma_shift = std::max(gamma_shift, std::abs(wrap_phase(berry_phase(fuzzed, track) - gamma)));
      }
      out["berry_phase_shift"] = gamma_shift;
      c.rows.add_value("gauge_berry_phase_shift", gamma_shift, 0.0, tol);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate_spectrum && e.code() != ErrorCode::under_resolved) throw;
    out["berry_phase_shift"] = std::string("skipped: ") + e.what();
  }

  const FrameTrajectory frame = build_w_frame(c.traj, c.verdict);
  const Trajectory rebuilt = reconstruct_amplitude(frame, c.spec);
  double deviation = 0.0;
  for (int i = 0; i < count; ++i) {
    std::vector<GaugeFunction> gauges;
    for (Index n = 0; n < c.spec.dimension(); ++n) {
      gauges.push_back(GaugeFunction::random(rng, t0, t1, false));
    }
    const Trajectory fuzzed = reconstruct_amplitude(rephase_frame(frame, gauges), c.spec);
    const Complex factor = std::polar(1.0, gauges.front()(t0));
    for (std::size_t k = 0; k < fuzzed.size(); ++k) {
      deviation = std::max(deviation, (fuzzed[k].amplitudes() - factor * rebuilt[k].amplitudes()).norm());
    }
  }
  out["reconstruction_deviation"] = deviation;
  c.rows.add_value("gauge_reconstruction_deviation", deviation, 0.0, rec_tol);
  return out;
}

}  // namespace

const char* to_string(InitialKind kind) noexcept {
  switch (kind) {
    case InitialKind::w_plus: return "w_plus";
    case InitialKind::w_minus: return "w_minus";
    case InitialKind::v_plus: return "v_plus";
    case InitialKind::v_minus: return "v_minus";
    case InitialKind::amplitudes: return "amplitudes";
  }
  return "unknown";
}

const char* to_string(AnalysisKind kind) noexcept {
  switch (kind) {
    case AnalysisKind::phases: return "phases";
    case AnalysisKind::frame: return "frame";
    case AnalysisKind::superpose: return "superpose";
    case AnalysisKind::interfere: return "interfere";
    case AnalysisKind::resonance: return "resonance";
    case AnalysisKind::gauge_fuzz: return "gauge_fuzz";
  }
  return "unknown";
}

const std::vector<std::string>& parameter_names(Family family) {
  static const std::vector<std::string> static_names{"mu_b", "theta"};
  static const std::vector<std::string> rotating_names{"mu_b", "omega", "theta"};
  static const std::vector<std::string> none;
  switch (family) {
    case Family::static_spin: return static_names;
    case Family::rotating_spin: return rotating_names;
    case Family::custom: return none;
  }
  return none;
}

Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) invalid("scenario", "expected a JSON object");
  check_keys(doc, "", {"model", "params", "grid", "initial", "analyses", "seed", "cyclic_tol",
                       "tolerance", "custom"});
  Scenario s;
  if (!doc.contains("model")) invalid("model", "missing");
  s.model = parse_family(doc["model"]);

  if (doc.contains("params")) {
    if (!doc["params"].is_object()) invalid("params", "expected an object");
    for (const auto& [key, value] : doc["params"].items()) {
      s.params[key] = number_field(value, "params." + key);
    }
  }

  if (doc.contains("grid")) {
    const Json& g = doc["grid"];
    if (!g.is_object()) invalid("grid", "expected an object");
    check_keys(g, "grid", {"t_end", "steps"});
    if (g.contains("t_end")) {
      s.t_end = number_field(g["t_end"], "grid.t_end");
      if (!(*s.t_end > 0.0)) invalid("grid.t_end", "must be positive");
    }
    if (g.contains("steps")) {
      if (!g["steps"].is_number_integer()) invalid("grid.steps", "expected an integer");
      const long long steps = g["steps"].get<long long>();
      if (steps < kMinScenarioSteps || steps > std::numeric_limits<int>::max()) {
        invalid("grid.steps", "must be at least " + std::to_string(kMinScenarioSteps));
      }
      s.steps = static_cast<int>(steps);
    }
  }

  if (doc.contains("initial")) {
    const Json& init = doc["initial"];
    if (init.is_string()) {
      const std::string tag = init.get<std::string>();
      if (tag == "w_plus") s.initial = InitialKind::w_plus;
      else if (tag == "w_minus") s.initial = InitialKind::w_minus;
      else if (tag == "v_plus") s.initial = InitialKind::v_plus;
      else if (tag == "v_minus") s.initial = InitialKind::v_minus;
      else invalid("initial", "unknown tag '" + tag + "' (w_plus, w_minus, v_plus, v_minus, {amplitudes})");
    } else if (init.is_object()) {
      check_keys(init, "initial", {"amplitudes"});
      if (!init.contains("amplitudes") || !init["amplitudes"].is_array()) {
        invalid("initial.amplitudes", "expected an array of [re, im]");
      }
      s.initial = InitialKind::amplitudes;
      double norm2 = 0.0;
      for (std::size_t i = 0; i < init["amplitudes"].size(); ++i) {
        const Complex z = complex_field(init["amplitudes"][i], "initial.amplitudes[" + std::to_string(i) + "]");
        norm2 += std::norm(z);
        s.amplitudes.push_back(z);
      }
      if (std::abs(std::sqrt(norm2) - 1.0) > kAmplitudeNormTolerance) {
        invalid("initial.amplitudes", "not normalized (norm " + io::format_double(std::sqrt(norm2)) + ")");
      }
    } else {
      invalid("initial", "expected a tag or {\"amplitudes\": [...]}");
    }
  }

  if (doc.contains("analyses")) {
    const Json& list = doc["analyses"];
    if (!list.is_array()) invalid("analyses", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string field = "analyses[" + std::to_string(i) + "]";
      AnalysisRequest a;
      if (list[i].is_string()) {
        a.kind = parse_analysis_kind(list[i].get<std::string>(), field);
      } else if (list[i].is_object() && list[i].contains("kind") && list[i]["kind"].is_string()) {
        a.kind = parse_analysis_kind(list[i]["kind"].get<std::string>(), field + ".kind");
        a.options = list[i];
        a.options.erase("kind");
      } else {
        invalid(field, "expected a name or {\"kind\": name, ...options}");
      }
      validate_options(a, field);
      s.analyses.push_back(std::move(a));
    }
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) invalid("seed", "expected a non-negative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("cyclic_tol")) {
    s.cyclic_tol = number_field(doc["cyclic_tol"], "cyclic_tol");
    if (!(s.cyclic_tol > 0.0 && s.cyclic_tol < 1.0)) invalid("cyclic_tol", "must lie in (0, 1)");
  }
  if (doc.contains("tolerance")) {
    s.tolerance = number_field(doc["tolerance"], "tolerance");
    if (!(s.tolerance > 0.0)) invalid("tolerance", "must be positive");
  }

  if (s.model == Family::custom) {
    if (!doc.contains("custom") || !doc["custom"].is_object()) {
      invalid("custom", "custom model needs {\"samples\": [...]} or {\"samples_file\": path}");
    }
    const Json& c = doc["custom"];
    check_keys(c, "custom", {"samples", "samples_file"});
    if (c.contains("samples_file")) {
      if (c.contains("samples")) invalid("custom", "give either samples or samples_file");
      if (!c["samples_file"].is_string()) invalid("custom.samples_file", "expected a path");
      std::filesystem::path path = c["samples_file"].get<std::string>();
      if (path.is_relative()) path = base_dir / path;
      try {
        s.custom = io::read_custom_spec(path.string());
      } catch (const Error& e) {
        if (e.code() == ErrorCode::validation) throw;
        invalid("custom.samples_file", e.what());
      }
    } else {
      s.custom = io::custom_spec_from_json(nlohmann::json::parse(c.dump()));
    }
    if (s.initial == InitialKind::w_plus || s.initial == InitialKind::w_minus) {
      if (doc.contains("initial")) invalid("initial", "w_plus and w_minus need a spin model");
      s.initial = InitialKind::v_plus;
    }
  } else if (doc.contains("custom")) {
    invalid("custom", "only valid with model = custom");
  }

  const HamiltonianSpec spec = make_spec(s);
  make_initial_state(s, spec);
  make_grid(s, spec);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open scenario file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::validation, "scenario: malformed JSON: " + std::string(e.what()));
  }
  return parse_scenario(doc, path.parent_path());
}

Json to_json(const Scenario& s) {
  Json j;
  j["model"] = to_string(s.model);
  Json params = Json::object();
  for (const auto& name : parameter_names(s.model)) {
    if (s.params.contains(name)) params[name] = s.params.at(name);
  }
  j["params"] = params;
  Json grid = Json::object();
  if (s.t_end) grid["t_end"] = *s.t_end;
  if (s.steps) grid["steps"] = *s.steps;
  j["grid"] = grid;
  if (s.initial == InitialKind::amplitudes) {
    Json amps = Json::array();
    for (const Complex z : s.amplitudes) amps.push_back(complex_json(z));
    j["initial"] = {{"amplitudes", amps}};
  } else {
    j["initial"] = to_string(s.initial);
  }
  Json analyses = Json::array();
  for (const auto& a : s.analyses) {
    Json entry = {{"kind", to_string(a.kind)}};
    for (const auto& [key, value] : a.options.items()) entry[key] = value;
    analyses.push_back(entry);
  }
  j["analyses"] = analyses;
  j["seed"] = s.seed;
  j["cyclic_tol"] = s.cyclic_tol;
  j["tolerance"] = s.tolerance;
  if (s.custom) j["custom"] = Json::parse(io::custom_spec_to_json(*s.custom).dump());
  return j;
}

HamiltonianSpec make_spec(const Scenario& s) {
  validate_params(s);
  switch (s.model) {
    case Family::static_spin:
      return HamiltonianSpec::static_spin(find_param(s, "mu_b"), find_param(s, "theta"));
    case Family::rotating_spin: {
      const double mu_b = find_param(s, "mu_b");
      const double omega = find_param(s, "omega");
      const double theta = find_param(s, "theta");
      return HamiltonianSpec::rotating_spin(mu_b, omega, theta);
    }
    case Family::custom:
      if (!s.custom) invalid("custom", "missing samples");
      return *s.custom;
  }
  invalid("model", "unsupported");
}

ComplexState make_initial_state(const Scenario& s, const HamiltonianSpec& spec) {
  switch (s.initial) {
    case InitialKind::w_plus:
    case InitialKind::w_minus: {
      if (spec.family() == Family::custom) invalid("initial", "w_plus and w_minus need a spin model");
      return branch_state(spec, oracle_branch(s));
    }
    case InitialKind::v_plus:
    case InitialKind::v_minus: {
      // Lowest (v_plus) or highest (v_minus) eigenvector of H(0).
      Eigen::SelfAdjointEigenSolver<Matrix> eig(evaluate(spec, 0.0));
      const Index col = s.initial == InitialKind::v_plus ? 0 : spec.dimension() - 1;
      return ComplexState(Vector(eig.eigenvectors().col(col)));
    }
    case InitialKind::amplitudes: {
      if (static_cast<Index>(s.amplitudes.size()) != spec.dimension()) {
        invalid("initial.amplitudes", "expected " + std::to_string(spec.dimension()) + " amplitudes");
      }
      Vector v(spec.dimension());
      for (Index j = 0; j < v.size(); ++j) v(j) = s.amplitudes[static_cast<std::size_t>(j)];
      return ComplexState(std::move(v));
    }
  }
  invalid("initial", "unsupported");
}

TimeGrid make_grid(const Scenario& s, const HamiltonianSpec& spec) {
  double t_end = 0.0;
  if (s.t_end) {
    t_end = *s.t_end;
  } else if (const auto period = spec.natural_period()) {
    t_end = *period;
  } else {
    t_end = spec.as_custom()->times.back();
  }
  if (const auto* c = spec.as_custom(); c && (c->times.front() > 0.0 || c->times.back() < t_end)) {
    invalid("grid.t_end", "custom samples must cover [0, t_end]");
  }
  const int steps = s.steps ? *s.steps : std::max(default_steps(spec, t_end), kMinScenarioSteps);
  return TimeGrid(0.0, t_end, steps);
}

Report run_scenario(const Scenario& s) {
  const HamiltonianSpec spec = make_spec(s);
  const ComplexState initial = make_initial_state(s, spec);
  const TimeGrid grid = make_grid(s, spec);

  Report report;
  report.trajectory = propagate(spec, initial, grid);
  const Trajectory& traj = *report.trajectory;
  const CyclicityVerdict verdict = check_cyclic(traj, s.cyclic_tol);
  if (verdict.is_cyclic) report.phases = phase_report(traj, spec, s.cyclic_tol);

  Json& doc = report.document;
  doc["scenario"] = to_json(s);
  doc["defaults"] = {{"t_start", grid.t_start()},
                     {"t_end", grid.t_end()},
                     {"steps", grid.steps()},
                     {"dt", grid.dt()},
                     {"cyclic_tol", s.cyclic_tol},
                     {"tolerance", s.tolerance},
                     {"seed", s.seed},
                     {"gap_tol", kDefaultGapTolerance},
                     {"step_rule", "midpoint"}};
  doc["hamiltonian"] = spec.id();

  double norm_drift = 0.0;
  for (const auto& st : traj.states()) norm_drift = std::max(norm_drift, std::abs(st.norm() - 1.0));
  doc["cyclicity"] = verdict_json(verdict);
  doc["phases"] = report.phases ? phase_json(*report.phases) : Json();

  Context ctx{s, spec, grid, traj, verdict, report, RowSink(report)};
  Json sections = Json::object();
  for (const auto& a : s.analyses) {
    Json section;
    switch (a.kind) {
      case AnalysisKind::phases: section = run_phases(ctx, a); break;
      case AnalysisKind::frame: section = run_frame(ctx, a); break;
      case AnalysisKind::superpose: section = run_superpose(ctx, a); break;
      case AnalysisKind::interfere: section = run_interfere(ctx, a); break;
      case AnalysisKind::resonance: section = run_resonance(ctx, a); break;
      case AnalysisKind::gauge_fuzz: section = run_gauge_fuzz(ctx, a); break;
    }
    sections[to_string(a.kind)] = std::move(section);
  }

  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"quantity", r.quantity},
                    {"numeric", r.numeric},
                    {"analytic", r.analytic},
                    {"diff", r.diff},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass}});
  }
  doc["comparisons"] = rows;
  doc["residuals"] = {{"norm_drift", norm_drift},
                      {"decomposition", report.phases ? Json(report.phases->decomposition_residual) : Json()}};
  doc["analyses"] = sections;
  doc["verdict"] = {{"cyclic", verdict.is_cyclic}, {"pass", report.pass}};
  return report;
}

std::vector<SweepRow> run_sweep(const Scenario& base, const std::string& axis,
                                const std::vector<double>& values) {
  const auto& names = parameter_names(base.model);
  if (std::find(names.begin(), names.end(), axis) == names.end()) {
    invalid("axis", "'" + axis + "' is not a parameter of " + to_string(base.model));
  }
  std::vector<SweepRow> rows(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepRow& row = rows[i];
    row.index = i;
    row.value = values[i];
    Scenario s = base;
    s.params[axis] = values[i];
    row.params = s.params;
    try {
      const Report r = run_scenario(s);
      row.phases = r.phases;
      row.cyclic = r.document["verdict"]["cyclic"].get<bool>();
      row.pass = r.pass;
      const Json& sections = r.document["analyses"];
      if (sections.contains("superpose")) {
        row.condition_gap = sections["superpose"]["condition_gap"].get<double>();
        row.residual = sections["superpose"]["residual"].get<double>();
      }
    } catch (const std::exception& e) {
      row.pass = false;
      row.error = e.what();
    }
  }
  return rows;
}

namespace {

std::string csv_cell(const std::optional<double>& x) { return x ? io::format_double(*x) : ""; }

std::string csv_text(const std::string& text) {
  std::string out = "\"";
  for (const char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::string& axis, const std::vector<SweepRow>& rows) {
  out << "index,axis,value,theta,omega,mu_b,condition_gap,residual,aa_phase,berry_phase,"
         "total_phase,dynamical_phase,decomposition_residual,cyclic,pass,error\n";
  auto param = [](const SweepRow& r, const char* name) -> std::optional<double> {
    const auto it = r.params.find(name);
    if (it == r.params.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& r : rows) {
    const PhaseReport* p = r.phases ? &*r.phases : nullptr;
    out << r.index << ',' << axis << ',' << io::format_double(r.value) << ','
        << csv_cell(param(r, "theta")) << ',' << csv_cell(param(r, "omega")) << ','
        << csv_cell(param(r, "mu_b")) << ',' << csv_cell(r.condition_gap) << ','
        << csv_cell(r.residual) << ',' << csv_cell(p ? std::optional(p->aa_phase) : std::nullopt)
        << ',' << csv_cell(p ? p->berry_phase : std::nullopt) << ','
        << csv_cell(p ? std::optional(p->total_phase) : std::nullopt) << ','
        << csv_cell(p ? std::optional(p->dynamical) : std::nullopt) << ','
        << csv_cell(p ? std::optional(p->decomposition_residual) : std::nullopt) << ','
        << (r.cyclic ? "true" : "false") << ',' << (r.pass ? "true" : "false") << ','
        << (r.error.empty() ? "" : csv_text(r.error)) << '\n';
  }
}

}  // namespace geophase
