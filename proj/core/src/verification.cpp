#include "geophase/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "geophase/error.hpp"
#include "geophase/gauge.hpp"
#include "geophase/hamiltonian.hpp"
#include "geophase/phases.hpp"
#include "geophase/superposition.hpp"
#include "geophase/wframe.hpp"

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStaticThetas[] = {0.0,          kPi / 6.0,        kPi / 4.0, kPi / 3.0,
                                    kPi / 2.0,    2.0 * kPi / 3.0,  5.0 * kPi / 6.0, kPi};
constexpr double kRotatingThetas[] = {kPi / 6.0, kPi / 3.0, kPi / 2.0};
constexpr double kRotatingRatios[] = {0.1, 1.0, 10.0};
constexpr std::uint64_t kVerifySeed = 20240601;
constexpr double kGenericResonanceMargin = 0.05;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

class Suite {
 public:
  explicit Suite(const VerifyOptions& o) : opts_(o) {}

  int steps(int n) const {
    return std::max(2, static_cast<int>(std::lround(n * opts_.steps_scale)));
  }

  Trajectory run(const HamiltonianSpec& spec, const ComplexState& psi0, double t_end, int n) const {
    return propagate(spec, psi0, TimeGrid(0.0, t_end, n), PropagatorOptions{opts_.rule});
  }

  // Phase report of one cyclic closed-form branch; throws not_cyclic otherwise.
  PhaseReport static_report(double theta, int n) const {
    const StaticSpin p{1.0, theta};
    const auto spec = HamiltonianSpec::static_spin(p.mu_b, p.theta);
    const Trajectory t = run(spec, spin::static_w(p, Branch::plus, 0.0), kPi / p.mu_b, steps(n));
    return phase_report(t, spec);
  }

  PhaseReport rotating_report(double theta, double ratio, int n) const {
    const RotatingSpin p{1.0, ratio, theta};
    const auto spec = HamiltonianSpec::rotating_spin(p.mu_b, p.omega, p.theta);
    const Trajectory t = run(spec, spin::rotating_solution(p, Branch::plus, 0.0), 2.0 * kPi / p.omega, steps(n));
    return phase_report(t, spec);
  }

  const VerifyOptions& opts_;
  // Reused by the decomposition check.
  std::vector<PhaseReport> static_reports;
  std::vector<PhaseReport> rotating_reports;
};

CriterionResult c1_static_aa(Suite& s) {
  double worst = 0.0;
  double slowest = 0.0;
  for (const double theta : kStaticThetas) {
    const auto start = std::chrono::steady_clock::now();
    const PhaseReport r = s.static_report(theta, 20000);
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    worst = std::max(worst, std::abs(wrap_phase(r.aa_phase - kPi * (1.0 - std::cos(theta)))));
    s.static_reports.push_back(r);
  }
  return {1, "static-spin AA phase", worst <= 1e-6 && slowest < 1.0,
          "max |d beta| = " + sci(worst) + " (tol 1e-6), slowest point " + sci(slowest) + " s (limit 1 s)"};
}

CriterionResult c2_static_total(Suite& s) {
  double worst = 0.0;
  for (const auto& r : s.static_reports) worst = std::max(worst, std::abs(wrap_phase(r.total_phase - kPi)));
  return {2, "static-spin total phase", worst <= 1e-8, "max |phi - pi| = " + sci(worst) + " (tol 1e-8)"};
}

CriterionResult c3_rotating_aa(Suite& s) {
  double worst = 0.0;
  for (const double theta : kRotatingThetas) {
    for (const double ratio : kRotatingRatios) {
      const PhaseReport r = s.rotating_report(theta, ratio, 40000);
      const double alpha = alpha_tilt(1.0, ratio, theta);
      worst = std::max(worst, std::abs(wrap_phase(r.aa_phase - kPi * (1.0 + std::cos(theta - alpha)))));
      s.rotating_reports.push_back(r);
    }
  }
  return {3, "rotating-spin AA phase", worst <= 1e-5, "max |d beta| = " + sci(worst) + " (tol 1e-5)"};
}

CriterionResult c4_effective_hamiltonian(Suite& s) {
  double off = 0.0;
  double diag = 0.0;
  for (const double theta : kRotatingThetas) {
    for (const double ratio : kRotatingRatios) {
      const RotatingSpin p{1.0, ratio, theta};
      const auto spec = HamiltonianSpec::rotating_spin(p.mu_b, p.omega, p.theta);
      const TimeGrid g(0.0, 2.0 * kPi / p.omega, s.steps(40000));
      const auto heff = effective_hamiltonian(spin::rotating_w_frame(p, alpha_tilt(1.0, ratio, theta), g), spec);
      off = std::max(off, heff.max_off_diagonal() / p.mu_b);
      for (Index n = 0; n < 2; ++n) {
        const double e = spin::frame_energy(p, n == 0 ? Branch::plus : Branch::minus);
        for (const double d : heff.diagonal(n)) diag = std::max(diag, std::abs(d - e));
      }
    }
  }
  double static_off = 0.0;
  for (const double theta : kStaticThetas) {
    const StaticSpin p{1.0, theta};
    const auto spec = HamiltonianSpec::static_spin(p.mu_b, p.theta);
    const TimeGrid g(0.0, kPi, s.steps(default_steps(spec, kPi)));
    static_off = std::max(static_off, effective_hamiltonian(spin::static_w_frame(p, g), spec).max_off_diagonal());
  }
  return {4, "effective-Hamiltonian diagonalization", off <= 1e-8 && diag <= 1e-8 && static_off <= 1e-8,
          "rotating max|H12|/muB = " + sci(off) + ", max|dE| = " + sci(diag) + "; static max|H12| = " +
              sci(static_off) + " (tol 1e-8)"};
}

CriterionResult c5_decomposition(Suite& s) {
  double worst = 0.0;
  for (const auto* set : {&s.static_reports, &s.rotating_reports}) {
    for (const auto& r : *set) worst = std::max(worst, r.decomposition_residual);
  }
  return {5, "decomposition phi = beta - D", worst <= 1e-7,
          "max |wrap(phi - beta + D)| = " + sci(worst) + " over 17 scenarios (tol 1e-7)"};
}

CriterionResult c6_adiabatic(Suite& s) {
  const double theta = kPi / 3.0;
  double gap[2] = {0.0, 0.0};
  const double omegas[2] = {0.01, 0.02};
  for (int i = 0; i < 2; ++i) {
    const RotatingSpin p{1.0, omegas[i], theta};
    const auto spec = HamiltonianSpec::rotating_spin(p.mu_b, p.omega, p.theta);
    const int n = s.steps(static_cast<int>(4000.0 / omegas[i]));
    const PhaseReport r = phase_report(
        s.run(spec, spin::rotating_solution(p, Branch::plus, 0.0), 2.0 * kPi / p.omega, n), spec);
    if (!r.berry_phase) throw Error(ErrorCode::open_loop, "adiabatic check: Berry phase unavailable");
    gap[i] = std::abs(wrap_phase(r.aa_phase - *r.berry_phase));
  }
  const double ratio = gap[0] / gap[1];
  return {6, "adiabatic limit", ratio >= 0.4 && ratio <= 0.6,
          "|beta-gamma| = " + sci(gap[0]) + " (omega 0.01), " + sci(gap[1]) + " (omega 0.02), ratio " +
              sci(ratio) + " (range [0.4, 0.6])"};
}

CriterionResult c7_extreme(Suite& s) {
  const PhaseReport r = s.rotating_report(kPi / 3.0, 1000.0, 40000);
  return {7, "extreme non-adiabatic limit", std::abs(r.aa_phase) <= 0.02,
          "|wrap(beta)| = " + sci(std::abs(r.aa_phase)) + " at omega/muB = 1e3 (tol 0.02)"};
}

CriterionResult c8_gauge_fuzz(Suite& s) {
  std::mt19937_64 rng(kVerifySeed);
  double phase_shift = 0.0;
  double reconstruction = 0.0;
  const auto fuzz = [&](const HamiltonianSpec& spec, const ComplexState& psi0, double period) {
    const Trajectory traj = s.run(spec, psi0, period, s.steps(10000));
    const CyclicityVerdict v = check_cyclic(traj);
    const double beta = aa_phase(traj, v);
    const EigenFrame ef = eigen_frame(spec, traj.grid());
    Index track = 0;
    (ef.frame[0].adjoint() * psi0.amplitudes()).cwiseAbs().maxCoeff(&track);
    const double gamma = berry_phase(ef, track);
    const FrameTrajectory w = build_w_frame(traj, v);
    const Trajectory rebuilt = reconstruct_amplitude(w, spec);
    const double t0 = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Trajectory shifted = rephase_trajectory(traj, GaugeFunction::random(rng, t0, period, true));
      phase_shift = std::max(phase_shift, std::abs(wrap_phase(aa_phase(shifted, check_cyclic(shifted)) - beta)));
      const GaugeFunction closed[2] = {GaugeFunction::random(rng, t0, period, true),
                                       GaugeFunction::random(rng, t0, period, true)};
      const EigenFrame fuzzed{rephase_frame(ef.frame, closed), ef.energies, ef.loop_closed};
      phase_shift = std::max(phase_shift, std::abs(wrap_phase(berry_phase(fuzzed, track) - gamma)));
    }
    for (int i = 0; i < 100; ++i) {
      const GaugeFunction open[2] = {GaugeFunction::random(rng, t0, period, false),
                                     GaugeFunction::random(rng, t0, period, false)};
      const Trajectory again = reconstruct_amplitude(rephase_frame(w, open), spec);
      const Complex factor = std::polar(1.0, open[0](t0));
      for (std::size_t k = 0; k < again.size(); ++k) {
        reconstruction = std::max(reconstruction, (again[k].amplitudes() - factor * rebuilt[k].amplitudes()).norm());
      }
    }
  };
  const StaticSpin sp{1.0, kPi / 3.0};
  fuzz(HamiltonianSpec::static_spin(sp.mu_b, sp.theta), spin::static_w(sp, Branch::plus, 0.0), kPi);
  const RotatingSpin rp{1.0, 1.0, kPi / 3.0};
  fuzz(HamiltonianSpec::rotating_spin(rp.mu_b, rp.omega, rp.theta), spin::rotating_solution(rp, Branch::plus, 0.0),
       2.0 * kPi);
  return {8, "gauge-invariance fuzzing", phase_shift <= 1e-8 && reconstruction <= 1e-9,
          "max beta/gamma shift = " + sci(phase_shift) + " (tol 1e-8), max reconstruction deviation = " +
              sci(reconstruction) + " (tol 1e-9)"};
}

CriterionResult c9_parallel_transport(Suite& s) {
  std::mt19937_64 rng(kVerifySeed + 9);
  double residual = 0.0;
  double covariance = 0.0;
  const auto check = [&](const HamiltonianSpec& spec, const ComplexState& psi0, double period) {
    const Trajectory traj = s.run(spec, psi0, period, s.steps(default_steps(spec, period)));
    const Trajectory bar = parallel_transport_representative(traj);
    residual = std::max(residual, nonlinear_residual(bar, spec));
    for (int i = 0; i < 20; ++i) {
      const GaugeFunction g = GaugeFunction::random(rng, 0.0, period, false);
      const Trajectory shifted = parallel_transport_representative(rephase_trajectory(traj, g));
      const Complex factor = std::polar(1.0, g(0.0));
      for (std::size_t k = 0; k < bar.size(); ++k) {
        covariance = std::max(covariance, (shifted[k].amplitudes() - factor * bar[k].amplitudes()).norm());
      }
    }
  };
  const StaticSpin sp{1.0, kPi / 3.0};
  check(HamiltonianSpec::static_spin(sp.mu_b, sp.theta), spin::static_w(sp, Branch::plus, 0.0), kPi);
  const RotatingSpin rp{1.0, 1.0, kPi / 3.0};
  check(HamiltonianSpec::rotating_spin(rp.mu_b, rp.omega, rp.theta), spin::rotating_solution(rp, Branch::plus, 0.0),
        2.0 * kPi);
  return {9, "parallel-transport representative", residual <= 1e-6 && covariance <= 1e-10,
          "nonlinear residual = " + sci(residual) + " (tol 1e-6), covariance deviation = " + sci(covariance) +
              " (tol 1e-10)"};
}

CriterionResult c10_superposition(Suite& s) {
  const SuperpositionSpec c(Complex(std::numbers::sqrt2 / 2.0, 0.0), Complex(0.0, std::numbers::sqrt2 / 2.0));
  NonlinearSuperpositionResult r[2];
  const double thetas[2] = {kPi / 3.0, kPi / 2.0};
  for (int i = 0; i < 2; ++i) {
    const StaticSpin p{1.0, thetas[i]};
    const auto spec = HamiltonianSpec::static_spin(p.mu_b, p.theta);
    const int n = s.steps(20000);
    r[i] = nonlinear_superposition_test(s.run(spec, spin::static_w(p, Branch::plus, 0.0), kPi, n),
                                        s.run(spec, spin::static_w(p, Branch::minus, 0.0), kPi, n), c, spec);
  }
  const bool pass = std::abs(r[0].condition_gap - 1.0) <= 1e-9 && r[0].residual >= 1e-3 &&
                    r[1].condition_gap < 1e-12 && r[1].residual <= 1e-5;
  return {10, "superposition dichotomy", pass,
          "theta=pi/3: gap " + sci(r[0].condition_gap) + ", residual " + sci(r[0].residual) +
              " (need >= 1e-3); theta=pi/2: gap " + sci(r[1].condition_gap) + ", residual " + sci(r[1].residual) +
              " (need <= 1e-5)"};
}

CriterionResult c11_resonance(Suite& s) {
  const double omega = 1.0;
  const double theta = kPi / 3.0;
  const int pairs[3][2] = {{1, 3}, {1, 2}, {2, 5}};
  double resonant_worst = 1.0;
  for (const auto& nm : pairs) {
    const RotatingSpin p{solve_resonant_mu_b(omega, theta, nm[0], nm[1]), omega, theta};
    const auto spec = HamiltonianSpec::rotating_spin(p.mu_b, p.omega, p.theta);
    const double period = 2.0 * kPi * nm[0] / omega;
    const Trajectory t =
        s.run(spec, spin::rotating_superposition_initial(p, kPi / 2.0, Branch::plus), period, s.steps(40000 * nm[0]));
    resonant_worst = std::min(resonant_worst, check_cyclic(t).overlap_magnitude);
  }
  std::mt19937_64 rng(kVerifySeed + 11);
  std::uniform_real_distribution<double> mu_dist(0.3, 2.0);
  std::uniform_real_distribution<double> omega_dist(0.3, 2.0);
  std::uniform_real_distribution<double> theta_dist(0.2, kPi - 0.2);
  double generic_best = 0.0;
  for (int i = 0; i < 17; ++i) {
    RotatingSpin p{mu_dist(rng), omega_dist(rng), theta_dist(rng)};
    // Generic means off resonance: redraw within 0.05 of an integer winding.
    while (resonance_check(p, 2.0 * kPi / p.omega).m_residual < kGenericResonanceMargin) {
      p = {mu_dist(rng), omega_dist(rng), theta_dist(rng)};
    }
    const auto spec = HamiltonianSpec::rotating_spin(p.mu_b, p.omega, p.theta);
    const Trajectory t = s.run(spec, spin::rotating_superposition_initial(p, kPi / 2.0, Branch::plus),
                               2.0 * kPi / p.omega, s.steps(20000));
    generic_best = std::max(generic_best, check_cyclic(t).overlap_magnitude);
  }
  return {11, "resonance", resonant_worst >= 1.0 - 1e-6 && generic_best < 1.0 - 1e-3,
          "resonant min |<psi(0)|psi(T)>| = " + sci(resonant_worst) + " (need >= 1 - 1e-6); generic max = " +
              sci(generic_best) + " (need < 1 - 1e-3)"};
}

CriterionResult c12_unitarity(Suite& s) {
  const RotatingSpin p{1.0, 1.0, kPi / 3.0};
  const auto spec = HamiltonianSpec::rotating_spin(p.mu_b, p.omega, p.theta);
  const Trajectory long_run = s.run(spec, spin::rotating_solution(p, Branch::plus, 0.0), 2.0 * kPi, 100000);
  double drift = 0.0;
  for (const auto& st : long_run.states()) drift = std::max(drift, std::abs(st.norm() - 1.0));

  const auto error_at = [&](int n) {
    const Trajectory t = s.run(spec, spin::rotating_solution(p, Branch::plus, 0.0), 2.0 * kPi, n);
    double e = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const Vector exact = spin::rotating_solution(p, Branch::plus, t.grid().node(k)).amplitudes();
      e = std::max(e, (t[k].amplitudes() - exact).norm());
    }
    return e;
  };
  const double e200 = error_at(200);
  const double e400 = error_at(400);
  const double e800 = error_at(800);
  const double r1 = e200 / e400;
  const double r2 = e400 / e800;

  // The static Hamiltonian is constant, so the midpoint rule is exact there.
  const StaticSpin sp{1.0, kPi / 3.0};
  const auto sspec = HamiltonianSpec::static_spin(sp.mu_b, sp.theta);
  const Trajectory st = s.run(sspec, spin::static_w(sp, Branch::plus, 0.0), kPi, 200);
  double static_err = 0.0;
  for (std::size_t k = 0; k < st.size(); ++k) {
    const Vector exact = spin::static_solution(sp, Branch::plus, st.grid().node(k)).amplitudes();
    static_err = std::max(static_err, (st[k].amplitudes() - exact).norm());
  }

  const bool pass = drift <= 1e-9 && r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5 && static_err <= 1e-12;
  return {12, "unitarity and convergence", pass,
          "norm drift = " + sci(drift) + " (tol 1e-9); error ratios " + sci(r1) + ", " + sci(r2) +
              " (range [3.5, 4.5]); static error = " + sci(static_err) + " (tol 1e-12)"};
}

}  // namespace

std::vector<CriterionResult> run_verification(const VerifyOptions& options,
                                              const std::function<void(const CriterionResult&)>& on_result) {
  using Check = CriterionResult (*)(Suite&);
  static constexpr Check checks[] = {c1_static_aa,    c2_static_total,       c3_rotating_aa,
                                     c4_effective_hamiltonian, c5_decomposition, c6_adiabatic,
                                     c7_extreme,      c8_gauge_fuzz,         c9_parallel_transport,
                                     c10_superposition, c11_resonance,       c12_unitarity};
  static const char* const names[] = {"static-spin AA phase",
                                      "static-spin total phase",
                                      "rotating-spin AA phase",
                                      "effective-Hamiltonian diagonalization",
                                      "decomposition phi = beta - D",
                                      "adiabatic limit",
                                      "extreme non-adiabatic limit",
                                      "gauge-invariance fuzzing",
                                      "parallel-transport representative",
                                      "superposition dichotomy",
                                      "resonance",
                                      "unitarity and convergence"};
  Suite suite(options);
  std::vector<CriterionResult> results;
  const auto suite_start = std::chrono::steady_clock::now();
  for (int i = 0; i < 12; ++i) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = checks[i](suite);
    } catch (const std::exception& e) {
      r = {i + 1, names[i], false, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  CriterionResult budget{13, "verify budget", all && total <= kVerifyBudgetSeconds,
                         "suite time " + sci(total) + " s (limit 60 s), criteria 1-12 " +
                             (all ? "all pass" : "have failures"),
                         total};
  if (on_result) on_result(budget);
  results.push_back(std::move(budget));
  return results;
}

}  // namespace geophase
