#include "geophase/phases.hpp"

#include <cmath>
#include <string>

#include "geophase/error.hpp"

namespace geophase {

namespace {

double consecutive_arg(const ComplexState& a, const ComplexState& b, std::size_t k) {
  const Complex ov = inner_product(a, b);
  if (std::abs(ov) < kMinConsecutiveOverlap) {
    throw Error(ErrorCode::under_resolved,
                "under-resolved track: |<u_k|u_k+1>| = " + std::to_string(std::abs(ov)) +
                    " at node " + std::to_string(k));
  }
  return std::arg(ov);
}

double expectation(const Matrix& h, const ComplexState& s) {
  return s.amplitudes().dot(h * s.amplitudes()).real();
}

}  // namespace

double overlap_phase_sum(std::span<const ComplexState> track) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < track.size(); ++k) {
    sum += consecutive_arg(track[k], track[k + 1], k);
  }
  return sum;
}

double connection_integral(std::span<const ComplexState> track) {
  return -overlap_phase_sum(track);
}

double dynamical_phase(const Trajectory& traj, const HamiltonianSpec& spec) {
  if (traj.dimension() != spec.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "trajectory and Hamiltonian dimensions differ");
  }
  const TimeGrid& g = traj.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double e = expectation(evaluate(spec, g.node(k)), traj[k]);
    const double weight = (k == 0 || k + 1 == traj.size()) ? 0.5 : 1.0;
    sum += weight * e;
  }
  return sum * g.dt();
}

double aa_phase_summed(const Trajectory& traj, const CyclicityVerdict& verdict) {
  if (!verdict.is_cyclic || !verdict.total_phase) {
    throw Error(ErrorCode::not_cyclic,
                "AA phase requires a cyclic trajectory (overlap magnitude " +
                    std::to_string(verdict.overlap_magnitude) + ")");
  }
  return *verdict.total_phase - overlap_phase_sum(traj.states());
}

double aa_phase(const Trajectory& traj, const CyclicityVerdict& verdict) {
  return wrap_phase(aa_phase_summed(traj, verdict));
}

double berry_phase(const EigenFrame& frame, Index track) {
  if (!frame.loop_closed) {
    throw Error(ErrorCode::open_loop, "Berry phase requires a closed parameter loop");
  }
  const auto vectors = frame.frame.track(track);
  double sum = overlap_phase_sum(vectors);
  sum += std::arg(inner_product(vectors.back(), vectors.front()));
  return -sum;
}

PhaseReport phase_report(const Trajectory& traj, const HamiltonianSpec& spec, double cyclic_tol) {
  const CyclicityVerdict verdict = check_cyclic(traj, cyclic_tol);
  PhaseReport r;
  const double summed = aa_phase_summed(traj, verdict);
  r.total_phase = *verdict.total_phase;
  r.aa_phase = wrap_phase(summed);
  r.aa_phase_unwrapped = summed;
  r.dynamical = dynamical_phase(traj, spec);
  r.period = traj.grid().duration();

  const Matrix h0 = evaluate(spec, traj.grid().t_start());
  const Matrix h1 = evaluate(spec, traj.grid().t_end());
  const bool closed =
      (h1 - h0).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, h0.cwiseAbs().maxCoeff());
  if (closed) {
    try {
      const EigenFrame frame = eigen_frame(spec, traj.grid());
      Index best = 0;
      (frame.frame[0].adjoint() * traj.front().amplitudes()).cwiseAbs().maxCoeff(&best);
      const double gamma = berry_phase(frame, best);
      r.berry_phase = wrap_phase(gamma);
      r.berry_phase_unwrapped = gamma;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_spectrum && e.code() != ErrorCode::under_resolved) throw;
    }
  }
  r.decomposition_residual = std::abs(wrap_phase(r.total_phase - r.aa_phase + r.dynamical));
  return r;
}

Complex pancharatnam_overlap(const Trajectory& traj, std::size_t k) {
  if (k >= traj.size()) {
    throw Error(ErrorCode::invalid_argument, "node index out of range");
  }
  const std::span<const ComplexState> head(traj.states().data(), k + 1);
  return std::polar(1.0, -overlap_phase_sum(head)) * inner_product(traj.front(), traj[k]);
}

}  // namespace geophase
