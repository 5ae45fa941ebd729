#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "geophase/hamiltonian.hpp"
#include "geophase/state.hpp"

namespace geophase::io {

/// Shortest representation that round-trips to the same double.
std::string format_double(double x);

/// Header `t,re_0,im_0,re_1,im_1,...`; one row per grid node.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Header `t,w0_0_re,w0_0_im,w0_1_re,...`: frame vector n (0-based), then
/// component j, real part before imaginary part.
void write_frame_csv(std::ostream& out, const FrameTrajectory& frame);

/// Custom Hamiltonian samples:
///   {"samples": [{"t": 0.0, "matrix": [[re, im], ...]}, ...]}
/// with d*d row-major entries per record and strictly increasing t.
HamiltonianSpec custom_spec_from_json(const nlohmann::json& doc);
nlohmann::json custom_spec_to_json(const HamiltonianSpec& spec);
HamiltonianSpec read_custom_spec(const std::string& path);

}  // namespace geophase::io
