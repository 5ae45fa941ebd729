#include "geophase/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "geophase/error.hpp"

namespace geophase::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const Index d = traj.dimension();
  out << "t";
  for (Index j = 0; j < d; ++j) out << ",re_" << j << ",im_" << j;
  out << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.grid().node(k));
    for (Index j = 0; j < d; ++j) {
      out << ',' << format_double(traj[k][j].real()) << ',' << format_double(traj[k][j].imag());
    }
    out << '\n';
  }
}

void write_frame_csv(std::ostream& out, const FrameTrajectory& frame) {
  const Index d = frame.dimension();
  out << "t";
  for (Index n = 0; n < d; ++n) {
    for (Index j = 0; j < d; ++j) out << ",w" << n << '_' << j << "_re,w" << n << '_' << j << "_im";
  }
  out << '\n';
  for (std::size_t k = 0; k < frame.size(); ++k) {
    out << format_double(frame.grid().node(k));
    for (Index n = 0; n < d; ++n) {
      for (Index j = 0; j < d; ++j) {
        const Complex z = frame[k](j, n);
        out << ',' << format_double(z.real()) << ',' << format_double(z.imag());
      }
    }
    out << '\n';
  }
}

HamiltonianSpec custom_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array()) {
    throw Error(ErrorCode::validation, "custom.samples: expected an array of {t, matrix} records");
  }
  std::vector<double> times;
  std::vector<Matrix> matrices;
  for (std::size_t i = 0; i < doc["samples"].size(); ++i) {
    const auto& rec = doc["samples"][i];
    const std::string where = "custom.samples[" + std::to_string(i) + "]";
    if (!rec.is_object() || !rec.contains("t") || !rec["t"].is_number() || !rec.contains("matrix") ||
        !rec["matrix"].is_array()) {
      throw Error(ErrorCode::validation, where + ": expected {\"t\": number, \"matrix\": [[re, im], ...]}");
    }
    const auto& entries = rec["matrix"];
    const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
    if (d < 2 || static_cast<std::size_t>(d * d) != entries.size()) {
      throw Error(ErrorCode::validation, where + ".matrix: need d*d entries with d >= 2");
    }
    Matrix h(d, d);
    for (Index r = 0; r < d; ++r) {
      for (Index c = 0; c < d; ++c) {
        const auto& z = entries[static_cast<std::size_t>(r * d + c)];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
          throw Error(ErrorCode::validation, where + ".matrix: entries must be [re, im] pairs");
        }
        h(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
      }
    }
    times.push_back(rec["t"].get<double>());
    matrices.push_back(std::move(h));
  }
  try {
    return HamiltonianSpec::custom(std::move(times), std::move(matrices));
  } catch (const Error& e) {
    throw Error(ErrorCode::validation, std::string("custom.samples: ") + e.what());
  }
}

nlohmann::json custom_spec_to_json(const HamiltonianSpec& spec) {
  const auto* c = spec.as_custom();
  if (!c) throw Error(ErrorCode::invalid_argument, "not a custom Hamiltonian");
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t i = 0; i < c->times.size(); ++i) {
    nlohmann::json entries = nlohmann::json::array();
    const Matrix& h = c->matrices[i];
    for (Index r = 0; r < h.rows(); ++r) {
      for (Index col = 0; col < h.cols(); ++col) {
        entries.push_back({h(r, col).real(), h(r, col).imag()});
      }
    }
    samples.push_back({{"t", c->times[i]}, {"matrix", std::move(entries)}});
  }
  return {{"samples", std::move(samples)}};
}

HamiltonianSpec read_custom_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open custom samples file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::validation, "custom samples file '" + path + "': " + e.what());
  }
  return custom_spec_from_json(doc);
}

}  // namespace geophase::io
