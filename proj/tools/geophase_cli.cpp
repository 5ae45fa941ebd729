#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geophase/error.hpp"
#include "geophase/io.hpp"
#include "geophase/scenario.hpp"
#include "geophase/verification.hpp"

namespace {

// Exit-code contract.
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> values;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(first), &used);
    } catch (const std::exception&) {
      throw geophase::Error(geophase::ErrorCode::validation, "--values: '" + item + "' is not a number");
    }
    if (item.find_first_not_of(" \t", first + used) != std::string::npos) {
      throw geophase::Error(geophase::ErrorCode::validation, "--values: '" + item + "' is not a number");
    }
    values.push_back(v);
  }
  return values;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw geophase::Error(geophase::ErrorCode::io, "cannot write " + path);
  writer(out);
  if (!out) throw geophase::Error(geophase::ErrorCode::io, "write failed for " + path);
}

// Appends the subcommand's analysis unless the scenario already requests it.
geophase::Scenario with_analysis(geophase::Scenario s, geophase::AnalysisKind kind) {
  for (const auto& a : s.analyses) {
    if (a.kind == kind) return s;
  }
  s.analyses.push_back({kind, geophase::Json::object()});
  return s;
}

int emit(const geophase::Report& r) {
  std::cout << r.document.dump(2) << '\n';
  return r.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric phases of cyclic quantum evolutions"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string traj_out;
  std::string frame_out;
  std::string axis;
  std::string values;
  std::string sweep_out;
  bool mutate_left = false;
  double steps_scale = 1.0;

  auto* simulate = app.add_subcommand("simulate", "Run every analysis listed in a scenario");
  simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  simulate->add_option("--traj-out", traj_out, "Write the trajectory as CSV");

  auto* phases = app.add_subcommand("phases", "Total, dynamical, AA and Berry phases with oracle rows");
  phases->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  auto* frame = app.add_subcommand("frame", "w-frame and effective Hamiltonian");
  frame->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  frame->add_option("--frame-out", frame_out, "Write the frame as CSV");

  auto* sweep = app.add_subcommand("sweep", "Repeat a scenario over values of one parameter");
  sweep->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sweep->add_option("--axis", axis, "Parameter to vary")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", sweep_out, "Write the table to a file instead of stdout");

  auto* interfere = app.add_subcommand("interfere", "Interference intensity |psi(T) + psi(0)|^2");
  interfere->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_flag("--mutate-left-endpoint", mutate_left)->group("");
  verify->add_option("--steps-scale", steps_scale)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      geophase::VerifyOptions opts;
      if (mutate_left) opts.rule = geophase::StepRule::left_endpoint;
      opts.steps_scale = steps_scale;
      bool all = true;
      geophase::run_verification(opts, [&](const geophase::CriterionResult& r) {
        std::printf("[%s] %2d %-40s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
      });
      return all ? kExitPass : kExitFail;
    }

    const geophase::Scenario s = geophase::load_scenario(scenario_path);
    if (simulate->parsed()) {
      const auto report = geophase::run_scenario(s);
      if (!traj_out.empty()) {
        write_file(traj_out, [&](std::ostream& out) { geophase::io::write_trajectory_csv(out, *report.trajectory); });
      }
      return emit(report);
    }
    if (phases->parsed()) return emit(geophase::run_scenario(with_analysis(s, geophase::AnalysisKind::phases)));
    if (interfere->parsed()) {
      return emit(geophase::run_scenario(with_analysis(s, geophase::AnalysisKind::interfere)));
    }
    if (frame->parsed()) {
      const auto report = geophase::run_scenario(with_analysis(s, geophase::AnalysisKind::frame));
      if (!frame_out.empty()) {
        if (!report.frame) {
          throw geophase::Error(geophase::ErrorCode::not_cyclic, "no w-frame: the evolution is not cyclic");
        }
        write_file(frame_out, [&](std::ostream& out) { geophase::io::write_frame_csv(out, *report.frame); });
      }
      return emit(report);
    }
    if (sweep->parsed()) {
      const auto rows = geophase::run_sweep(s, axis, parse_values(values));
      if (sweep_out.empty()) {
        geophase::write_sweep_csv(std::cout, axis, rows);
      } else {
        write_file(sweep_out, [&](std::ostream& out) { geophase::write_sweep_csv(out, axis, rows); });
      }
      for (const auto& r : rows) {
        if (!r.pass) return kExitFail;
      }
      return kExitPass;
    }
  } catch (const geophase::Error& e) {
    std::cerr << "geophase: " << e.what() << '\n';
    const bool usage = e.code() == geophase::ErrorCode::validation || e.code() == geophase::ErrorCode::io;
    return usage ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "geophase: internal error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
