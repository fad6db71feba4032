// Batch front end: single certification runs, parameter sweeps, MIC
// lower-bound certificates, invariant suites, and the eta-simulation demo.
//
// Exit codes: 0 success/pass, 1 verdict NO, 2 validation error, 3 suite failure.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qcert/experiment.hpp"
#include "qcert/json_io.hpp"
#include "qcert/simulate.hpp"
#include "qcert/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSuiteFailure = 3;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text << '\n';
}

qcert::ExperimentConfig load_config(const std::string& path, std::uint64_t seed_override,
                                    bool seed_given, const std::string& mode) {
  qcert::ExperimentConfig cfg = qcert::experiment_config_from_json(qcert::load_json_file(path));
  if (seed_given) cfg.seed = seed_override;
  if (mode == "paper") cfg.mode = qcert::ConstantsMode::kPaper;
  if (mode == "calibrated") cfg.mode = qcert::ConstantsMode::kCalibrated;
  return cfg;
}

std::vector<qcert::ExperimentConfig> expand_grid(const qcert::Json& spec, std::uint64_t seed_override,
                                                 bool seed_given, const std::string& mode) {
  qcert::Json base = spec.contains("base") ? spec.at("base") : spec;
  std::vector<qcert::Json> cells{base};
  if (spec.contains("grid")) {
    for (const auto& [axis, values] : spec.at("grid").items()) {
      std::vector<qcert::Json> expanded;
      for (const qcert::Json& cell : cells)
        for (const qcert::Json& value : values) {
          qcert::Json next = cell;
          next[axis] = value;
          expanded.push_back(std::move(next));
        }
      cells = std::move(expanded);
    }
  }
  std::vector<qcert::ExperimentConfig> configs;
  configs.reserve(cells.size());
  for (const qcert::Json& cell : cells) {
    qcert::ExperimentConfig cfg = qcert::experiment_config_from_json(cell);
    if (seed_given) cfg.seed = seed_override;
    if (mode == "paper") cfg.mode = qcert::ConstantsMode::kPaper;
    if (mode == "calibrated") cfg.mode = qcert::ConstantsMode::kCalibrated;
    configs.push_back(std::move(cfg));
  }
  return configs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum state certification laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, format = "json", mode;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_option("--config", config_path, "JSON configuration file")->type_name("path.json");
  app.add_option("--seed", seed, "master seed override")->each([&](const std::string&) {
    seed_given = true;
  });
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--mode", mode, "constants mode")->check(CLI::IsMember({"paper", "calibrated"}));
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));

  auto* certify_cmd = app.add_subcommand("certify", "run one certification trial");
  auto* sweep_cmd = app.add_subcommand("sweep", "run a grid of Monte Carlo success estimates");
  auto* mic_cert_cmd =
      app.add_subcommand("mic-cert", "lower-bound certificate from POVM JSON files");
  std::vector<std::string> povm_paths;
  double mic_eps = 0.1;
  mic_cert_cmd->add_option("povms", povm_paths, "POVM JSON files")->required();
  mic_cert_cmd->add_option("--eps", mic_eps, "accuracy parameter in (0, 1]");
  auto* verify_cmd = app.add_subcommand("verify", "run invariant suites");
  std::string suite = "all";
  verify_cmd->add_option("--suite", suite, "suite selector");
  auto* simulate_cmd = app.add_subcommand("simulate", "eta-simulation demo");
  int sim_d = 5, sim_bits = 2;
  double sim_eta = 0.01;
  std::size_t sim_runs = 20000;
  simulate_cmd->add_option("--d", sim_d, "domain size");
  simulate_cmd->add_option("--bits", sim_bits, "per-player bit budget");
  simulate_cmd->add_option("--eta", sim_eta, "target abort probability");
  simulate_cmd->add_option("--runs", sim_runs, "simulation runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify_cmd->parsed()) {
      if (config_path.empty()) throw std::invalid_argument("certify: --config is required");
      qcert::ExperimentConfig cfg = load_config(config_path, seed, seed_given, mode);
      const std::uint64_t trial_seed = qcert::derive_seed(cfg.seed, 0);
      const qcert::TrialOutcome outcome = qcert::run_trial(cfg, trial_seed);
      write_output(qcert::cert_result_to_json(outcome.result, trial_seed).dump(2), out_path);
      return outcome.result.verdict == qcert::Verdict::kNo ? kExitNo : kExitOk;
    }

    if (sweep_cmd->parsed()) {
      if (config_path.empty()) throw std::invalid_argument("sweep: --config is required");
      const std::vector<qcert::ExperimentConfig> grid =
          expand_grid(qcert::load_json_file(config_path), seed, seed_given, mode);
      const std::vector<qcert::SweepCell> cells = qcert::sweep(grid);
      if (format == "csv") {
        std::string text = qcert::csv_header();
        for (const qcert::SweepCell& cell : cells)
          if (cell.record) text += "\n" + qcert::csv_row(*cell.record);
        write_output(text, out_path);
      } else {
        qcert::Json rows = qcert::Json::array();
        for (const qcert::SweepCell& cell : cells) {
          if (cell.record) {
            rows.push_back(qcert::experiment_record_to_json(*cell.record));
          } else {
            rows.push_back(qcert::Json{{"error", cell.error}});
          }
        }
        write_output(rows.dump(2), out_path);
      }
      return kExitOk;
    }

    if (mic_cert_cmd->parsed()) {
      std::vector<qcert::Povm> povms;
      for (const std::string& path : povm_paths)
        povms.push_back(qcert::povm_from_json(qcert::load_json_file(path)));
      const qcert::LowerBoundCertificate cert = qcert::lower_bound_certificate(povms, mic_eps);
      write_output(qcert::certificate_to_json(cert).dump(2), out_path);
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      const std::uint64_t verify_seed = seed_given ? seed : qcert::verify::kDefaultSeed;
      const std::vector<qcert::verify::CriterionResult> results =
          qcert::verify::run_suite(suite, verify_seed);
      bool all_passed = true;
      qcert::Json report = qcert::Json::array();
      for (const qcert::verify::CriterionResult& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << std::setw(2) << r.id
                  << ": " << r.name << " - " << r.detail << '\n';
        all_passed = all_passed && r.passed;
        report.push_back(
            qcert::Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
      }
      if (!out_path.empty()) write_output(report.dump(2), out_path);
      return all_passed ? kExitOk : kExitSuiteFailure;
    }

    if (simulate_cmd->parsed()) {
      qcert::SimulationConfig cfg;
      cfg.domain = sim_d;
      cfg.bits = sim_bits;
      cfg.eta = sim_eta;
      cfg.validate();
      qcert::Rng rng(seed_given ? seed : 1);
      // demo distribution: normalized 1, 2, .., d
      std::vector<double> p(sim_d);
      for (int x = 0; x < sim_d; ++x) p[x] = 2.0 * (x + 1) / (sim_d * (sim_d + 1.0));
      const std::vector<double> cdf = qcert::cumulative(p);
      std::vector<double> law(sim_d, 0.0);
      std::size_t bot = 0;
      std::vector<int> players(cfg.players());
      for (std::size_t r = 0; r < sim_runs; ++r) {
        for (int& s : players) s = static_cast<int>(qcert::draw_from_cdf(cdf, rng)) + 1;
        if (const auto value = qcert::eta_simulate(players, cfg, rng)) {
          law[*value - 1] += 1.0;
        } else {
          ++bot;
        }
      }
      double max_gap = 0.0;
      const double kept = static_cast<double>(sim_runs - bot);
      for (int x = 0; x < sim_d; ++x)
        max_gap = std::max(max_gap, std::abs((kept > 0 ? law[x] / kept : 0.0) - p[x]));
      qcert::Json out{{"runs", sim_runs},
                      {"players_per_run", cfg.players()},
                      {"attempts", cfg.attempts()},
                      {"bot_rate", static_cast<double>(bot) / sim_runs},
                      {"eta", cfg.eta},
                      {"target", p},
                      {"max_conditional_gap", max_gap}};
      write_output(out.dump(2), out_path);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
