#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qcert/certify.hpp"
#include "qcert/experiment.hpp"
#include "qcert/hard_instance.hpp"
#include "qcert/measurement.hpp"
#include "qcert/mic.hpp"
#include "qcert/states.hpp"

namespace qcert {

using Json = nlohmann::json;

// Complex matrices are rows of [re, im] pairs.
inline Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const Json& rows) {
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("json: expected a matrix");
  const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index nc = static_cast<Eigen::Index>(rows.front().size());
  ComplexMatrix m(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i) {
    const Json& row = rows.at(i);
    if (static_cast<Eigen::Index>(row.size()) != nc)
      throw std::invalid_argument("json: ragged matrix rows");
    for (Eigen::Index j = 0; j < nc; ++j) {
      const Json& cell = row.at(j);
      m(i, j) = {cell.at(0).get<double>(), cell.at(1).get<double>()};
    }
  }
  return m;
}

// POVM schema: {"dim": d, "effects": [matrix, ...]}
inline Json povm_to_json(const Povm& povm) {
  Json out;
  out["dim"] = povm.dim;
  Json effects = Json::array();
  for (const ComplexMatrix& e : povm.effects) effects.push_back(matrix_to_json(e));
  out["effects"] = std::move(effects);
  return out;
}

inline Povm povm_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<ComplexMatrix> effects;
  for (const Json& e : j.at("effects")) effects.push_back(matrix_from_json(e));
  Povm povm = make_povm(std::move(effects));
  if (povm.dim != dim) throw std::invalid_argument("json: povm dim field mismatches effects");
  return povm;
}

// State schema: {"dim": d, "rho": matrix}
inline Json density_to_json(const DensityMatrix& rho) {
  Json out;
  out["dim"] = rho.dim;
  out["rho"] = matrix_to_json(rho.matrix);
  return out;
}

inline DensityMatrix density_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  DensityMatrix rho = make_density(matrix_from_json(j.at("rho")));
  if (rho.dim != dim) throw std::invalid_argument("json: state dim field mismatches rho");
  return rho;
}

inline Json certificate_to_json(const LowerBoundCertificate& cert) {
  return Json{{"eps", cert.eps},
              {"sup_hs", cert.sup_hs},
              {"sup_trace", cert.sup_trace},
              {"n_randomized", cert.n_randomized},
              {"n_fixed", cert.n_fixed},
              {"povm_count", cert.povm_count},
              {"constants", "order-only"}};
}

// Hard instances replay from (basis id, ell, eps, c, signs).
inline Json hard_instance_to_json(const HardInstance& inst, std::uint64_t seed = 0) {
  Json out;
  out["basis"] = "pauli";
  out["dim"] = inst.dim;
  out["ell"] = inst.ell;
  out["eps"] = inst.eps;
  out["c"] = inst.c;
  out["z"] = inst.signs;
  out["seed"] = seed;
  return out;
}

inline HardInstance hard_instance_from_json(const Json& j) {
  if (j.at("basis").get<std::string>() != "pauli")
    throw std::invalid_argument("json: unknown perturbation basis id");
  const int dim = j.at("dim").get<int>();
  return make_perturbation(normalized_pauli_basis(log2_exact(dim)), j.at("ell").get<std::size_t>(),
                           j.at("eps").get<double>(), j.at("c").get<double>(),
                           j.at("z").get<std::vector<int>>());
}

inline Json cert_result_to_json(const CertResult& result, std::uint64_t seed) {
  Json out;
  out["verdict"] = verdict_name(result.verdict);
  out["copies"] = result.copies_consumed;
  out["mode"] = mode_name(result.mode);
  out["seed"] = seed;
  out["diagnostics"] = result.diagnostics;
  if (result.plan) {
    Json plan;
    plan["groups"] = result.plan->groups;
    plan["group_size"] = result.plan->group_size;
    if (result.plan->simulation_block) plan["simulation_block"] = result.plan->simulation_block;
    if (!result.plan->subsample_targets.empty()) plan["subsample_targets"] = result.plan->subsample_targets;
    if (!result.plan->success_counts.empty()) plan["success_counts"] = result.plan->success_counts;
    out["plan"] = std::move(plan);
  }
  return out;
}

inline InstanceSpec instance_from_json(const Json& j) {
  InstanceSpec spec;
  if (j.is_string()) {
    const std::string kind = j.get<std::string>();
    if (kind == "null") spec.kind = InstanceKind::kNull;
    else if (kind == "plus") spec.kind = InstanceKind::kPlus;
    else if (kind == "coin_plus") spec.kind = InstanceKind::kCoinPlus;
    else if (kind == "hard") spec.kind = InstanceKind::kHard;
    else throw std::invalid_argument("json: unknown instance kind: " + kind);
    return spec;
  }
  if (j.contains("hard")) {
    spec.kind = InstanceKind::kHard;
    const Json& h = j.at("hard");
    if (h.contains("ell")) spec.ell = h.at("ell").get<std::size_t>();
    if (h.contains("c")) spec.c = h.at("c").get<double>();
    return spec;
  }
  if (j.contains("file")) {
    spec.kind = InstanceKind::kExplicit;
    std::ifstream in(j.at("file").get<std::string>());
    if (!in) throw std::invalid_argument("json: cannot open instance file");
    Json state;
    in >> state;
    spec.state = density_from_json(state);
    return spec;
  }
  throw std::invalid_argument("json: unrecognized instance spec");
}

inline ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig cfg;
  cfg.certifier = certifier_from_name(j.at("certifier").get<std::string>());
  cfg.d = j.at("d").get<int>();
  cfg.k = j.value("k", cfg.d);
  cfg.eps = j.value("eps", 1.0);
  if (j.contains("n")) {
    if (j.at("n").is_string()) {
      if (j.at("n").get<std::string>() != "auto")
        throw std::invalid_argument("json: n must be an integer or \"auto\"");
    } else {
      cfg.n = j.at("n").get<std::size_t>();
    }
  }
  if (j.contains("instance")) cfg.instance = instance_from_json(j.at("instance"));
  cfg.trials = j.value("trials", std::size_t{1});
  cfg.seed = j.value("seed", std::uint64_t{0});
  if (j.value("mode", std::string("calibrated")) == "paper") cfg.mode = ConstantsMode::kPaper;
  cfg.boost_groups = j.value("groups", 5);
  cfg.truly_fixed = j.value("truly_fixed", false);
  cfg.validate();
  return cfg;
}

inline Json experiment_record_to_json(const ExperimentRecord& r) {
  Json out;
  out["certifier"] = certifier_name(r.config.certifier);
  out["d"] = r.config.d;
  out["k"] = r.config.k;
  out["eps"] = r.config.eps;
  out["n"] = r.resolved_n;
  out["mode"] = mode_name(r.config.mode);
  out["trials"] = r.config.trials;
  out["successes"] = r.successes;
  out["rate"] = r.rate;
  out["wilson_lo"] = r.interval.lower;
  out["wilson_hi"] = r.interval.upper;
  out["seed"] = r.config.seed;
  out["wall_ms"] = r.wall_ms;
  out["trial_seeds"] = r.trial_seeds;
  return out;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  Json j;
  in >> j;
  return j;
}

}  // namespace qcert
