#include "sphsync/serialize.hpp"

#include "sphsync/error.hpp"

#include <cmath>
#include <set>
#include <string>

namespace sphsync {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::kParse, "field '" + field + "': " + what);
}

template <typename T>
T get_field(const Json& j, const std::string& field) {
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception& e) {
    field_error(field, e.what());
  }
}

double get_number(const Json& j, const std::string& field) {
  const Json& v = j.at(field);
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

Index get_index(const Json& j, const std::string& field) {
  const Json& v = j.at(field);
  if (!v.is_number_integer()) field_error(field, "expected an integer");
  return v.get<Index>();
}

}  // namespace

Json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json to_json(const CertificateReport& r) {
  Json j;
  j["lambda_1"] = number_json(r.lambda_1);
  j["lambda_2"] = number_json(r.lambda_2);
  j["lambda_n"] = number_json(r.lambda_n);
  j["condition_number"] = number_json(r.condition_number);
  j["r_required"] = number_json(r.r_required);
  j["verdict"] = std::string(to_string(r.verdict));
  j["dual_feasible"] = r.dual_feasible;
  j["preconditioner"] = std::string(to_string(r.preconditioner));
  if (r.delta_c) j["delta_c"] = number_json(*r.delta_c);
  j["r"] = r.r;
  j["complex"] = r.complex_case;
  j["zero_threshold"] = number_json(r.zero_threshold);
  j["laplacian_norm"] = number_json(r.laplacian_norm);
  j["residual_norm"] = number_json(r.residual_norm);
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

Json to_json(const RankOneReference& ref) {
  Json j;
  j["kappa_d"] = number_json(ref.kappa_d);
  j["delta_c"] = number_json(ref.delta_c);
  j["d_min"] = number_json(ref.d_min);
  if (ref.d_bar) j["d_bar"] = number_json(*ref.d_bar);
  j["bound_on_condition_number"] = number_json(ref.bound_on_condition_number);
  j["applicable"] = ref.applicable;
  j["reference_deviation"] = number_json(ref.reference_deviation);
  j["measured_deviation"] = number_json(ref.measured_deviation);
  j["measured_condition_number"] = number_json(ref.measured_condition_number);
  return j;
}

Json to_json(const SyncCheckReport& r) {
  Json j;
  j["synchronizing"] = r.synchronizing;
  j["ordinary"] = to_json(r.ordinary);
  j["normalized"] = r.normalized ? to_json(*r.normalized) : Json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const SolveReport& r, bool include_configuration) {
  Json j;
  j["objective"] = number_json(r.objective);
  j["grad_norm"] = number_json(r.grad_norm);
  j["min_hessian_curvature"] = number_json(r.min_hessian_curvature);
  j["rho"] = number_json(r.rho);
  j["second_order_critical"] = r.second_order_critical;
  j["converged"] = r.converged;
  j["recovered"] = r.recovered ? Json(*r.recovered) : Json(nullptr);
  j["iterations"] = r.iterations;
  j["escapes_used"] = r.escapes_used;
  j["c_norm"] = number_json(r.c_norm);
  j["status"] = r.status;
  j["n"] = r.final_y.n();
  j["r"] = r.final_y.r();
  if (include_configuration) {
    Json rows = Json::array();
    for (Index i = 0; i < r.final_y.n(); ++i) {
      Json row = Json::array();
      for (Index k = 0; k < r.final_y.r(); ++k) {
        if (r.final_y.is_complex()) {
          row.push_back(Json::array({r.final_y.complex()(i, k).real(), r.final_y.complex()(i, k).imag()}));
        } else {
          row.push_back(r.final_y.real()(i, k));
        }
      }
      rows.push_back(std::move(row));
    }
    j["configuration"] = std::move(rows);
  }
  return j;
}

Json to_json(const EquilibriumReport& r, bool include_angles) {
  Json j;
  j["classification"] = std::string(to_string(r.classification));
  j["synchronized"] = r.synchronized;
  j["velocity_norm"] = number_json(r.velocity_norm);
  j["hessian_min_eig"] = number_json(r.hessian_min_eig);
  j["potential"] = number_json(r.potential);
  j["time"] = number_json(r.time);
  j["steps"] = r.steps;
  if (include_angles) {
    Json angles = Json::array();
    for (Index i = 0; i < r.final_angles.n(); ++i) angles.push_back(r.final_angles.angles()[i]);
    j["final_angles"] = std::move(angles);
  }
  return j;
}

Json to_json(const CirculantSpectrum& s) {
  Json j;
  j["n"] = s.n;
  j["k"] = s.k;
  j["condition_number"] = number_json(s.condition_number);
  j["lambda2_twisted"] = number_json(s.lambda2_twisted);
  j["twisted_min"] = number_json(s.twisted_min);
  j["h_a"] = s.h_a;
  j["h_l"] = s.h_l;
  j["h_ltilde"] = s.h_ltilde;
  return j;
}

Json to_json(const FiniteSizeStability& s) {
  Json j;
  j["condition_number"] = number_json(s.condition_number);
  j["lambda2_twisted"] = number_json(s.lambda2_twisted);
  j["twisted_min"] = number_json(s.twisted_min);
  j["predicts_spurious"] = s.predicts_spurious;
  j["condition_above_two"] = s.condition_above_two;
  return j;
}

Json to_json(const ModelSpec& spec) {
  Json j;
  j["family"] = std::string(to_string(spec.family));
  j["n"] = spec.n;
  switch (spec.family) {
    case Family::kGaussianZ2:
      j["sigma"] = spec.sigma;
      break;
    case Family::kCensoredBlock:
    case Family::kSignedEr:
      j["p"] = spec.p;
      j["delta"] = spec.delta;
      break;
    case Family::kSbm:
      j["p"] = spec.p;
      j["q"] = spec.q;
      j["centering"] = std::string(to_string(spec.centering));
      break;
    case Family::kCirculantKnn:
      j["k"] = spec.k;
      break;
    case Family::kRandomRegular:
      j["d"] = spec.d;
      break;
    case Family::kFile:
      j["path"] = spec.path;
      break;
  }
  j["seed"] = spec.seed;
  j["ground_truth"] = std::string(to_string(spec.ground_truth));
  if (spec.explicit_z) {
    Json z = Json::array();
    for (Index i = 0; i < spec.explicit_z->size(); ++i) z.push_back((*spec.explicit_z)[i]);
    j["z"] = std::move(z);
  }
  return j;
}

ModelSpec model_spec_from_json(const Json& j, bool validate) {
  if (!j.is_object()) fail(ErrorCode::kParse, "model spec must be a JSON object");
  static const std::set<std::string> known = {"family", "n",    "sigma", "p",    "q",
                                              "delta",  "centering", "k", "d", "path",
                                              "seed",   "ground_truth", "z"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) field_error(key, "unknown field");
  }
  if (!j.contains("family")) field_error("family", "missing");
  ModelSpec spec;
  try {
    spec.family = parse_family(get_field<std::string>(j, "family"));
  } catch (const Error& e) {
    field_error("family", e.what());
  }
  if (j.contains("n")) spec.n = get_index(j, "n");
  if (spec.family != Family::kFile && !j.contains("n")) field_error("n", "missing");
  if (j.contains("sigma")) spec.sigma = get_number(j, "sigma");
  if (j.contains("p")) spec.p = get_number(j, "p");
  if (j.contains("q")) spec.q = get_number(j, "q");
  if (j.contains("delta")) spec.delta = get_number(j, "delta");
  if (j.contains("centering")) {
    try {
      spec.centering = parse_centering(get_field<std::string>(j, "centering"));
    } catch (const Error& e) {
      field_error("centering", e.what());
    }
  }
  if (j.contains("k")) spec.k = get_index(j, "k");
  if (j.contains("d")) spec.d = get_index(j, "d");
  if (j.contains("path")) spec.path = get_field<std::string>(j, "path");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      field_error("seed", "expected a non-negative integer");
    }
    spec.seed = j.at("seed").get<std::uint64_t>();
  }
  // A one-community SBM carries no signal once centered.
  if (spec.family == Family::kSbm) spec.ground_truth = GroundTruth::kBalanced;
  if (j.contains("ground_truth")) {
    try {
      spec.ground_truth = parse_ground_truth(get_field<std::string>(j, "ground_truth"));
    } catch (const Error& e) {
      field_error("ground_truth", e.what());
    }
  }
  if (j.contains("z")) {
    const auto values = get_field<std::vector<double>>(j, "z");
    spec.explicit_z = RealVector::Map(values.data(), static_cast<Index>(values.size()));
    if (!j.contains("ground_truth")) spec.ground_truth = GroundTruth::kExplicit;
  }
  if (!validate) return spec;
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kParse, e.what());
  }
  return spec;
}

void apply_solve_options(const Json& j, SolveOptions& opts) {
  if (!j.is_object()) fail(ErrorCode::kParse, "solver options must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "max_iters") {
      opts.max_iters = get_field<int>(j, key);
    } else if (key == "grad_tol") {
      opts.grad_tol = get_number(j, key);
    } else if (key == "curvature_tol") {
      opts.curvature_tol = get_number(j, key);
    } else if (key == "step") {
      opts.step_rule = StepRule::fixed(get_number(j, key));
    } else if (key == "shrink") {
      opts.step_rule.shrink = get_number(j, key);
    } else if (key == "sufficient_increase") {
      opts.step_rule.sufficient_increase = get_number(j, key);
    } else if (key == "hessian_probe_iters") {
      opts.hessian_probe_iters = get_field<int>(j, key);
    } else if (key == "escape_attempts") {
      opts.escape_attempts = get_field<int>(j, key);
    } else if (key == "escape_radius") {
      opts.escape_radius = get_number(j, key);
    } else if (key == "recovery_tol") {
      opts.recovery_tol = get_number(j, key);
    } else {
      field_error(key, "unknown solver option");
    }
  }
  opts.validate();
}

}  // namespace sphsync
