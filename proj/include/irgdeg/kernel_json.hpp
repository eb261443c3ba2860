#pragma once

// JSON kernel configuration:
//   {"n": int, "model": "m1"|"m2"|"m3"|"m4"|"homogeneous"|"custom",
//    "p": float?, "band": int?, "p_in": float?, "p_out": float?, "matrix": [[float]]?}

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "kernel.hpp"

namespace irgdeg {

inline ModelSpec model_spec_from_json(const nlohmann::json& j) {
  try {
    require(j.is_object(), "kernel json: expected an object");
    ModelSpec spec;
    const std::string model = j.value("model", std::string("custom"));
    if (model == "m1") spec.model = Model::M1;
    else if (model == "m2") spec.model = Model::M2;
    else if (model == "m3") spec.model = Model::M3;
    else if (model == "m4") spec.model = Model::M4;
    else if (model == "homogeneous") spec.model = Model::Homogeneous;
    else if (model == "custom") spec.model = Model::Custom;
    else throw ValidationError("kernel json: unknown model '" + model + "'");

    if (spec.model == Model::Custom) {
      require(j.contains("matrix"), "kernel json: custom model needs \"matrix\"");
      const auto& rows = j.at("matrix");
      const std::size_t n = j.contains("n") ? j.at("n").get<std::size_t>() : rows.size();
      require(rows.is_array() && rows.size() == n, "kernel json: matrix must have n rows");
      spec.n = n;
      spec.matrix.reserve(n * n);
      for (std::size_t r = 0; r < n; ++r) {
        require(rows[r].is_array() && rows[r].size() == n,
                "kernel json: matrix row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
        for (const auto& x : rows[r]) spec.matrix.push_back(x.get<double>());
      }
      return spec;
    }

    require(j.contains("n"), "kernel json: missing \"n\"");
    spec.n = j.at("n").get<std::size_t>();
    if (spec.model == Model::Homogeneous) {
      require(j.contains("p"), "kernel json: homogeneous model needs \"p\"");
      spec.p = j.at("p").get<double>();
    }
    spec.band = j.value("band", spec.band);
    spec.p_in = j.value("p_in", spec.p_in);
    spec.p_out = j.value("p_out", spec.p_out);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("kernel json: ") + e.what());
  }
}

inline EdgeProbabilityMatrix kernel_from_json(const nlohmann::json& j) {
  return build_kernel(model_spec_from_json(j));
}

inline EdgeProbabilityMatrix load_kernel(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open kernel file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("kernel json: " + path + ": " + e.what());
  }
  return kernel_from_json(j);
}

} // namespace irgdeg
