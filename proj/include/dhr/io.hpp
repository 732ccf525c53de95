#ifndef DHR_IO_HPP
#define DHR_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "dhr/model.hpp"
#include "dhr/robust.hpp"

namespace dhr {

using json = nlohmann::json;

inline json matrix_to_json(const CMatrix& m) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline CMatrix matrix_from_json(const json& j, Index rows, Index cols,
                                const std::string& name) {
  if (!j.is_object() || !j.contains("re"))
    throw error(errc::invalid_system, name + ": expected {\"re\": [[..]], \"im\": [[..]]}");
  CMatrix m = CMatrix::Zero(rows, cols);
  const auto fill = [&](const json& part, bool imag) {
    if (!part.is_array() || static_cast<Index>(part.size()) != rows)
      throw error(errc::invalid_system, name + ": wrong row count");
    for (Index i = 0; i < rows; ++i) {
      const auto& row = part[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != cols)
        throw error(errc::invalid_system, name + ": wrong column count");
      for (Index k = 0; k < cols; ++k) {
        const double v = row[static_cast<std::size_t>(k)].get<double>();
        if (!std::isfinite(v))
          throw error(errc::invalid_system, name + ": entries must be finite");
        if (imag)
          m(i, k) += Complex(0.0, v);
        else
          m(i, k) += Complex(v, 0.0);
      }
    }
  };
  fill(j.at("re"), false);
  if (j.contains("im")) fill(j.at("im"), true);
  return m;
}

/// System format: {"n": int, "J": {re, im}, "R": {re, im}, "Q": {re, im}};
/// Q omitted defaults to the identity.
inline DHSystem system_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n"))
    throw error(errc::invalid_system, "system file must carry an \"n\" field");
  const Index n = j.at("n").get<Index>();
  if (n < 1) throw error(errc::invalid_system, "n must be >= 1");
  if (!j.contains("J") || !j.contains("R"))
    throw error(errc::invalid_system, "system file must carry \"J\" and \"R\"");
  DHSystem sys;
  sys.J = matrix_from_json(j.at("J"), n, n, "J");
  sys.R = matrix_from_json(j.at("R"), n, n, "R");
  sys.Q = j.contains("Q") ? matrix_from_json(j.at("Q"), n, n, "Q")
                          : CMatrix(CMatrix::Identity(n, n));
  return sys;
}

inline json system_to_json(const DHSystem& sys) {
  return json{{"n", sys.size()},
              {"J", matrix_to_json(sys.J)},
              {"R", matrix_to_json(sys.R)},
              {"Q", matrix_to_json(sys.Q)}};
}

/// Single-matrix format for the robust-representation command:
/// {"n": int, "A": {re, im}}.
inline CMatrix square_matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("A"))
    throw error(errc::invalid_system, "matrix file must carry \"n\" and \"A\"");
  const Index n = j.at("n").get<Index>();
  if (n < 1) throw error(errc::invalid_system, "n must be >= 1");
  return matrix_from_json(j.at("A"), n, n, "A");
}

inline json pair_to_json(const PerturbationPair& p) {
  return json{{"delta_j", matrix_to_json(p.delta_j)},
              {"delta_r", matrix_to_json(p.delta_r)},
              {"joint_norm", p.norm}};
}

inline PerturbationPair pair_from_json(const json& j, Index n) {
  PerturbationPair p;
  p.delta_j = matrix_from_json(j.at("delta_j"), n, n, "delta_j");
  p.delta_r = matrix_from_json(j.at("delta_r"), n, n, "delta_r");
  p.norm = joint_norm(p.delta_j, p.delta_r);
  return p;
}

inline json diagnostics_to_json(const RadiusDiagnostics& d) {
  json j{{"asymptotically_stable", d.asymptotically_stable},
         {"is_exact", d.is_exact},
         {"branch", d.branch},
         {"objective_evaluations", d.objective_evaluations},
         {"failed_evaluations", d.failed_evaluations}};
  if (d.scf_iterations > 0 || d.branch == "nepv") {
    j["scf_iterations"] = d.scf_iterations;
    j["scf_residual"] = d.scf_residual;
  }
  if (d.certificate_built) {
    j["certificate_valid"] = d.certificate_valid;
    j["certificate_norm_gap"] = d.certificate_norm_gap;
    j["certificate_eig_gap"] = d.certificate_eig_gap;
  }
  if (!d.notes.empty()) j["notes"] = d.notes;
  return j;
}

inline json radius_result_to_json(const RadiusResult& r,
                                  bool include_certificate = false) {
  json j{{"class", class_name(r.cls)},
         {"value", r.value},
         {"omega_star", r.omega_star},
         {"is_exact", r.diagnostics.is_exact},
         {"diagnostics", diagnostics_to_json(r.diagnostics)}};
  if (include_certificate && r.certificate)
    j["certificate"] = pair_to_json(*r.certificate);
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io_error, "cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) throw error(errc::io_error, "read failure on " + path);
  return content;
}

/// Writes through a temp file in the target directory and renames into place.
inline void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io_error, "cannot open " + tmp.string());
    out << content;
    if (!out.good()) throw error(errc::io_error, "write failure on " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace dhr

#endif  // DHR_IO_HPP
