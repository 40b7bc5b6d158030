#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bases.hpp"
#include "steering.hpp"

namespace qsteer {

using ordered_json = nlohmann::ordered_json;

// Serialized basis-set layout:
// {
//   "dim": d, "settings": N,
//   "vectors": [x][a][component] = [re, im]
// }
inline ordered_json basis_to_json(const BasisSet& b) {
  ordered_json j;
  j["dim"] = b.dim();
  j["settings"] = b.settings();
  ordered_json vectors = ordered_json::array();
  for (int x = 0; x < b.settings(); ++x) {
    ordered_json basis = ordered_json::array();
    for (int a = 0; a < b.dim(); ++a) {
      ordered_json vec = ordered_json::array();
      for (int c = 0; c < b.dim(); ++c) {
        const complexd z = b.basis(x)(c, a);
        vec.push_back(ordered_json::array({z.real(), z.imag()}));
      }
      basis.push_back(std::move(vec));
    }
    vectors.push_back(std::move(basis));
  }
  j["vectors"] = std::move(vectors);
  return j;
}

inline void save_basis_set(const BasisSet& b, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw invalid_input_error("cannot open '" + path + "' for writing");
  out << basis_to_json(b).dump(2) << "\n";
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// Loads and fully validates a basis-set file. Structural problems and
// non-orthonormal bases (tolerance 1e-8, looser than the in-memory default
// to absorb serialization round-off of externally produced files) all raise
// invalid_input_error with the file path in the message.
inline BasisSet load_basis_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input_error("cannot open '" + path + "' for reading");
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_input_error("'" + path + "': JSON parse error: " + e.what());
  }
  const auto fail = [&path](const std::string& msg) -> invalid_input_error {
    return invalid_input_error("'" + path + "': " + msg);
  };
  if (!j.is_object()) throw fail("top level must be a JSON object");
  for (const char* key : {"dim", "settings", "vectors"})
    if (!j.contains(key)) throw fail(std::string("missing key '") + key + "'");
  if (!j["dim"].is_number_integer() || !j["settings"].is_number_integer())
    throw fail("'dim' and 'settings' must be integers");
  const int d = j["dim"].get<int>();
  const int n = j["settings"].get<int>();
  if (d < 1) throw fail("'dim' must be >= 1");
  if (n < 1) throw fail("'settings' must be >= 1");
  const ordered_json& vectors = j["vectors"];
  if (!vectors.is_array() || static_cast<int>(vectors.size()) != n)
    throw fail("'vectors' must be an array of length settings = " + std::to_string(n));
  std::vector<CMatrix> bases;
  bases.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    const ordered_json& basis = vectors[static_cast<std::size_t>(x)];
    if (!basis.is_array() || static_cast<int>(basis.size()) != d)
      throw fail("vectors[" + std::to_string(x) + "] must hold dim = " + std::to_string(d) +
                 " vectors");
    CMatrix m(d, d);
    for (int a = 0; a < d; ++a) {
      const ordered_json& vec = basis[static_cast<std::size_t>(a)];
      if (!vec.is_array() || static_cast<int>(vec.size()) != d)
        throw fail("vectors[" + std::to_string(x) + "][" + std::to_string(a) +
                   "] must hold dim = " + std::to_string(d) + " components");
      for (int c = 0; c < d; ++c) {
        const ordered_json& comp = vec[static_cast<std::size_t>(c)];
        if (!comp.is_array() || comp.size() != 2 || !comp[0].is_number() || !comp[1].is_number())
          throw fail("vectors[" + std::to_string(x) + "][" + std::to_string(a) + "][" +
                     std::to_string(c) + "] must be [re, im]");
        const double re = comp[0].get<double>();
        const double im = comp[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
          throw fail("vectors[" + std::to_string(x) + "][" + std::to_string(a) + "][" +
                     std::to_string(c) + "] is not finite");
        m(c, a) = complexd(re, im);
      }
    }
    bases.push_back(std::move(m));
  }
  try {
    return BasisSet(std::move(bases), 1e-8);
  } catch (const invalid_input_error& e) {
    throw invalid_input_error("'" + path + "': " + e.what());
  }
}

// Key order is fixed; absent optional bounds are omitted rather than null.
inline ordered_json bounds_to_json(const SteeringBounds& b) {
  ordered_json j;
  j["n_settings"] = b.n_settings;
  j["s_q"] = b.s_q;
  j["bound_theorem"] = b.bound_theorem;
  j["bound_weak"] = b.bound_weak;
  if (b.bound_toeplitz) j["bound_toeplitz"] = *b.bound_toeplitz;
  if (b.lhs_exact) j["lhs_exact"] = *b.lhs_exact;
  j["v_q_theorem"] = b.v_q_theorem;
  j["v_q_weak"] = b.v_q_weak;
  return j;
}

inline void save_bounds(const SteeringBounds& b, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw invalid_input_error("cannot open '" + path + "' for writing");
  out << bounds_to_json(b).dump(2) << "\n";
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace qsteer
