#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "models.hpp"

namespace qsteer {

// All CSV numbers use %.12g with the C locale ('.' decimal point), so output
// bytes are reproducible across runs, worker counts, and host locales.
inline std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string multisinglet_csv(const std::vector<MultiSingletRow>& rows) {
  std::string out = "k,eta,fidelity,epsilon,sigma,v_q_eta\n";
  for (const MultiSingletRow& r : rows) {
    out += std::to_string(r.k);
    out += ',';
    out += csv_number(r.eta);
    out += ',';
    out += csv_number(r.fidelity);
    out += ',';
    out += csv_number(r.epsilon);
    out += ',';
    out += csv_number(r.sigma);
    out += ',';
    out += csv_number(r.v_q_eta);
    out += '\n';
  }
  return out;
}

inline std::string photonic_csv(const std::vector<PhotonicScanRow>& rows) {
  std::string out = "d,n_opt,theta,v_q,eta,v_q_eta\n";
  for (const PhotonicScanRow& r : rows) {
    out += std::to_string(r.d);
    out += ',';
    out += std::to_string(r.n_opt);
    out += ',';
    out += csv_number(r.theta);
    out += ',';
    out += csv_number(r.v_q);
    out += ',';
    out += csv_number(r.eta);
    out += ',';
    out += csv_number(r.v_q_eta);
    out += '\n';
  }
  return out;
}

inline std::string photonic_all_n_csv(const std::vector<PhotonicAllNRow>& rows) {
  std::string out = "d,n,theta,v_q\n";
  for (const PhotonicAllNRow& r : rows) {
    out += std::to_string(r.d);
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += csv_number(r.theta);
    out += ',';
    out += csv_number(r.v_q);
    out += '\n';
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace qsteer
