#include "bq/output.hpp"

#include <fftw3.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bq/sim_config.hpp"

namespace bq {

std::vector<std::string> diagnostics_columns(int hk_max) {
  std::vector<std::string> h{"t", "energy"};
  for (int k = 1; k <= hk_max; ++k) h.push_back("h" + std::to_string(k));
  for (const char* s : {"disp_w1inf", "stat_l2", "div_residual", "grad_u_inf", "grad_T_inf"}) h.emplace_back(s);
  return h;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records, int hk_max) {
  std::vector<std::vector<double>> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    std::vector<double> row{r.t, r.energy};
    for (int k = 0; k < hk_max; ++k) row.push_back(k < static_cast<int>(r.hk.size()) ? r.hk[k] : NAN);
    row.insert(row.end(), {r.disp_w1inf, r.stat_l2, r.div_residual, r.grad_u_inf, r.grad_T_inf});
    rows.push_back(std::move(row));
  }
  return numeric_csv(diagnostics_columns(hk_max), rows);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string numeric_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::invalid_argument("numeric_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << text;
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, json_text(j)); }

std::string fftw_version_string() { return fftw_version; }

nlohmann::json make_manifest(const std::string& command, const nlohmann::json& canonical_config,
                             const std::vector<std::uint64_t>& seeds) {
  nlohmann::json m;
  m["command"] = command;
  m["format_version"] = kFormatVersion;
  m["config_hash"] = config_hash(canonical_config);
  m["config"] = canonical_config;
  m["seeds"] = seeds;
  m["versions"] = {{"bqsim", kProjectVersion}, {"fftw", fftw_version_string()}};
  return m;
}

}  // namespace bq
