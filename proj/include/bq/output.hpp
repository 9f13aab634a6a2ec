#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bq/diagnostics.hpp"
#include "json.hpp"

namespace bq {

inline constexpr const char* kProjectVersion = "0.1.0";
/// Bumped whenever a CSV column or report field changes.
inline constexpr int kFormatVersion = 1;

/// t, energy, h1..h<hk_max>, disp_w1inf, stat_l2, div_residual, grad_u_inf, grad_T_inf
std::vector<std::string> diagnostics_columns(int hk_max);
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records, int hk_max);

/// Writes a CSV from a header and rows of numbers, printed with %.17g.
std::string numeric_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// %.17g: reads back to the same double.
std::string format_double(double x);

/// Writes text atomically enough for our purposes: temp file, then rename.
void write_text(const std::filesystem::path& path, const std::string& text);
/// Two-space indented JSON with a trailing newline.
std::string json_text(const nlohmann::json& j);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Run manifest: command, config and its hash, seeds, versions. No clock
/// readings, so equal inputs give equal bytes.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& canonical_config,
                             const std::vector<std::uint64_t>& seeds);

/// FFTW library version string.
std::string fftw_version_string();

}  // namespace bq
