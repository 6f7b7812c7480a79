#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bell::cli {

/// Machine-readable command report. `results` values are pre-formatted
/// decimal strings (12 significant digits for floats, fraction strings for
/// exact rationals) so JSON and CSV renderings agree bit for bit. Re-running
/// a command with the same parameters and seed reproduces `results` exactly;
/// only the timestamp differs.
struct RunReport {
  std::string command;
  nlohmann::ordered_json parameters;
  nlohmann::ordered_json results;
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp;
  bool claim_failed = false;

  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

/// Formats a double with 12 significant digits (%.12g).
std::string fmt_real(double v);

/// Exact LHV bound, quantum operator norm, GHZ saturation and spectrum
/// residuals for the n-party Mermin-Klyshko operator. The exact bound is
/// omitted above the enumeration cap (n > 8).
RunReport cmd_bounds(int n, const std::optional<std::string>& settings_file,
                     std::uint64_t seed);

/// The headline table: claimed LHV bound 2 for V_n next to the separable
/// maximum 2^(n-1), their ratio 2^(n-2), and the corrected counterpart bound
/// that removes the violation.
RunReport cmd_chen_gap(int n_max, std::uint64_t seed);

/// Builds the explicit LHV model of a separable state and verifies it
/// reproduces every correlation; optionally writes the model to a file.
RunReport cmd_synthesize(const std::string& state_file, const std::string& settings_file,
                         const std::optional<std::string>& model_out = std::nullopt);

/// Parses a polynomial, optionally squares it, canonicalizes in the given
/// mode and reports the canonical form (plus classical max / counterpart).
RunReport cmd_expand(const std::string& expr, const std::string& mode, int n, bool square,
                     bool counterpart);

/// Monte Carlo estimate of one correlation of an LHV model against its exact value.
RunReport cmd_sample(const std::string& model_file, const std::vector<int>& k,
                     std::uint64_t trials, std::uint64_t seed);

}  // namespace bell::cli
