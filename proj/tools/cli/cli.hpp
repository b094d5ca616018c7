#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shrinkcov/estimators.hpp"

namespace shrinkcov::cli {

enum class Subcommand { Mse, Beamform, Verify };
enum class OutputFormat { Csv, Json };
enum class VerifyCheck { Wishart, Haar, Norm };

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitVerificationFailed = 4;

/// Bad flags or values. The message names the offending flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; carries the rendered help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NGrid {
  Index min = 1;
  Index max = 1;
  Index step = 1;

  /// min, min+step, ... up to and including max; incomplete steps dropped.
  std::vector<Index> values() const;
};

/// Parses "min:max:step", "min:max" (step 1) or a single "n".
NGrid parse_n_grid(const std::string& text);

struct CliConfig {
  Subcommand subcommand = Subcommand::Mse;

  // Covariance model: ar1 | fbm for mse; identity | ar1 | fbm | diag for verify.
  std::string model = "ar1";
  double r = 0.5;
  double hurst = 0.9;
  std::vector<double> diag;

  Index p = 100;
  NGrid n{6, 30, 2};
  Index trials = 5000;
  std::uint64_t seed = 20100;
  std::vector<Method> methods;
  unsigned workers = 0;

  std::optional<std::string> output;
  OutputFormat format = OutputFormat::Csv;

  // beamform
  double signal_db = 10.0;
  double interference_db = 15.0;
  double theta_s_deg = 20.0;
  double theta_i1_deg = -30.0;
  double gamma = 0.9;
  std::optional<Index> coefficient_dim;

  // verify
  VerifyCheck check = VerifyCheck::Wishart;
  double z_threshold = 4.0;

  /// The true covariance selected by model/r/hurst/diag/p.
  Matrix covariance() const;
};

/// Validated configuration; throws UsageError or HelpRequested.
CliConfig parse_args(int argc, const char* const argv[]);

/// Runs the configured subcommand, writes the output file if requested and
/// prints a summary to `out`. Returns one of the kExit* codes.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with error-to-exit-code mapping.
int main_entry(int argc, const char* const argv[], std::ostream& out,
               std::ostream& err);

}  // namespace shrinkcov::cli
