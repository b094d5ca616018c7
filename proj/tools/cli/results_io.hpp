#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "shrinkcov/montecarlo.hpp"
#include "shrinkcov/verification.hpp"

namespace shrinkcov::cli {

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double value);

/// MSE: n,method,mean_mse,ci95,mean_rho
/// SINR: n,method,mean_sinr_db,ci95
std::string to_csv(const ExperimentResult& result);

/// Inverse of to_csv. The metric is taken from the header.
ExperimentResult parse_csv(const std::string& text);

/// Rows mirroring the CSV columns.
nlohmann::json rows_to_json(const ExperimentResult& result);

/// One verification run at a given n.
struct VerificationRun {
  Index n = 0;
  VerificationReport report;
};

/// check,n,quantity,estimate,target,std_error,z,pass
std::string to_csv(const std::vector<VerificationRun>& runs);
nlohmann::json rows_to_json(const std::vector<VerificationRun>& runs);

}  // namespace shrinkcov::cli
