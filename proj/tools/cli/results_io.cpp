#include "results_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include "shrinkcov/error.hpp"

namespace shrinkcov::cli {

namespace {

constexpr const char* kMseHeader = "n,method,mean_mse,ci95,mean_rho";
constexpr const char* kSinrHeader = "n,method,mean_sinr_db,ci95";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    if (text == "nan") return std::nan("");
    throw Error(ErrorKind::InvalidInput, "bad number in CSV: '" + text + "'");
  }
  return value;
}

Index parse_index(const std::string& text) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::InvalidInput, "bad integer in CSV: '" + text + "'");
  }
  return static_cast<Index>(value);
}

nlohmann::json json_number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  const bool mse = result.metric == Metric::Mse;
  out << (mse ? kMseHeader : kSinrHeader) << '\n';
  for (const ResultRow& row : result.rows) {
    out << row.n << ',' << to_string(row.method) << ','
        << format_number(row.mean) << ',' << format_number(row.ci95);
    if (mse) out << ',' << format_number(row.mean_rho);
    out << '\n';
  }
  return out.str();
}

ExperimentResult parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::InvalidInput, "empty CSV");
  }
  ExperimentResult result;
  std::size_t columns = 0;
  if (line == kMseHeader) {
    result.metric = Metric::Mse;
    columns = 5;
  } else if (line == kSinrHeader) {
    result.metric = Metric::SinrDb;
    columns = 4;
  } else {
    throw Error(ErrorKind::InvalidInput, "unrecognized CSV header: " + line);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != columns) {
      throw Error(ErrorKind::InvalidInput, "wrong column count: " + line);
    }
    ResultRow row;
    row.n = parse_index(fields[0]);
    const auto method = parse_method(fields[1]);
    if (!method) throw Error(ErrorKind::InvalidInput, "unknown method " + fields[1]);
    row.method = *method;
    row.mean = parse_double(fields[2]);
    row.ci95 = parse_double(fields[3]);
    row.mean_rho = columns == 5 ? parse_double(fields[4]) : std::nan("");
    result.rows.push_back(row);
  }
  return result;
}

nlohmann::json rows_to_json(const ExperimentResult& result) {
  const bool mse = result.metric == Metric::Mse;
  nlohmann::json rows = nlohmann::json::array();
  for (const ResultRow& row : result.rows) {
    nlohmann::json j;
    j["n"] = row.n;
    j["method"] = std::string(to_string(row.method));
    j[mse ? "mean_mse" : "mean_sinr_db"] = json_number(row.mean);
    j["ci95"] = json_number(row.ci95);
    if (mse) j["mean_rho"] = json_number(row.mean_rho);
    rows.push_back(std::move(j));
  }
  return rows;
}

std::string to_csv(const std::vector<VerificationRun>& runs) {
  std::ostringstream out;
  out << "check,n,quantity,estimate,target,std_error,z,pass\n";
  for (const VerificationRun& run : runs) {
    for (const MomentCheck& m : run.report.moments) {
      out << run.report.check << ',' << run.n << ",\"" << m.quantity << "\","
          << format_number(m.estimate) << ',' << format_number(m.target) << ','
          << format_number(m.std_error) << ',' << format_number(m.z) << ','
          << (m.pass ? "true" : "false") << '\n';
    }
    if (run.report.check == "norm" && run.n == 1) {
      out << run.report.check << ',' << run.n << ",\"max pointwise residual\","
          << format_number(run.report.max_pointwise_residual) << ','
          << format_number(kPointwiseTolerance) << ",0,0,"
          << (run.report.pointwise_pass ? "true" : "false") << '\n';
    }
  }
  return out.str();
}

nlohmann::json rows_to_json(const std::vector<VerificationRun>& runs) {
  nlohmann::json rows = nlohmann::json::array();
  for (const VerificationRun& run : runs) {
    for (const MomentCheck& m : run.report.moments) {
      rows.push_back({{"check", run.report.check},
                      {"n", run.n},
                      {"quantity", m.quantity},
                      {"estimate", json_number(m.estimate)},
                      {"target", json_number(m.target)},
                      {"std_error", json_number(m.std_error)},
                      {"z", json_number(m.z)},
                      {"pass", m.pass}});
    }
    if (run.report.check == "norm" && run.n == 1) {
      rows.push_back({{"check", run.report.check},
                      {"n", run.n},
                      {"quantity", "max pointwise residual"},
                      {"estimate", json_number(run.report.max_pointwise_residual)},
                      {"target", kPointwiseTolerance},
                      {"pass", run.report.pointwise_pass}});
    }
  }
  return rows;
}

}  // namespace shrinkcov::cli
