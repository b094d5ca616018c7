#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "results_io.hpp"
#include "shrinkcov/error.hpp"
#include "shrinkcov/models.hpp"
#include "shrinkcov/montecarlo.hpp"
#include "shrinkcov/verification.hpp"

namespace shrinkcov::cli {

namespace {

std::string_view to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Mse: return "mse";
    case Subcommand::Beamform: return "beamform";
    case Subcommand::Verify: return "verify";
  }
  return "unknown";
}

std::string_view to_string(VerifyCheck c) {
  switch (c) {
    case VerifyCheck::Wishart: return "wishart";
    case VerifyCheck::Haar: return "haar";
    case VerifyCheck::Norm: return "norm";
  }
  return "unknown";
}

Index parse_positive(const std::string& text, const std::string& flag) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 1) {
    throw UsageError(flag + ": expected a positive integer, got '" + text + "'");
  }
  return static_cast<Index>(value);
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> methods;
  std::istringstream in(text);
  std::string name;
  while (std::getline(in, name, ',')) {
    const auto m = parse_method(name);
    if (!m) {
      throw UsageError("--methods: unknown method '" + name +
                       "' (expected SampleOnly, Oracle, LW, RBLW, OAS)");
    }
    methods.push_back(*m);
  }
  if (methods.empty()) throw UsageError("--methods: empty list");
  return methods;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    double v = 0.0;
    const auto* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      throw UsageError(flag + ": bad number '" + item + "'");
    }
    values.push_back(v);
  }
  return values;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error(ErrorKind::InvalidInput, "cannot open output file '" + path + "'");
  }
  file << contents;
  file.close();
  if (!file) {
    throw Error(ErrorKind::InvalidInput, "failed writing output file '" + path + "'");
  }
}

nlohmann::json config_to_json(const CliConfig& c) {
  nlohmann::json j;
  j["subcommand"] = std::string(to_string(c.subcommand));
  j["p"] = c.p;
  j["n"] = {{"min", c.n.min}, {"max", c.n.max}, {"step", c.n.step}};
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  std::vector<std::string> methods;
  for (Method m : c.methods) methods.emplace_back(shrinkcov::to_string(m));
  switch (c.subcommand) {
    case Subcommand::Mse:
      j["model"] = c.model;
      if (c.model == "ar1") j["r"] = c.r;
      if (c.model == "fbm") j["H"] = c.hurst;
      j["methods"] = methods;
      break;
    case Subcommand::Beamform:
      j["signal_db"] = c.signal_db;
      j["interference_db"] = c.interference_db;
      j["theta_s_deg"] = c.theta_s_deg;
      j["theta_i1_deg"] = c.theta_i1_deg;
      j["gamma"] = c.gamma;
      j["coefficient_dim"] =
          c.coefficient_dim ? nlohmann::json(*c.coefficient_dim) : nlohmann::json();
      j["methods"] = methods;
      break;
    case Subcommand::Verify:
      j["check"] = std::string(to_string(c.check));
      j["model"] = c.model;
      if (c.model == "ar1") j["r"] = c.r;
      if (c.model == "fbm") j["H"] = c.hurst;
      if (c.model == "diag") j["diag"] = c.diag;
      j["z_threshold"] = c.z_threshold;
      break;
  }
  return j;
}

void print_summary(const ExperimentResult& result, std::ostream& out) {
  const bool mse = result.metric == Metric::Mse;
  out << (mse ? "mean Frobenius MSE" : "mean SINR [dB]") << " +/- 95% CI\n";
  Index current = -1;
  for (const ResultRow& row : result.rows) {
    if (row.n != current) {
      out << "n = " << row.n << '\n';
      current = row.n;
    }
    out << "  " << std::left << std::setw(11) << shrinkcov::to_string(row.method)
        << std::right << std::setw(14) << std::setprecision(6) << row.mean
        << " +/- " << std::setw(10) << std::setprecision(3) << row.ci95;
    if (!std::isnan(row.mean_rho)) {
      out << "   rho " << std::setprecision(4) << row.mean_rho;
    }
    if (row.excluded > 0) out << "   excluded " << row.excluded;
    out << '\n';
  }
}

void emit(const CliConfig& c, const std::string& csv, const nlohmann::json& rows) {
  if (!c.output) return;
  if (c.format == OutputFormat::Csv) {
    write_file(*c.output, csv);
  } else {
    nlohmann::json doc;
    doc["config"] = config_to_json(c);
    doc["results"] = rows;
    write_file(*c.output, doc.dump(2) + "\n");
  }
}

int run_mse(const CliConfig& c, std::ostream& out) {
  ExperimentConfig cfg{.model = c.model == "fbm" ? CovModel::fbm(c.p, c.hurst)
                                                 : CovModel::ar1(c.p, c.r)};
  cfg.n_grid = c.n.values();
  cfg.trials = c.trials;
  cfg.seed = c.seed;
  cfg.methods = c.methods;
  cfg.workers = c.workers;
  const ExperimentResult result = run_mse_experiment(cfg);
  print_summary(result, out);
  emit(c, to_csv(result), rows_to_json(result));
  return kExitOk;
}

int run_beamform(const CliConfig& c, std::ostream& out) {
  ExperimentConfig cfg{.model = UlaScenario::reference(
                           c.p, c.signal_db, c.interference_db, c.theta_s_deg,
                           c.theta_i1_deg, c.gamma)};
  cfg.n_grid = c.n.values();
  cfg.trials = c.trials;
  cfg.seed = c.seed;
  cfg.methods = c.methods;
  cfg.workers = c.workers;
  cfg.coefficient_dim = c.coefficient_dim;
  const ExperimentResult result = run_sinr_experiment(cfg);
  print_summary(result, out);
  emit(c, to_csv(result), rows_to_json(result));
  return kExitOk;
}

int run_verify(const CliConfig& c, std::ostream& out) {
  std::vector<VerificationRun> runs;
  for (Index n : c.n.values()) {
    VerificationRun run;
    run.n = n;
    const std::uint64_t seed = derive_seed(c.seed, {static_cast<std::uint64_t>(n)});
    switch (c.check) {
      case VerifyCheck::Wishart:
        run.report = verify_wishart_moments(c.covariance(), n, c.trials, seed,
                                            c.z_threshold, c.workers);
        break;
      case VerifyCheck::Haar:
        run.report = verify_haar_moments(c.p, n, c.trials, seed, c.z_threshold,
                                         c.workers);
        break;
      case VerifyCheck::Norm:
        run.report = verify_norm_moment(c.covariance(), n, c.trials, seed,
                                        c.z_threshold, c.workers);
        break;
    }
    runs.push_back(std::move(run));
  }

  bool ok = true;
  for (const VerificationRun& run : runs) {
    out << run.report.check << " n=" << run.n << " trials=" << run.report.trials
        << (run.report.passed() ? "  PASS" : "  FAIL") << '\n';
    for (const MomentCheck& m : run.report.moments) {
      out << "  " << std::left << std::setw(44) << m.quantity << std::right
          << " estimate " << std::setprecision(8) << std::setw(14) << m.estimate
          << "  target " << std::setw(14) << m.target << "  z "
          << std::setprecision(3) << std::setw(8) << m.z
          << (m.pass ? "" : "  <-- exceeds threshold") << '\n';
    }
    if (run.report.check == "norm" && run.n == 1) {
      out << "  max pointwise residual " << run.report.max_pointwise_residual
          << '\n';
    }
    ok = ok && run.report.passed();
  }
  emit(c, to_csv(runs), rows_to_json(runs));
  return ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace

std::vector<Index> NGrid::values() const {
  std::vector<Index> out;
  for (Index n = min; n <= max; n += step) out.push_back(n);
  return out;
}

NGrid parse_n_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.empty() || parts.size() > 3) {
    throw UsageError("--n: expected min:max:step, got '" + text + "'");
  }
  NGrid grid;
  grid.min = parse_positive(parts[0], "--n");
  grid.max = parts.size() >= 2 ? parse_positive(parts[1], "--n") : grid.min;
  grid.step = parts.size() == 3 ? parse_positive(parts[2], "--n") : 1;
  if (grid.max < grid.min) {
    throw UsageError("--n: max must not be smaller than min in '" + text + "'");
  }
  return grid;
}

Matrix CliConfig::covariance() const {
  if (model == "identity") return Matrix::Identity(p, p);
  if (model == "ar1") return ar1_cov(p, r);
  if (model == "fbm") return fbm_cov(p, hurst);
  if (model == "diag") {
    Vector d = Eigen::Map<const Vector>(diag.data(), static_cast<Index>(diag.size()));
    return d.asDiagonal();
  }
  throw Error(ErrorKind::InvalidParameter, "unknown covariance model '" + model + "'");
}

CliConfig parse_args(int argc, const char* const argv[]) {
  CLI::App app{"Shrinkage covariance estimators: Monte Carlo experiments and checks",
               "shrinkcov"};
  app.require_subcommand(1);

  CliConfig c;
  std::string n_text, methods_text, diag_text, format_text = "csv", out_text;
  std::string check_text;
  std::optional<Index> p_flag;
  std::optional<Index> trials_flag;
  std::optional<Index> coefficient_dim;
  std::optional<std::string> model_flag;
  bool r_given = false;
  bool h_given = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--p", p_flag, "Dimension (sensor count for beamform)");
    sub->add_option("--n", n_text, "Sample counts as min:max:step");
    sub->add_option("--trials", trials_flag, "Monte Carlo trials per cell");
    sub->add_option("--seed", c.seed, "Master seed");
    sub->add_option("--out", out_text, "Output file");
    sub->add_option("--format", format_text, "csv or json");
    sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  };

  CLI::App* mse = app.add_subcommand("mse", "Frobenius MSE sweep over n");
  add_common(mse);
  mse->add_option("--model", model_flag, "ar1 or fbm");
  mse->add_option("--r", c.r, "AR(1) correlation")->each([&](const std::string&) { r_given = true; });
  mse->add_option("--H", c.hurst, "FBM Hurst exponent")->each([&](const std::string&) { h_given = true; });
  mse->add_option("--methods", methods_text, "Comma-separated estimator list");

  CLI::App* beam = app.add_subcommand("beamform", "Capon SINR sweep over n");
  add_common(beam);
  beam->add_option("--methods", methods_text, "Comma-separated estimator list");
  beam->add_option("--signal-db", c.signal_db, "Signal power over noise [dB]");
  beam->add_option("--interference-db", c.interference_db,
                   "Interferer power over noise [dB]");
  beam->add_option("--theta-s", c.theta_s_deg, "Signal DOA [deg]");
  beam->add_option("--theta-i1", c.theta_i1_deg, "First interferer DOA [deg]");
  beam->add_option("--gamma", c.gamma, "Second interferer offset in beamwidths");
  beam->add_option("--coefficient-dim", coefficient_dim,
                   "Dimension used in the shrinkage formulas (default 2p)");

  CLI::App* verify = app.add_subcommand("verify", "Monte Carlo moment identity checks");
  add_common(verify);
  verify->add_option("--check", check_text, "wishart, haar or norm")->required();
  verify->add_option("--model", model_flag, "identity, ar1, fbm or diag");
  verify->add_option("--r", c.r, "AR(1) correlation")->each([&](const std::string&) { r_given = true; });
  verify->add_option("--H", c.hurst, "FBM Hurst exponent")->each([&](const std::string&) { h_given = true; });
  verify->add_option("--diag", diag_text, "Diagonal of Sigma, comma-separated");
  verify->add_option("--z", c.z_threshold, "Pass threshold in standard errors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (mse->parsed()) {
    c.subcommand = Subcommand::Mse;
  } else if (beam->parsed()) {
    c.subcommand = Subcommand::Beamform;
  } else {
    c.subcommand = Subcommand::Verify;
  }

  // Subcommand defaults.
  switch (c.subcommand) {
    case Subcommand::Mse:
      c.model = model_flag.value_or("ar1");
      c.p = p_flag.value_or(100);
      c.n = n_text.empty() ? NGrid{6, 30, 2} : parse_n_grid(n_text);
      c.trials = trials_flag.value_or(5000);
      c.methods = methods_text.empty()
                      ? std::vector<Method>{Method::Oracle, Method::OAS,
                                            Method::RBLW, Method::LW}
                      : parse_methods(methods_text);
      if (c.model != "ar1" && c.model != "fbm") {
        throw UsageError("--model: expected ar1 or fbm, got '" + c.model + "'");
      }
      break;
    case Subcommand::Beamform:
      c.p = p_flag.value_or(10);
      c.n = n_text.empty() ? NGrid{10, 60, 5} : parse_n_grid(n_text);
      c.trials = trials_flag.value_or(5000);
      c.methods = methods_text.empty()
                      ? std::vector<Method>{Method::Oracle, Method::OAS,
                                            Method::RBLW, Method::LW,
                                            Method::SampleOnly}
                      : parse_methods(methods_text);
      if (coefficient_dim) {
        if (*coefficient_dim < 2) throw UsageError("--coefficient-dim: must be >= 2");
        c.coefficient_dim = coefficient_dim;
      }
      break;
    case Subcommand::Verify:
      if (check_text == "wishart") {
        c.check = VerifyCheck::Wishart;
      } else if (check_text == "haar") {
        c.check = VerifyCheck::Haar;
      } else if (check_text == "norm") {
        c.check = VerifyCheck::Norm;
      } else {
        throw UsageError("--check: expected wishart, haar or norm, got '" +
                         check_text + "'");
      }
      c.model = model_flag.value_or("identity");
      if (!diag_text.empty()) {
        c.diag = parse_doubles(diag_text, "--diag");
        c.model = "diag";
        for (double d : c.diag) {
          if (!(d >= 0.0)) throw UsageError("--diag: entries must be >= 0");
        }
        if (p_flag && *p_flag != static_cast<Index>(c.diag.size())) {
          throw UsageError("--p: does not match the length of --diag");
        }
        c.p = static_cast<Index>(c.diag.size());
      } else {
        c.p = p_flag.value_or(5);
        if (c.model == "diag") throw UsageError("--diag: required with --model diag");
      }
      if (c.model != "identity" && c.model != "ar1" && c.model != "fbm" &&
          c.model != "diag") {
        throw UsageError("--model: expected identity, ar1, fbm or diag, got '" +
                         c.model + "'");
      }
      c.n = n_text.empty() ? NGrid{5, 5, 1} : parse_n_grid(n_text);
      c.trials = trials_flag.value_or(100'000);
      if (c.trials < kMinVerificationTrials) {
        throw UsageError("--trials: verification needs at least " +
                         std::to_string(kMinVerificationTrials));
      }
      if (!(c.z_threshold > 0.0)) throw UsageError("--z: must be positive");
      break;
  }

  if (c.p < 1) throw UsageError("--p: must be >= 1");
  if (c.subcommand == Subcommand::Mse && c.p < 2) {
    throw UsageError("--p: shrinkage needs p >= 2");
  }
  if (c.trials < 1) throw UsageError("--trials: must be >= 1");
  if ((r_given || c.model == "ar1") && !(std::abs(c.r) < 1.0)) {
    throw UsageError("--r: AR(1) correlation must satisfy |r| < 1");
  }
  if ((h_given || c.model == "fbm") && !(c.hurst >= 0.5 && c.hurst <= 1.0)) {
    throw UsageError("--H: Hurst exponent must be in [0.5, 1]");
  }
  if (format_text == "csv") {
    c.format = OutputFormat::Csv;
  } else if (format_text == "json") {
    c.format = OutputFormat::Json;
  } else {
    throw UsageError("--format: expected csv or json, got '" + format_text + "'");
  }
  if (!out_text.empty()) c.output = out_text;
  return c;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.subcommand) {
      case Subcommand::Mse: return run_mse(config, out);
      case Subcommand::Beamform: return run_beamform(config, out);
      case Subcommand::Verify: return run_verify(config, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

int main_entry(int argc, const char* const argv[], std::ostream& out,
               std::ostream& err) {
  CliConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n(run with --help for usage)\n";
    return kExitUsage;
  }
  return run(config, out, err);
}

}  // namespace shrinkcov::cli
