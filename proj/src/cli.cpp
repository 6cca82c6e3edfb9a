#include "svine/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "svine/csv.hpp"
#include "svine/errors.hpp"
#include "svine/inference.hpp"
#include "svine/kpacf.hpp"
#include "svine/math.hpp"
#include "svine/model_spec.hpp"
#include "svine/process.hpp"
#include "svine/version.hpp"

namespace svine {
namespace {

struct Overrides {
  std::optional<int> truncation;
  std::string family;
  std::string rule;
};

void apply(const Overrides& ov, ModelSpecFile& spec) {
  if (ov.truncation) spec.truncation_lag = *ov.truncation;
  if (!ov.family.empty()) spec.families = {family_from_name(ov.family)};
  if (!ov.rule.empty()) spec.rule = negative_rule_from_name(ov.rule);
}

// "dir/report.json" -> "dir/report"; used to place companion files
std::string stem_of(const std::string& out) {
  const std::size_t dot = out.find_last_of('.');
  const std::size_t sep = out.find_last_of('/');
  if (dot != std::string::npos && (sep == std::string::npos || dot > sep))
    return out.substr(0, dot);
  return out;
}

RunManifest manifest_base(const std::string& command,
                          const std::vector<std::string>& args,
                          std::optional<std::uint64_t> seed) {
  RunManifest m;
  m.command = command;
  m.arguments = args;
  m.seed = seed;
  m.version = kVersion;
  return m;
}

int cmd_simulate(const std::string& spec_path, int n, std::uint64_t seed,
                 const std::string& out, const Overrides& ov,
                 const std::vector<std::string>& args) {
  ModelSpecFile spec = read_model_spec(spec_path);
  apply(ov, spec);
  const SVineModel model = model_from_spec(spec);
  const SimulationPath path = simulate(model, n, seed);

  // one column, so the file feeds straight into `fit`: the data scale when
  // the spec carries a margin, the copula scale otherwise
  if (spec.margin_kind) {
    csv::write(out, {"x"}, margin_scale(model, path.u));
  } else {
    csv::write(out, {"u"}, path.u);
  }

  RunManifest m = manifest_base("simulate", args, seed);
  m.input_checksums.emplace_back(spec_path, fnv1a_hex(spec_path));
  m.outputs = {out};
  write_manifest(stem_of(out) + "_manifest.json", m);

  std::printf("simulate: wrote %s (n=%d, truncation=%d, family=%s)\n",
              out.c_str(), n, path.truncation_lag,
              family_name(spec.families.front()).c_str());
  return 0;
}

int cmd_fit(const std::string& data_path, const std::string& template_path,
            const std::string& out, const Overrides& ov,
            const std::vector<std::string>& args) {
  const csv::Table data = csv::read(data_path);
  if (data.values.cols() != 1)
    throw std::invalid_argument("fit: " + data_path + " has " +
                                std::to_string(data.values.cols()) +
                                " columns, expected a single one");
  const Eigen::VectorXd x = data.values.col(0);
  if (x.size() < 2)
    throw std::invalid_argument("fit: " + data_path +
                                ": need at least 2 observations, found " +
                                std::to_string(x.size()));

  ModelSpecFile spec = read_model_spec(template_path);
  apply(ov, spec);
  if (spec.families.size() != 1)
    throw std::invalid_argument("fit: needs exactly one copula family");
  const Family family = spec.families.front();
  const MarginKind margin = spec.margin_kind.value_or(MarginKind::Empirical);
  const int truncation = effective_truncation(spec);

  const FitReport rep =
      fit_full(x, margin, spec.kpacf, family, spec.rule, truncation);

  const std::string stem = stem_of(out);
  write_fit_report(out, rep);

  const std::string res_path = stem + "_residuals.csv";
  Eigen::MatrixXd res(x.size(), 2);
  res.col(0) = rep.residuals_z;
  res.col(1) = rep.residuals_normal;
  csv::write(res_path, {"z", "z_normal"}, res);

  // semi-empirical kpacf of the data against the fitted parametric one,
  // on the same copula-scale sample the fit saw
  Eigen::VectorXd u(x.size());
  if (margin == MarginKind::Empirical) {
    u = pseudo_observations(x);
  } else {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      u[i] = math::unit_clamp(margin_cdf(*rep.margin_fit, x[i]));
  }
  const int K = int(std::min<Eigen::Index>(
      x.size() - 1, truncation > 0 ? truncation : 10));
  const std::vector<TauEstimate> taus =
      semi_empirical_kpacf(u, report_sequence(rep), K);
  const Eigen::VectorXd model_taus = kpacf_taus(rep.spec, K);
  Eigen::MatrixXd tk(K, 3);
  for (int k = 0; k < K; ++k) {
    tk(k, 0) = taus[k].lag;
    tk(k, 1) = taus[k].tau;
    tk(k, 2) = model_taus[k];
  }
  const std::string tau_path = stem + "_kpacf.csv";
  csv::write(tau_path, {"k", "tau_data", "tau_model"}, tk);

  RunManifest m = manifest_base("fit", args, std::nullopt);
  m.input_checksums.emplace_back(data_path, fnv1a_hex(data_path));
  m.input_checksums.emplace_back(template_path, fnv1a_hex(template_path));
  m.outputs = {out, res_path, tau_path};
  write_manifest(stem + "_manifest.json", m);

  std::printf(
      "fit: wrote %s (family=%s, params=%d, loglik=%.6f, aic=%.6f, "
      "converged=%s)\n",
      out.c_str(), family_name(family).c_str(), rep.param_count, rep.loglik,
      rep.aic, rep.converged ? "yes" : "no");
  return rep.converged ? 0 : 4;
}

int cmd_experiment(const std::string& spec_path, int n, std::uint64_t seed,
                   const std::string& out, const Overrides& ov,
                   const std::vector<std::string>& args) {
  ModelSpecFile spec = read_model_spec(spec_path);
  apply(ov, spec);
  if (n < 2)
    throw std::invalid_argument("experiment: n must be at least 2");

  RunManifest m = manifest_base("experiment", args, seed);
  m.input_checksums.emplace_back(spec_path, fnv1a_hex(spec_path));

  const std::string stem = stem_of(out);
  for (const Family family : spec.families) {
    const CopulaSequence seq = sequence_from_kpacf(
        spec.kpacf, family, spec.rule, effective_truncation(spec));
    const ConvergenceTable table = convergence_experiment(seq, n, seed);
    Eigen::MatrixXd t(table.lag.size(), 3);
    t.col(0) = table.lag.cast<double>();
    t.col(1) = table.value;
    t.col(2).setConstant(table.ultimate);
    const std::string path = stem + "_" + family_name(family) + ".csv";
    csv::write(path, {"k", "value", "ultimate"}, t);
    m.outputs.push_back(path);
    std::printf("experiment: wrote %s (%d rows)\n", path.c_str(),
                int(table.lag.size()));
  }
  write_manifest(stem + "_manifest.json", m);
  return 0;
}

int cmd_residual_qq(const std::string& report_path, const std::string& out,
                    const std::vector<std::string>& args) {
  const FitReport rep = read_fit_report(report_path);
  if (rep.residuals_normal.size() == 0)
    throw std::invalid_argument("residual-qq: " + report_path +
                                " holds no residuals");
  Eigen::VectorXd sorted = rep.residuals_normal;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  const Eigen::Index n = sorted.size();
  Eigen::MatrixXd t(n, 2);
  for (Eigen::Index i = 0; i < n; ++i)
    t(i, 0) = math::norm_quantile(double(i + 1) / double(n + 1));
  t.col(1) = sorted;
  csv::write(out, {"theoretical", "residual"}, t);

  RunManifest m = manifest_base("residual-qq", args, std::nullopt);
  m.input_checksums.emplace_back(report_path, fnv1a_hex(report_path));
  m.outputs = {out};
  write_manifest(stem_of(out) + "_manifest.json", m);

  std::printf("residual-qq: wrote %s (%d rows)\n", out.c_str(), int(n));
  return 0;
}

int cmd_kpacf(const std::string& spec_path, const std::string& out, int lags,
              const Overrides& ov, const std::vector<std::string>& args) {
  ModelSpecFile spec = read_model_spec(spec_path);
  apply(ov, spec);
  const int K = lags > 0 ? lags : effective_truncation(spec);
  if (K < 1) throw std::invalid_argument("kpacf: no lags to print");
  const Eigen::VectorXd taus = kpacf_taus(spec.kpacf, K);

  std::printf("k tau (%s)\n", kpacf_kind_string(spec.kpacf).c_str());
  for (int k = 0; k < K; ++k) std::printf("%d %.10g\n", k + 1, taus[k]);

  if (!out.empty()) {
    Eigen::MatrixXd t(K, 2);
    for (int k = 0; k < K; ++k) {
      t(k, 0) = k + 1;
      t(k, 1) = taus[k];
    }
    csv::write(out, {"k", "tau"}, t);
    RunManifest m = manifest_base("kpacf", args, std::nullopt);
    m.input_checksums.emplace_back(spec_path, fnv1a_hex(spec_path));
    m.outputs = {out};
    write_manifest(stem_of(out) + "_manifest.json", m);
  }
  return 0;
}

int thread_cap_from_env() {
  const char* env = std::getenv("SVINE_THREADS");
  if (!env) return 0;
  int n = 0;
  const auto res = std::from_chars(env, env + std::strlen(env), n);
  if (res.ec != std::errc() || *res.ptr != '\0' || n < 1) {
    std::fprintf(stderr,
                 "svine: SVINE_THREADS must be a positive integer, got "
                 "'%s'\n",
                 env);
    return -1;
  }
  return n;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  const int threads = thread_cap_from_env();
  if (threads < 0) return 2;
  // the computations are sequential today; the cap binds Eigen's kernels
  // and whatever parallel section is added later
  if (threads > 0) Eigen::setNbThreads(threads);

  CLI::App app{"stationary vine copula time-series toolkit"};
  app.require_subcommand(1);

  std::string spec_path, data_path, template_path, report_path, out;
  int n = 0;
  std::uint64_t seed = 1;
  int lags = 0;
  Overrides ov;

  const auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--truncation", ov.truncation,
                    "override the spec's truncation lag")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--family", ov.family, "override the copula family");
    cmd->add_option("--negative-rule", ov.rule,
                    "override the negative-tau rule");
  };

  CLI::App* sim = app.add_subcommand("simulate", "simulate a path");
  sim->add_option("spec", spec_path, "model spec JSON")->required();
  sim->add_option("n", n, "path length")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "innovation seed");
  sim->add_option("--out", out, "output CSV")->required();
  add_overrides(sim);

  CLI::App* fit = app.add_subcommand("fit", "fit a model to a data column");
  fit->add_option("data", data_path, "single-column CSV")->required();
  fit->add_option("template", template_path, "model spec JSON with starting values")
      ->required();
  fit->add_option("--out", out, "output report JSON")->required();
  add_overrides(fit);

  CLI::App* exp =
      app.add_subcommand("experiment", "causal-filter convergence tables");
  exp->add_option("spec", spec_path, "model spec JSON")->required();
  exp->add_option("n", n, "window length")->required()->check(CLI::PositiveNumber);
  exp->add_option("--seed", seed, "innovation seed");
  exp->add_option("--out", out, "output CSV stem")->required();
  add_overrides(exp);

  CLI::App* qq = app.add_subcommand("residual-qq", "QQ data from a fit report");
  qq->add_option("report", report_path, "fit report JSON")->required();
  qq->add_option("--out", out, "output CSV")->required();

  CLI::App* kp = app.add_subcommand("kpacf", "print the tau ladder of a spec");
  kp->add_option("spec", spec_path, "model spec JSON")->required();
  kp->add_option("--out", out, "optional output CSV");
  kp->add_option("--lags", lags, "number of lags (default: truncation)")
      ->check(CLI::PositiveNumber);
  add_overrides(kp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (sim->parsed()) return cmd_simulate(spec_path, n, seed, out, ov, args);
    if (fit->parsed()) return cmd_fit(data_path, template_path, out, ov, args);
    if (exp->parsed()) return cmd_experiment(spec_path, n, seed, out, ov, args);
    if (qq->parsed()) return cmd_residual_qq(report_path, out, args);
    if (kp->parsed()) return cmd_kpacf(spec_path, out, lags, ov, args);
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "svine: numeric failure: %s\n", e.what());
    return 3;
  } catch (const convergence_error& e) {
    std::fprintf(stderr, "svine: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "svine: %s\n", e.what());
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1)
}

}  // namespace svine
