#include "svine/model_spec.hpp"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "svine/kpacf.hpp"

namespace svine {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::invalid_argument(std::string(what) + ": cannot open " + path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string(what) + " " + path + ": " +
                                e.what());
  }
}

void check_keys(const ordered_json& obj,
                std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known)
      throw std::invalid_argument(where + ": unknown key '" + item.key() +
                                  "'");
  }
}

Eigen::VectorXd number_array(const ordered_json& j, const std::string& where) {
  if (!j.is_array())
    throw std::invalid_argument(where + " must be an array of numbers");
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& e : j) {
    if (!e.is_number())
      throw std::invalid_argument(where + " must be an array of numbers");
    v[i++] = e.get<double>();
  }
  return v;
}

ordered_json to_array(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd margin_param_vector(const MarginalModel& m) {
  switch (m.kind) {
    case MarginKind::Normal:
      return Eigen::Vector2d(m.mu, m.sigma);
    case MarginKind::SkewedStudent:
      return Eigen::Vector4d(m.mu, m.sigma, m.nu, m.gamma);
    case MarginKind::Empirical:
      return Eigen::VectorXd();
  }
  throw std::logic_error("margin_param_vector: bad kind");
}

MarginalModel margin_from_params(MarginKind kind, const Eigen::VectorXd& p,
                                 const std::string& where) {
  MarginalModel m;
  m.kind = kind;
  switch (kind) {
    case MarginKind::Normal:
      if (p.size() != 2)
        throw std::invalid_argument(where +
                                    ": normal margin takes [mu, sigma]");
      m.mu = p[0];
      m.sigma = p[1];
      break;
    case MarginKind::SkewedStudent:
      if (p.size() != 4)
        throw std::invalid_argument(
            where + ": skewed_student margin takes [mu, sigma, nu, gamma]");
      m.mu = p[0];
      m.sigma = p[1];
      m.nu = p[2];
      m.gamma = p[3];
      break;
    case MarginKind::Empirical:
      if (p.size() != 0)
        throw std::invalid_argument(where +
                                    ": empirical margin takes no parameters");
      return m;  // validation needs a sample, which a file cannot carry
  }
  validate(m);
  return m;
}

}  // namespace

ModelSpecFile read_model_spec(const std::string& path) {
  const ordered_json j = parse_file(path, "spec");
  if (!j.is_object())
    throw std::invalid_argument("spec " + path + ": top level must be an object");
  check_keys(j, {"kpacf", "copula", "truncation_lag", "margin"}, path);

  ModelSpecFile spec;
  try {
    const ordered_json& kp = j.at("kpacf");
    check_keys(kp, {"kind", "theta", "horizon"}, path + ": kpacf");
    spec.kpacf = kpacf_spec_from_kind_string(kp.at("kind").get<std::string>());
    spec.kpacf.theta = number_array(kp.at("theta"), path + ": kpacf.theta");
    if (kp.contains("horizon")) spec.kpacf.horizon = kp.at("horizon").get<int>();

    const ordered_json& cop = j.at("copula");
    check_keys(cop, {"family", "negative_rule"}, path + ": copula");
    const ordered_json& fam = cop.at("family");
    if (fam.is_string()) {
      spec.families.push_back(family_from_name(fam.get<std::string>()));
    } else if (fam.is_array() && !fam.empty()) {
      for (const auto& f : fam)
        spec.families.push_back(family_from_name(f.get<std::string>()));
    } else {
      throw std::invalid_argument(path +
                                  ": copula.family must be a name or a "
                                  "non-empty list of names");
    }
    if (cop.contains("negative_rule"))
      spec.rule =
          negative_rule_from_name(cop.at("negative_rule").get<std::string>());

    if (j.contains("truncation_lag")) {
      spec.truncation_lag = j.at("truncation_lag").get<int>();
      if (spec.truncation_lag < 0)
        throw std::invalid_argument(path + ": truncation_lag must be >= 0");
    }

    if (j.contains("margin")) {
      const ordered_json& mg = j.at("margin");
      check_keys(mg, {"kind", "params"}, path + ": margin");
      spec.margin_kind =
          margin_kind_from_name(mg.at("kind").get<std::string>());
      if (mg.contains("params"))
        spec.margin_params = number_array(mg.at("params"), path + ": margin.params");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("spec " + path + ": " + e.what());
  }

  validate(spec.kpacf);
  if (spec.margin_kind)
    (void)margin_from_params(*spec.margin_kind, spec.margin_params, path);
  return spec;
}

int effective_truncation(const ModelSpecFile& spec) {
  return spec.truncation_lag >= 0 ? spec.truncation_lag : spec.kpacf.horizon;
}

SVineModel model_from_spec(const ModelSpecFile& spec) {
  if (spec.families.size() != 1)
    throw std::invalid_argument(
        "this command needs exactly one copula family, the spec lists " +
        std::to_string(spec.families.size()));
  KpacfParam par;
  par.spec = spec.kpacf;
  par.family = spec.families.front();
  par.rule = spec.rule;
  MarginalModel margin;
  if (spec.margin_kind) {
    if (*spec.margin_kind == MarginKind::Empirical)
      throw std::invalid_argument(
          "an empirical margin cannot be instantiated from a spec file");
    margin = margin_from_params(*spec.margin_kind, spec.margin_params, "spec");
  }
  return make_model(par, effective_truncation(spec), std::move(margin));
}

namespace {
const std::array<std::string, 3> kMarginNames = {"normal", "skewed_student",
                                                 "empirical"};
}

const std::string& margin_kind_name(MarginKind kind) {
  return kMarginNames[static_cast<int>(kind)];
}

MarginKind margin_kind_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kMarginNames.size(); ++i)
    if (kMarginNames[i] == name) return static_cast<MarginKind>(i);
  throw std::invalid_argument("unknown margin kind: " + name);
}

void write_fit_report(const std::string& path, const FitReport& report) {
  ordered_json j;
  j["kpacf"] = {{"kind", kpacf_kind_string(report.spec)},
                {"theta", to_array(report.spec.theta)},
                {"horizon", report.spec.horizon}};
  j["copula"] = {{"family", family_name(report.family)},
                 {"negative_rule", negative_rule_name(report.rule)}};
  j["truncation_lag"] = report.truncation_lag;
  j["param_count"] = report.param_count;
  j["loglik"] = report.loglik;
  j["aic"] = report.aic;
  j["converged"] = report.converged;
  j["stderrs"] =
      report.stderrs ? to_array(*report.stderrs) : ordered_json(nullptr);
  j["stderr_failed"] = report.stderr_failed;
  if (report.margin_fit) {
    j["margin"] = {{"kind", margin_kind_name(report.margin_fit->kind)},
                   {"params", to_array(margin_param_vector(*report.margin_fit))},
                   {"loglik", report.margin_fit->loglik}};
  } else {
    j["margin"] = nullptr;
  }
  j["residuals_z"] = to_array(report.residuals_z);
  j["residuals_normal"] = to_array(report.residuals_normal);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("report: cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::invalid_argument("report: write to " + path + " failed");
}

FitReport read_fit_report(const std::string& path) {
  const ordered_json j = parse_file(path, "report");
  FitReport rep;
  try {
    check_keys(j,
               {"kpacf", "copula", "truncation_lag", "param_count", "loglik",
                "aic", "converged", "stderrs", "stderr_failed", "margin",
                "residuals_z", "residuals_normal"},
               path);
    const ordered_json& kp = j.at("kpacf");
    rep.spec = kpacf_spec_from_kind_string(kp.at("kind").get<std::string>());
    rep.spec.theta = number_array(kp.at("theta"), path + ": kpacf.theta");
    rep.spec.horizon = kp.at("horizon").get<int>();
    rep.family = family_from_name(j.at("copula").at("family").get<std::string>());
    rep.rule = negative_rule_from_name(
        j.at("copula").at("negative_rule").get<std::string>());
    rep.truncation_lag = j.at("truncation_lag").get<int>();
    rep.param_count = j.at("param_count").get<int>();
    rep.loglik = j.at("loglik").get<double>();
    rep.aic = j.at("aic").get<double>();
    rep.converged = j.at("converged").get<bool>();
    if (!j.at("stderrs").is_null())
      rep.stderrs = number_array(j.at("stderrs"), path + ": stderrs");
    rep.stderr_failed = j.at("stderr_failed").get<bool>();
    if (!j.at("margin").is_null()) {
      const ordered_json& mg = j.at("margin");
      MarginalModel m = margin_from_params(
          margin_kind_from_name(mg.at("kind").get<std::string>()),
          number_array(mg.at("params"), path + ": margin.params"), path);
      m.loglik = mg.at("loglik").get<double>();
      rep.margin_fit = std::move(m);
    }
    rep.residuals_z = number_array(j.at("residuals_z"), path + ": residuals_z");
    rep.residuals_normal =
        number_array(j.at("residuals_normal"), path + ": residuals_normal");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("report " + path + ": " + e.what());
  }
  return rep;
}

std::string fnv1a_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::invalid_argument("checksum: cannot open " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[4096];
  do {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  } while (in);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  ordered_json j;
  j["command"] = manifest.command;
  j["arguments"] = manifest.arguments;
  j["seed"] = manifest.seed ? ordered_json(*manifest.seed) : ordered_json(nullptr);
  j["version"] = manifest.version;
  ordered_json sums = ordered_json::object();
  for (const auto& [file, digest] : manifest.input_checksums)
    sums[file] = digest;
  j["input_checksums"] = std::move(sums);
  j["outputs"] = manifest.outputs;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("manifest: cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out)
    throw std::invalid_argument("manifest: write to " + path + " failed");
}

}  // namespace svine
