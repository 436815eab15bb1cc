#include "panelprobit/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "panelprobit/config.hpp"

namespace panelprobit {
namespace {

using json = nlohmann::ordered_json;

json se_value(const std::optional<double>& se) {
  if (se && std::isfinite(*se)) return *se;
  return "unavailable";
}

std::string number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

json provenance_json(const Provenance& p) {
  json j;
  j["input_digest"] = p.input_digest;
  j["config"] = p.config;
  j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
  return j;
}

json estimate_result_json(std::string_view method, const std::vector<ReportedParameter>& parameters,
                          const json& diagnostics, const Provenance& provenance) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["status"] = "ok";
  doc["method"] = method;
  json params = json::array();
  for (const ReportedParameter& p : parameters)
    params.push_back({{"name", p.name}, {"estimate", p.estimate}, {"se", se_value(p.se)}});
  doc["parameters"] = params;
  doc["diagnostics"] = diagnostics;
  doc["provenance"] = provenance_json(provenance);
  return doc;
}

json error_json(const Error& error) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["status"] = "error";
  doc["error"] = {{"kind", to_string(error.kind())},
                  {"category", is_numerical(error.kind()) ? "numerical" : "input"},
                  {"message", error.what()},
                  {"details", error.details()}};
  return doc;
}

json rmse_report_json(const RmseReport& report, const Provenance& provenance) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["status"] = "ok";
  doc["method"] = "rmse_experiment";
  doc["scenario"] = scenario_to_json(report.scenario);
  doc["effective_tau"] = tau_to_json(report.scenario.effective_tau());
  json estimators = json::array();
  for (const EstimatorSummary& e : report.estimators) {
    json entry;
    entry["estimator"] = to_string(e.estimator);
    entry["successes"] = e.successes;
    entry["failures"] = e.failures;
    json by_kind = json::object();
    for (const auto& [kind, n] : e.failures_by_kind) by_kind[kind] = n;
    entry["failures_by_kind"] = by_kind;
    json params = json::array();
    for (const ParameterSummary& p : e.parameters) {
      json row;
      row["name"] = p.name;
      row["truth"] = p.truth;
      row["rmse"] = p.rmse;
      row["bias"] = p.bias;
      row["rmse_mc_se"] = p.rmse_mc_se;
      row["coverage95"] = p.coverage95 ? json(*p.coverage95) : json("unavailable");
      row["mean_se"] = p.coverage95 ? json(p.mean_se) : json("unavailable");
      params.push_back(row);
    }
    entry["parameters"] = params;
    estimators.push_back(entry);
  }
  doc["estimators"] = estimators;
  doc["provenance"] = provenance_json(provenance);
  return doc;
}

std::string rmse_report_csv(const RmseReport& report) {
  std::ostringstream out;
  out << "estimator,parameter,truth,rmse,bias,rmse_mc_se,coverage95,mean_se,successes,failures\n";
  for (const EstimatorSummary& e : report.estimators) {
    for (const ParameterSummary& p : e.parameters) {
      out << to_string(e.estimator) << ',' << p.name << ',' << number(p.truth) << ',' << number(p.rmse) << ','
          << number(p.bias) << ',' << number(p.rmse_mc_se) << ','
          << (p.coverage95 ? number(*p.coverage95) : "") << ',' << (p.coverage95 ? number(p.mean_se) : "") << ','
          << e.successes << ',' << e.failures << '\n';
    }
  }
  return out.str();
}

}  // namespace panelprobit
