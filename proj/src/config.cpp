#include "panelprobit/config.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>

namespace panelprobit {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorKind::ConfigError, message); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where + " must be a JSON object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!known.count(item.key())) bad("unknown key '" + item.key() + "' in " + where);
}

const json& require(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad(where + " is missing required key '" + key + "'");
  return *it;
}

double real(const json& v, const std::string& what) {
  if (!v.is_number()) bad(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(what + " must be finite");
  return x;
}

std::uint64_t count(const json& v, const std::string& what) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    bad(what + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

TauDistribution parse_tau(const json& t) {
  if (!t.is_object()) bad("tau must be a JSON object");
  const json& fam = require(t, "tau", "family");
  if (!fam.is_string()) bad("tau.family must be a string");
  const std::string family = fam.get<std::string>();
  try {
    if (family == "normal") {
      check_keys(t, "tau", {"family", "mean", "variance"});
      return TauDistribution::normal(real(require(t, "tau", "mean"), "tau.mean"),
                                     real(require(t, "tau", "variance"), "tau.variance"));
    }
    if (family == "uniform") {
      check_keys(t, "tau", {"family", "lower", "upper"});
      return TauDistribution::uniform(real(require(t, "tau", "lower"), "tau.lower"),
                                      real(require(t, "tau", "upper"), "tau.upper"));
    }
    if (family == "mixture_normal") {
      check_keys(t, "tau", {"family", "weight", "mean1", "variance1", "mean2", "variance2"});
      return TauDistribution::mixture(
          real(require(t, "tau", "weight"), "tau.weight"), real(require(t, "tau", "mean1"), "tau.mean1"),
          real(require(t, "tau", "variance1"), "tau.variance1"), real(require(t, "tau", "mean2"), "tau.mean2"),
          real(require(t, "tau", "variance2"), "tau.variance2"));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    bad(std::string("invalid tau: ") + e.what());
  }
  bad("unknown tau.family '" + family + "' (expected normal, uniform or mixture_normal)");
}

}  // namespace

SimulationScenario parse_scenario(const json& doc) {
  check_keys(doc, "scenario",
             {"name", "n", "horizon", "gamma_true", "beta_true", "tau", "covariate_law", "replications", "seed",
              "estimators", "sigma_scaling", "quadrature_nodes", "heckman_estimate_mean"});
  SimulationScenario s;
  s.n = count(require(doc, "scenario", "n"), "n");
  s.horizon = count(require(doc, "scenario", "horizon"), "horizon");
  s.gamma_true = real(require(doc, "scenario", "gamma_true"), "gamma_true");
  s.tau = parse_tau(require(doc, "scenario", "tau"));
  s.replications = count(require(doc, "scenario", "replications"), "replications");

  const json& est = require(doc, "scenario", "estimators");
  if (!est.is_array()) bad("estimators must be an array of names");
  s.estimators.clear();
  for (const json& e : est) {
    if (!e.is_string()) bad("estimators must be an array of names");
    s.estimators.push_back(parse_estimator(e.get<std::string>()));
  }

  if (doc.contains("name")) {
    if (!doc["name"].is_string()) bad("name must be a string");
    s.name = doc["name"].get<std::string>();
  }
  if (doc.contains("beta_true")) {
    const json& b = doc["beta_true"];
    if (!b.is_array()) bad("beta_true must be an array of numbers");
    for (const json& v : b) s.beta_true.push_back(real(v, "beta_true entry"));
  }
  if (doc.contains("covariate_law")) {
    if (!doc["covariate_law"].is_string()) bad("covariate_law must be a string");
    s.covariate_law = parse_covariate_law(doc["covariate_law"].get<std::string>());
  }
  if (doc.contains("seed")) s.seed = count(doc["seed"], "seed");
  if (doc.contains("sigma_scaling") && !doc["sigma_scaling"].is_null())
    s.sigma_scaling = real(doc["sigma_scaling"], "sigma_scaling");
  if (doc.contains("quadrature_nodes")) {
    const auto q = count(doc["quadrature_nodes"], "quadrature_nodes");
    if (q > 512) bad("quadrature_nodes must lie in [1, 512]");
    s.quadrature_nodes = static_cast<int>(q);
  }
  if (doc.contains("heckman_estimate_mean")) {
    if (!doc["heckman_estimate_mean"].is_boolean()) bad("heckman_estimate_mean must be true or false");
    s.heckman_estimate_mean = doc["heckman_estimate_mean"].get<bool>();
  }
  s.validate();
  return s;
}

json tau_to_json(const TauDistribution& tau) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformTau>) {
          return {{"family", "uniform"}, {"lower", d.lower}, {"upper", d.upper}};
        } else if constexpr (std::is_same_v<T, NormalTau>) {
          return {{"family", "normal"}, {"mean", d.mean}, {"variance", d.variance}};
        } else {
          return {{"family", "mixture_normal"}, {"weight", d.weight},   {"mean1", d.mean1},
                  {"variance1", d.variance1},   {"mean2", d.mean2},     {"variance2", d.variance2}};
        }
      },
      tau.variant());
}

json scenario_to_json(const SimulationScenario& s) {
  json doc;
  if (!s.name.empty()) doc["name"] = s.name;
  doc["n"] = s.n;
  doc["horizon"] = s.horizon;
  doc["gamma_true"] = s.gamma_true;
  doc["beta_true"] = s.beta_true;
  doc["tau"] = tau_to_json(s.tau);
  doc["covariate_law"] = to_string(s.covariate_law);
  doc["replications"] = s.replications;
  doc["seed"] = s.seed;
  json names = json::array();
  for (EstimatorKind e : s.estimators) names.push_back(to_string(e));
  doc["estimators"] = names;
  doc["sigma_scaling"] = s.sigma_scaling ? json(*s.sigma_scaling) : json(nullptr);
  doc["quadrature_nodes"] = s.quadrature_nodes;
  doc["heckman_estimate_mean"] = s.heckman_estimate_mean;
  return doc;
}

}  // namespace panelprobit
