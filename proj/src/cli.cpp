#include "panelprobit/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "panelprobit/conditional_glm.hpp"
#include "panelprobit/config.hpp"
#include "panelprobit/digest.hpp"
#include "panelprobit/error.hpp"
#include "panelprobit/heckman_mle.hpp"
#include "panelprobit/panel_csv.hpp"
#include "panelprobit/ratio_estimator.hpp"
#include "panelprobit/report.hpp"
#include "panelprobit/runs_t3.hpp"
#include "panelprobit/simulation.hpp"

namespace panelprobit {
namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string input;
  std::string output;
  std::string counts;
  std::string counts_file;
  std::string compare;
  std::string config;
  std::string csv;
  std::optional<std::uint64_t> seed;
  bool dynamic = false;
  bool estimate_mean = false;
  int nodes = 64;
  unsigned threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::UsageError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::UsageError, "cannot write '" + path + "'");
  out << text;
}

void emit(const json& doc, const Options& opt, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (opt.output.empty()) {
    out << text;
  } else {
    write_file(opt.output, text);
  }
}

std::string digest_of(std::string_view bytes) { return "sha256:" + sha256_hex(bytes); }

struct LoadedPanel {
  PanelData panel;
  std::string digest;
};

LoadedPanel load_panel(const std::string& path) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  return {parse_panel_csv(in), digest_of(bytes)};
}

json counts_json(const RunsCounts& c) {
  json j;
  for (std::size_t k = 0; k < 8; ++k) j["n" + std::string(RunsCounts::kPatterns[k])] = c.n[k];
  return j;
}

std::string canonical_counts(const RunsCounts& c) {
  std::string s;
  for (std::size_t k = 0; k < 8; ++k) s += (k ? "," : "") + std::to_string(c.n[k]);
  return s;
}

/// Counts from exactly one of --counts, --counts-file, --input.
struct LoadedRuns {
  RunsCounts counts;
  std::string digest;
  std::string source;
};

LoadedRuns load_runs(const Options& opt) {
  const int given = !opt.counts.empty() + !opt.counts_file.empty() + !opt.input.empty();
  if (given != 1) throw Error(ErrorKind::UsageError, "give exactly one of --counts, --counts-file or --input");
  if (!opt.counts.empty()) {
    const RunsCounts c = parse_runs_list(opt.counts);
    return {c, digest_of(canonical_counts(c)), "counts"};
  }
  if (!opt.counts_file.empty()) {
    const std::string bytes = read_file(opt.counts_file);
    std::istringstream in(bytes);
    return {parse_runs_csv(in), digest_of(bytes), "counts_file"};
  }
  const LoadedPanel p = load_panel(opt.input);
  return {tabulate_runs(p.panel), p.digest, "input"};
}

int cmd_estimate_gamma(const Options& opt, std::ostream& out) {
  const LoadedPanel loaded = load_panel(opt.input);
  const TransitionCounts c = count_transitions(loaded.panel);
  const RatioEstimate r = estimate_gamma_ratio(c);
  json diag;
  diag["n"] = loaded.panel.size();
  diag["counts"] = {{"n00", c.n00}, {"n01", c.n01}, {"n10", c.n10}, {"n11", c.n11}};
  diag["w_hat"] = r.w_hat;
  diag["kappa_n"] = r.kappa_n;
  diag["sigma2"] = r.sigma2;
  diag["covariates_ignored"] = loaded.panel.has_covariates();
  Provenance prov{loaded.digest, {{"command", "estimate-gamma"}, {"input", opt.input}}, std::nullopt};
  emit(estimate_result_json("ratio", {{"gamma", r.gamma_hat, r.se}}, diag, prov), opt, out);
  return 0;
}

int cmd_estimate_glm(const Options& opt, std::ostream& out) {
  const LoadedPanel loaded = load_panel(opt.input);
  if (!opt.dynamic && !loaded.panel.has_covariates())
    throw Error(ErrorKind::UsageError, "the static model needs covariate columns x1..xk");
  const SwitcherDesign design = build_switcher_design(loaded.panel, opt.dynamic);
  const IdentifiabilityReport ident = identifiability_check(design);
  const GlmFit fit = fit_conditional(design);

  std::vector<ReportedParameter> params;
  for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j)
    params.push_back({fit.names[j], fit.coefficients(j), fit.se(j)});
  json diag;
  diag["n"] = loaded.panel.size();
  diag["switchers"] = design.rows();
  diag["iterations"] = fit.iterations;
  diag["converged"] = fit.converged;
  diag["deviance"] = fit.deviance;
  diag["covariance_source"] = fit.covariance_source;
  diag["identifiability"] = {{"verdict", to_string(ident.verdict)},
                             {"reason", ident.reason},
                             {"rank", ident.rank},
                             {"augmented_full_rank", ident.augmented_full_rank}};
  Provenance prov{loaded.digest,
                  {{"command", "estimate-glm"}, {"input", opt.input}, {"dynamic", opt.dynamic}},
                  std::nullopt};
  emit(estimate_result_json(opt.dynamic ? "conditional_glm_dynamic" : "conditional_glm_static", params, diag, prov),
       opt, out);
  return 0;
}

int cmd_estimate_heckman(const Options& opt, std::ostream& out) {
  PanelData panel;
  std::string digest;
  json config{{"command", "estimate-heckman"}};
  if (!opt.counts.empty() || !opt.counts_file.empty()) {
    const LoadedRuns runs = load_runs(opt);
    panel = expand_runs(runs.counts);
    digest = runs.digest;
    config["counts"] = counts_json(runs.counts);
  } else if (!opt.input.empty()) {
    LoadedPanel loaded = load_panel(opt.input);
    panel = std::move(loaded.panel);
    digest = loaded.digest;
    config["input"] = opt.input;
  } else {
    throw Error(ErrorKind::UsageError, "give --input, --counts or --counts-file");
  }
  MleSpec spec;
  spec.horizon = panel.horizon();
  spec.estimate_mean = opt.estimate_mean;
  spec.quadrature_nodes = opt.nodes;
  config["estimate_mean"] = spec.estimate_mean;
  config["nodes"] = spec.quadrature_nodes;
  config["tolerance"] = spec.tolerance;

  const MleFit fit = fit_mle(panel, spec);
  std::vector<ReportedParameter> params{{"gamma", fit.gamma_hat, fit.gamma_se}, {"sigma", fit.sigma_hat, fit.sigma_se}};
  if (fit.mu_hat) params.push_back({"mu", *fit.mu_hat, fit.mu_se});
  for (std::size_t j = 0; j < fit.beta_hat.size(); ++j)
    params.push_back({"beta" + std::to_string(j + 1), fit.beta_hat[j], fit.beta_se[j]});
  json diag;
  diag["n"] = panel.size();
  diag["horizon"] = panel.horizon();
  diag["loglik"] = fit.loglik;
  diag["evaluations"] = fit.evaluations;
  diag["converged"] = fit.converged;
  emit(estimate_result_json("heckman_mle", params, diag, Provenance{digest, config, std::nullopt}), opt, out);
  return 0;
}

int cmd_analyze_runs(const Options& opt, std::ostream& out) {
  const LoadedRuns runs = load_runs(opt);
  const T3Estimate est = estimate_gamma_t3(runs.counts);
  const T3Probabilities p = t3_probabilities(est.gamma_hat);
  json diag;
  diag["counts"] = counts_json(runs.counts);
  diag["loglik"] = est.loglik;
  diag["curvature"] = est.curvature;
  diag["non_concave"] = est.non_concave;
  diag["iterations"] = est.iterations;
  diag["bracket"] = {est.bracket_lower, est.bracket_upper};
  diag["probabilities"] = {{"p001", p.p001}, {"p010", p.p010}, {"p100", p.p100},
                           {"p110", p.p110}, {"p011", p.p011}, {"p101", p.p101}};
  json config{{"command", "analyze-runs"}, {"source", runs.source}, {"counts", counts_json(runs.counts)}};
  if (!opt.compare.empty()) {
    const RunsCounts other_counts = parse_runs_list(opt.compare);
    const T3Estimate other = estimate_gamma_t3(other_counts);
    json cmp;
    cmp["counts"] = counts_json(other_counts);
    cmp["gamma_hat"] = other.gamma_hat;
    cmp["se"] = other.se ? json(*other.se) : json("unavailable");
    if (est.se && other.se) {
      cmp["z"] = (est.gamma_hat - other.gamma_hat) / std::sqrt(*est.se * *est.se + *other.se * *other.se);
    } else {
      cmp["z"] = "unavailable";
    }
    cmp["informal"] = true;
    cmp["note"] = "difference over the root sum of squared standard errors; treats the samples as independent";
    diag["comparison"] = cmp;
    config["compare"] = counts_json(other_counts);
  }
  emit(estimate_result_json("runs_t3", {{"gamma", est.gamma_hat, est.se}}, diag,
                            Provenance{runs.digest, config, std::nullopt}),
       opt, out);
  return 0;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  const std::string bytes = read_file(opt.config);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  SimulationScenario scenario = parse_scenario(doc);
  if (opt.seed) scenario.seed = *opt.seed;
  const RmseReport report = run_rmse_experiment(scenario, opt.threads);
  Provenance prov{digest_of(bytes), scenario_to_json(scenario), scenario.seed};
  if (!opt.csv.empty()) write_file(opt.csv, rmse_report_csv(report));
  emit(rmse_report_json(report, prov), opt, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimators for the dynamic panel probit model with individual effects", "panelprobit"};
  app.require_subcommand(1);
  Options opt;

  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output", opt.output, "Write the JSON result to this file instead of stdout");
  };

  auto* gamma = app.add_subcommand("estimate-gamma", "Ratio estimator of gamma from a two-wave panel");
  gamma->add_option("--input", opt.input, "Panel CSV (id,t,d[,x1..xk])")->required();
  add_output(gamma);

  auto* glm = app.add_subcommand("estimate-glm", "Conditional likelihood fit on two-wave switchers");
  glm->add_option("--input", opt.input, "Panel CSV (id,t,d[,x1..xk])")->required();
  glm->add_flag("--dynamic", opt.dynamic, "Include the state dependence parameter gamma");
  add_output(glm);

  auto* heck = app.add_subcommand("estimate-heckman", "Random-effects probit maximum likelihood");
  heck->add_option("--input", opt.input, "Panel CSV (id,t,d[,x1..xk])");
  heck->add_option("--counts", opt.counts, "T = 3 pattern counts n000,n001,n010,n100,n110,n011,n101,n111");
  heck->add_option("--counts-file", opt.counts_file, "CSV of pattern,count rows");
  heck->add_flag("--estimate-mean", opt.estimate_mean, "Estimate the effect mean instead of fixing it at zero");
  heck->add_option("--nodes", opt.nodes, "Gauss-Hermite nodes")->check(CLI::Range(1, 512));
  add_output(heck);

  auto* runs = app.add_subcommand("analyze-runs", "Conditional runs-pattern estimator for three waves");
  runs->add_option("--counts", opt.counts, "Pattern counts n000,n001,n010,n100,n110,n011,n101,n111");
  runs->add_option("--counts-file", opt.counts_file, "CSV of pattern,count rows");
  runs->add_option("--input", opt.input, "Three-wave panel CSV");
  runs->add_option("--compare", opt.compare, "Second set of counts for an informal z statistic");
  add_output(runs);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo RMSE experiment");
  sim->add_option("--config", opt.config, "Scenario JSON")->required();
  sim->add_option("--seed", opt.seed, "Override the scenario seed");
  sim->add_option("--csv", opt.csv, "Also write the summary rows as CSV");
  sim->add_option("--threads", opt.threads, "Worker threads (0 = all cores); does not change results");
  add_output(sim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gamma) return cmd_estimate_gamma(opt, out);
    if (*glm) return cmd_estimate_glm(opt, out);
    if (*heck) return cmd_estimate_heckman(opt, out);
    if (*runs) return cmd_analyze_runs(opt, out);
    if (*sim) return cmd_simulate(opt, out);
  } catch (const Error& e) {
    if (is_numerical(e.kind())) {
      err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
      try {
        emit(error_json(e), opt, out);
      } catch (const Error&) {
        out << error_json(e).dump(2) << '\n';
      }
      return 2;
    }
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"panelprobit"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace panelprobit
