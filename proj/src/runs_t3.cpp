#include "panelprobit/runs_t3.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "panelprobit/error.hpp"
#include "panelprobit/optimize.hpp"
#include "panelprobit/phi_product.hpp"

namespace panelprobit {
namespace {

std::size_t pattern_index(std::string_view pattern) {
  for (std::size_t j = 0; j < RunsCounts::kPatterns.size(); ++j)
    if (RunsCounts::kPatterns[j] == pattern) return j;
  throw std::out_of_range("unknown runs pattern '" + std::string(pattern) + "'");
}

nlohmann::ordered_json counts_json(const RunsCounts& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < 8; ++k) j["n" + std::string(RunsCounts::kPatterns[k])] = c.n[k];
  return j;
}

constexpr double kEndpointSlack = 1e-6;
constexpr int kMaxWidenings = 3;

}  // namespace

std::uint64_t& RunsCounts::operator[](std::string_view pattern) { return n[pattern_index(pattern)]; }
std::uint64_t RunsCounts::operator[](std::string_view pattern) const { return n[pattern_index(pattern)]; }

std::uint64_t RunsCounts::total() const noexcept {
  return std::accumulate(n.begin(), n.end(), std::uint64_t{0});
}

T3Probabilities t3_probabilities(double gamma) {
  const double g = gamma;
  const double a001 = phi_product_integral({{-1, 0.0}, {-1, 0.0}, {+1, 0.0}});
  const double a010 = phi_product_integral({{-1, 0.0}, {+1, 0.0}, {-1, -g}});
  const double a100 = phi_product_integral({{+1, 0.0}, {-1, -g}, {-1, 0.0}});
  const double a110 = phi_product_integral({{+1, 0.0}, {+1, g}, {-1, -g}});
  const double a011 = phi_product_integral({{-1, 0.0}, {+1, 0.0}, {+1, g}});
  const double a101 = phi_product_integral({{+1, 0.0}, {-1, -g}, {+1, 0.0}});
  const double k1 = a001 + a010 + a100;
  const double k2 = a110 + a011 + a101;
  return {a001 / k1, a010 / k1, a100 / k1, a110 / k2, a011 / k2, a101 / k2};
}

double t3_loglik(double gamma, const RunsCounts& counts) {
  const T3Probabilities p = t3_probabilities(gamma);
  const double probs[6] = {p.p001, p.p010, p.p100, p.p110, p.p011, p.p101};
  double ll = 0.0;
  for (int j = 0; j < 6; ++j) {
    const auto c = static_cast<double>(counts.n[j + 1]);
    if (c > 0.0) ll += c * std::log(probs[j]);
  }
  return ll;
}

RunsCounts tabulate_runs(const PanelData& panel) {
  if (panel.horizon() != 3) {
    throw Error(ErrorKind::WrongHorizon,
                "runs patterns need T = 3, got T = " + std::to_string(panel.horizon()),
                {{"horizon", panel.horizon()}});
  }
  RunsCounts counts;
  for (std::size_t i = 0; i < panel.size(); ++i) {
    const auto d = panel.outcomes(i);
    const char pattern[3] = {static_cast<char>('0' + d[0]), static_cast<char>('0' + d[1]),
                             static_cast<char>('0' + d[2])};
    ++counts[std::string_view(pattern, 3)];
  }
  return counts;
}

PanelData expand_runs(const RunsCounts& counts) {
  std::vector<std::uint8_t> outcomes;
  outcomes.reserve(3 * counts.total());
  for (std::size_t k = 0; k < 8; ++k) {
    for (std::uint64_t r = 0; r < counts.n[k]; ++r)
      for (char c : RunsCounts::kPatterns[k]) outcomes.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return PanelData(3, std::move(outcomes));
}

T3Estimate estimate_gamma_t3(const RunsCounts& counts) {
  if (counts.group1_total() == 0 || counts.group2_total() == 0) {
    throw Error(ErrorKind::DegenerateCounts,
                "both the one-switch group (001, 010, 100) and the two-switch group (110, 011, 101) "
                "need at least one observation",
                counts_json(counts));
  }
  const auto negative = [&](double g) { return -t3_loglik(g, counts); };

  T3Estimate est;
  double lower = -6.0, upper = 6.0;
  ScalarMinimum best;
  for (int widen = 0;; ++widen) {
    best = brent_minimize(negative, lower, upper, 1e-8);
    est.iterations += best.iterations;
    const bool at_edge = best.x - lower < kEndpointSlack || upper - best.x < kEndpointSlack;
    if (!at_edge) break;
    if (widen == kMaxWidenings) {
      throw Error(ErrorKind::Diverged, "conditional likelihood keeps increasing towards the bracket edge",
                  {{"gamma_at_edge", best.x}, {"bracket", {lower, upper}}, {"counts", counts_json(counts)}});
    }
    lower *= 2.0;
    upper *= 2.0;
  }
  est.gamma_hat = best.x;
  est.loglik = -best.value;
  est.bracket_lower = lower;
  est.bracket_upper = upper;

  const double h = 1e-4 * (1.0 + std::abs(est.gamma_hat));
  const double f0 = t3_loglik(est.gamma_hat, counts);
  const double fp = t3_loglik(est.gamma_hat + h, counts);
  const double fm = t3_loglik(est.gamma_hat - h, counts);
  est.curvature = (fp - 2.0 * f0 + fm) / (h * h);
  if (est.curvature < 0.0) {
    est.se = 1.0 / std::sqrt(-est.curvature);
  } else {
    est.non_concave = true;
  }
  return est;
}

}  // namespace panelprobit
