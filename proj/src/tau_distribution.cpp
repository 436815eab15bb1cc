#include "panelprobit/tau_distribution.hpp"

#include <cmath>

#include "panelprobit/error.hpp"
#include "panelprobit/normal.hpp"

namespace panelprobit {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::UnsupportedPrior, "invalid individual-effect distribution: " + what);
}

double normal_density(double x, double mean, double variance) {
  const double sd = std::sqrt(variance);
  return std_normal_pdf((x - mean) / sd) / sd;
}

}  // namespace

TauDistribution::TauDistribution(Variant v) : v_(std::move(v)) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformTau>) {
          require(std::isfinite(d.lower) && std::isfinite(d.upper) && d.upper > d.lower,
                  "uniform bounds must be finite with lower < upper");
        } else if constexpr (std::is_same_v<T, NormalTau>) {
          require(std::isfinite(d.mean) && std::isfinite(d.variance) && d.variance > 0.0,
                  "normal variance must be positive and finite");
        } else {
          require(d.weight > 0.0 && d.weight < 1.0, "mixture weight must lie in (0, 1)");
          require(std::isfinite(d.mean1) && std::isfinite(d.mean2) && std::isfinite(d.variance1) &&
                      std::isfinite(d.variance2) && d.variance1 > 0.0 && d.variance2 > 0.0,
                  "mixture component variances must be positive and finite");
        }
      },
      v_);
}

std::string TauDistribution::family() const {
  switch (v_.index()) {
    case 0: return "uniform";
    case 1: return "normal";
    default: return "mixture_normal";
  }
}

double TauDistribution::mean() const noexcept {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformTau>) return 0.5 * (d.lower + d.upper);
        else if constexpr (std::is_same_v<T, NormalTau>) return d.mean;
        else return d.weight * d.mean1 + (1.0 - d.weight) * d.mean2;
      },
      v_);
}

double TauDistribution::variance() const noexcept {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformTau>) {
          const double w = d.upper - d.lower;
          return w * w / 12.0;
        } else if constexpr (std::is_same_v<T, NormalTau>) {
          return d.variance;
        } else {
          const double m = d.weight * d.mean1 + (1.0 - d.weight) * d.mean2;
          const double second = d.weight * (d.variance1 + d.mean1 * d.mean1) +
                                (1.0 - d.weight) * (d.variance2 + d.mean2 * d.mean2);
          return second - m * m;
        }
      },
      v_);
}

double TauDistribution::sd() const noexcept { return std::sqrt(variance()); }

double TauDistribution::density(double x) const noexcept {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformTau>) {
          return (x >= d.lower && x <= d.upper) ? 1.0 / (d.upper - d.lower) : 0.0;
        } else if constexpr (std::is_same_v<T, NormalTau>) {
          return normal_density(x, d.mean, d.variance);
        } else {
          return d.weight * normal_density(x, d.mean1, d.variance1) +
                 (1.0 - d.weight) * normal_density(x, d.mean2, d.variance2);
        }
      },
      v_);
}

TauDistribution TauDistribution::rescaled(double sigma) const {
  require(std::isfinite(sigma) && sigma > 0.0, "scale must be positive and finite");
  const double mu = mean();
  const double c = sigma / sd();
  return std::visit(
      [&](const auto& d) -> TauDistribution {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformTau>) {
          return UniformTau{mu + c * (d.lower - mu), mu + c * (d.upper - mu)};
        } else if constexpr (std::is_same_v<T, NormalTau>) {
          return NormalTau{mu, sigma * sigma};
        } else {
          return MixtureNormalTau{d.weight, mu + c * (d.mean1 - mu), c * c * d.variance1,
                                  mu + c * (d.mean2 - mu), c * c * d.variance2};
        }
      },
      v_);
}

}  // namespace panelprobit
