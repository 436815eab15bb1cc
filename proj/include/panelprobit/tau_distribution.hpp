#pragma once

#include <cmath>
#include <random>
#include <string>
#include <variant>

namespace panelprobit {

struct UniformTau {
  double lower = 0.0;
  double upper = 1.0;
};

struct NormalTau {
  double mean = 0.0;
  double variance = 1.0;
};

/// weight * N(mean1, variance1) + (1 - weight) * N(mean2, variance2)
struct MixtureNormalTau {
  double weight = 0.5;
  double mean1 = 0.0;
  double variance1 = 1.0;
  double mean2 = 0.0;
  double variance2 = 1.0;
};

/// Distribution of the individual effects. Every family is of location-scale
/// form f(x) = h((x - mu) / sigma) / sigma with h standardized to mean 0 and
/// variance 1, which is what rescaled() relies on.
class TauDistribution {
 public:
  using Variant = std::variant<UniformTau, NormalTau, MixtureNormalTau>;

  /// Throws Error(UnsupportedPrior) for invalid parameters.
  TauDistribution(Variant v);  // NOLINT(google-explicit-constructor)
  TauDistribution(UniformTau d) : TauDistribution(Variant(d)) {}        // NOLINT
  TauDistribution(NormalTau d) : TauDistribution(Variant(d)) {}         // NOLINT
  TauDistribution(MixtureNormalTau d) : TauDistribution(Variant(d)) {}  // NOLINT

  static TauDistribution normal(double mean, double variance) { return NormalTau{mean, variance}; }
  static TauDistribution uniform(double lower, double upper) { return UniformTau{lower, upper}; }
  static TauDistribution mixture(double weight, double mean1, double variance1, double mean2,
                                 double variance2) {
    return MixtureNormalTau{weight, mean1, variance1, mean2, variance2};
  }

  const Variant& variant() const noexcept { return v_; }
  std::string family() const;

  double mean() const noexcept;
  double variance() const noexcept;
  double sd() const noexcept;
  double density(double x) const noexcept;

  /// Same standardized shape h and location, new scale sigma.
  TauDistribution rescaled(double sigma) const;

  template <class Rng>
  double sample(Rng& rng) const {
    return std::visit([&](const auto& d) { return draw(d, rng); }, v_);
  }

 private:
  template <class Rng>
  static double draw(const UniformTau& d, Rng& rng) {
    return std::uniform_real_distribution<double>(d.lower, d.upper)(rng);
  }
  template <class Rng>
  static double draw(const NormalTau& d, Rng& rng) {
    return d.mean + std::sqrt(d.variance) * std::normal_distribution<double>(0.0, 1.0)(rng);
  }
  template <class Rng>
  static double draw(const MixtureNormalTau& d, Rng& rng) {
    const bool first = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < d.weight;
    const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
    return first ? d.mean1 + std::sqrt(d.variance1) * z : d.mean2 + std::sqrt(d.variance2) * z;
  }

  Variant v_;
};

}  // namespace panelprobit
