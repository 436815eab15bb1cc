#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace panelprobit {

/// Binary outcomes d_it for n individuals over T waves, plus optional
/// k-dimensional covariates x_it. Storage is row-major by individual, then wave.
class PanelData {
 public:
  PanelData() = default;

  /// outcomes: n*T values in {0,1}; covariates: n*T*k values (empty when k == 0).
  /// ids may be empty, in which case individuals are labelled 1..n.
  PanelData(std::size_t horizon, std::vector<std::uint8_t> outcomes, std::size_t covariate_dim = 0,
            std::vector<double> covariates = {}, std::vector<std::string> ids = {});

  std::size_t size() const noexcept { return horizon_ ? outcomes_.size() / horizon_ : 0; }
  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t covariate_dim() const noexcept { return k_; }
  bool has_covariates() const noexcept { return k_ > 0; }

  int outcome(std::size_t i, std::size_t t) const noexcept { return outcomes_[i * horizon_ + t]; }
  std::span<const std::uint8_t> outcomes(std::size_t i) const noexcept {
    return {outcomes_.data() + i * horizon_, horizon_};
  }
  std::span<const double> covariates(std::size_t i, std::size_t t) const noexcept {
    return {covariates_.data() + (i * horizon_ + t) * k_, k_};
  }
  const std::string& id(std::size_t i) const noexcept { return ids_[i]; }

 private:
  std::size_t horizon_ = 0;
  std::size_t k_ = 0;
  std::vector<std::uint8_t> outcomes_;
  std::vector<double> covariates_;
  std::vector<std::string> ids_;
};

}  // namespace panelprobit
