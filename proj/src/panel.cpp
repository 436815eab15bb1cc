#include "panelprobit/panel.hpp"

#include <stdexcept>

namespace panelprobit {

PanelData::PanelData(std::size_t horizon, std::vector<std::uint8_t> outcomes, std::size_t covariate_dim,
                     std::vector<double> covariates, std::vector<std::string> ids)
    : horizon_(horizon), k_(covariate_dim), outcomes_(std::move(outcomes)),
      covariates_(std::move(covariates)), ids_(std::move(ids)) {
  if (horizon_ == 0) throw std::invalid_argument("panel horizon must be positive");
  if (outcomes_.size() % horizon_ != 0) throw std::invalid_argument("outcome count is not a multiple of the horizon");
  for (auto d : outcomes_)
    if (d > 1) throw std::invalid_argument("panel outcomes must be 0 or 1");
  const std::size_t n = outcomes_.size() / horizon_;
  if (covariates_.size() != n * horizon_ * k_) throw std::invalid_argument("covariate tensor has the wrong size");
  if (ids_.empty()) {
    ids_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids_.push_back(std::to_string(i + 1));
  } else if (ids_.size() != n) {
    throw std::invalid_argument("one id per individual is required");
  }
}

}  // namespace panelprobit
