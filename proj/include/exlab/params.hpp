#pragma once

#include <optional>
#include <stdexcept>

#include "exlab/rate_function.hpp"

namespace exlab {

/// Model parameters. mu is the average wealth per agent, nu the ratio of
/// the bank's initial holdings to the agents' combined wealth; both are
/// positive integers. n_agents is set only in finite-population contexts.
struct ModelParams {
  int mu = 1;
  int nu = 1;
  std::optional<int> n_agents;
  RateFunction rate = RateFunction::star();

  void validate() const {
    if (mu < 1) throw std::invalid_argument("mu must be >= 1");
    if (nu < 1) throw std::invalid_argument("nu must be >= 1");
    if (n_agents && *n_agents < 2) throw std::invalid_argument("n_agents must be >= 2");
  }

  /// Combined agent wealth N*mu.
  long long total_money() const { return static_cast<long long>(n_agents.value()) * mu; }
  /// Initial bank holdings N*mu*nu.
  long long bank_initial() const { return total_money() * nu; }
};

}  // namespace exlab
