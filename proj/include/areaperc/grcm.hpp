#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "areaperc/clusters.hpp"
#include "areaperc/geometry.hpp"
#include "areaperc/random.hpp"

namespace areaperc {

/// Activity z and inverse temperature beta of the area-interaction model.
struct AreaParams {
  double z = 0.0;
  double beta = 0.0;
};

/// Activity rho and cluster weights (alpha1, alpha2) of the generalized
/// continuum random cluster model.
struct GrcmParams {
  double rho = 0.0;
  double alpha1 = 1.0;
  double alpha2 = 0.0;
};

/// rho = z + beta, alpha1 = z / rho, alpha2 = beta / rho. Throws
/// std::invalid_argument when z or beta is negative or z + beta == 0.
GrcmParams params_from_area(const AreaParams& a);

/// Connection distance of the gRCM clusters (balls of radius 1/2).
inline constexpr double kGrcmConnection = 1.0;

enum class InitialState { empty, dense };

std::string_view to_string(InitialState s);
InitialState initial_state_from_string(std::string_view s);

/// Number of proposals for a run: multiplier * rho * |window|, at least 1.
std::uint64_t chain_length(const GrcmParams& params, const Window& window, double multiplier);

/// Birth-death Metropolis-Hastings chain for the gRCM on a window, with free
/// boundary.
///
/// A proposal is a birth at a uniform location with probability 1/2 and
/// otherwise the death of a uniformly chosen point. Acceptance:
///   birth: min(1, rho|W| / (n+1) * w(x+p)/w(x))
///   death: min(1, n / (rho|W|) * w(x-p)/w(x))
/// where w is the product of cluster weights. When one alpha is zero every
/// weight is 1, and the partition is only built when asked for.
class ChainState {
 public:
  ChainState(Window window, const GrcmParams& params, std::uint64_t seed);

  /// Adds a Poisson(intensity) configuration on top of the current one.
  void add_poisson(double intensity);

  /// One proposal; returns whether it was accepted.
  bool step();
  void run(std::uint64_t n_steps);

  const PointConfiguration& config() const { return config_; }
  const ClusterPartition& partition();
  const GrcmParams& params() const { return params_; }
  const ClusterWeight& weight() const { return weight_; }
  Rng& rng() { return rng_; }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t accepted() const { return accepted_; }

 private:
  GrcmParams params_;
  ClusterWeight weight_;
  double log_mass_;  // log(rho |W|)
  PointConfiguration config_;
  std::optional<ClusterPartition> partition_;
  Rng rng_;
  std::uint64_t steps_ = 0;
  std::uint64_t accepted_ = 0;
};

PointConfiguration run_chain(const GrcmParams& params, const Window& window,
                             std::uint64_t n_steps, InitialState initial, std::uint64_t seed);

/// Probability that a gRCM cluster of k points is deleted by the thinning:
/// alpha2^k / (alpha1^k + alpha2^k).
double removal_probability(std::size_t k, const ClusterWeight& weight);

/// Deletes every cluster of `partition` independently with
/// removal_probability; the survivors form an area-interaction sample with
/// z = alpha1 * rho and beta = alpha2 * rho.
PointConfiguration thin_to_area(const PointConfiguration& config,
                                const ClusterPartition& partition, const ClusterWeight& weight,
                                Rng& rng);

/// Same, building the clusters at distance 1 first.
PointConfiguration thin_to_area(const PointConfiguration& config, double alpha1, double alpha2,
                                Rng& rng);

}  // namespace areaperc
