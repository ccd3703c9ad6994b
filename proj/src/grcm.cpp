#include "areaperc/grcm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace areaperc {

GrcmParams params_from_area(const AreaParams& a) {
  if (!(a.z >= 0.0) || !(a.beta >= 0.0) || !std::isfinite(a.z) || !std::isfinite(a.beta)) {
    throw std::invalid_argument("z and beta must be finite and non-negative");
  }
  const double rho = a.z + a.beta;
  if (!(rho > 0.0)) throw std::invalid_argument("z + beta must be positive");
  GrcmParams g;
  g.rho = rho;
  g.alpha1 = a.z / rho;
  g.alpha2 = a.beta / rho;
  return g;
}

std::string_view to_string(InitialState s) { return s == InitialState::empty ? "empty" : "dense"; }

InitialState initial_state_from_string(std::string_view s) {
  if (s == "empty") return InitialState::empty;
  if (s == "dense") return InitialState::dense;
  throw std::invalid_argument("unknown initial state '" + std::string(s) + "'");
}

std::uint64_t chain_length(const GrcmParams& params, const Window& window, double multiplier) {
  if (!(multiplier >= 0.0)) throw std::invalid_argument("chain multiplier must be non-negative");
  const double n = std::round(multiplier * params.rho * window.area());
  return n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
}

ChainState::ChainState(Window window, const GrcmParams& params, std::uint64_t seed)
    : params_(params),
      weight_(params.alpha1, params.alpha2),
      log_mass_(std::log(params.rho * window.area())),
      config_(window, kGrcmConnection),
      rng_(seed) {
  if (!(params.rho > 0.0) || !std::isfinite(params.rho)) {
    throw std::invalid_argument("rho must be positive and finite");
  }
  if (!weight_.trivial()) partition_.emplace(config_, kGrcmConnection);
}

void ChainState::add_poisson(double intensity) {
  const double side = config_.window().side();
  const std::uint64_t n = rng_.poisson(intensity * config_.window().area());
  for (std::uint64_t i = 0; i < n; ++i) {
    const Point p{rng_.uniform(0.0, side), rng_.uniform(0.0, side)};
    if (weight_.trivial()) {
      config_.insert(p);
    } else {
      partition_->commit_birth(config_, partition_->plan_birth(config_, p, weight_));
    }
  }
}

const ClusterPartition& ChainState::partition() {
  if (weight_.trivial()) partition_.emplace(config_, kGrcmConnection);
  return *partition_;
}

bool ChainState::step() {
  ++steps_;
  const double side = config_.window().side();
  const auto n = static_cast<double>(config_.size());
  const auto accept = [this](double log_ratio) {
    return log_ratio >= 0.0 || rng_.uniform() < std::exp(log_ratio);
  };

  bool ok = false;
  if (rng_.uniform() < 0.5) {
    const Point p{rng_.uniform(0.0, side), rng_.uniform(0.0, side)};
    if (weight_.trivial()) {
      ok = accept(log_mass_ - std::log(n + 1.0));
      if (ok) config_.insert(p);
    } else {
      const BirthPlan plan = partition_->plan_birth(config_, p, weight_);
      ok = accept(log_mass_ - std::log(n + 1.0) + plan.log_ratio);
      if (ok) partition_->commit_birth(config_, plan);
    }
  } else {
    if (config_.empty()) return false;
    const PointId id = config_.ids()[rng_.below(config_.size())];
    if (weight_.trivial()) {
      ok = accept(std::log(n) - log_mass_);
      if (ok) config_.remove(id);
    } else {
      const DeathPlan plan = partition_->plan_death(config_, id, weight_);
      ok = accept(std::log(n) - log_mass_ + plan.log_ratio);
      if (ok) partition_->commit_death(config_, plan);
    }
  }
  if (ok) ++accepted_;
  return ok;
}

void ChainState::run(std::uint64_t n_steps) {
  for (std::uint64_t i = 0; i < n_steps; ++i) step();
}

PointConfiguration run_chain(const GrcmParams& params, const Window& window,
                             std::uint64_t n_steps, InitialState initial, std::uint64_t seed) {
  ChainState state(window, params, seed);
  if (initial == InitialState::dense) state.add_poisson(params.rho);
  state.run(n_steps);
  return state.config();
}

double removal_probability(std::size_t k, const ClusterWeight& weight) {
  if (weight.alpha2() == 0.0) return 0.0;
  if (weight.alpha1() == 0.0) return 1.0;
  return std::exp(static_cast<double>(k) * std::log(weight.alpha2()) - weight.log_factor(k));
}

PointConfiguration thin_to_area(const PointConfiguration& config,
                                const ClusterPartition& partition, const ClusterWeight& weight,
                                Rng& rng) {
  PointConfiguration out(config.window(), config.cell_size());
  partition.for_each_cluster([&](ClusterId c, std::size_t size) {
    if (rng.bernoulli(removal_probability(size, weight))) return;
    for (PointId id : partition.members(c)) out.insert(config[id]);
  });
  return out;
}

PointConfiguration thin_to_area(const PointConfiguration& config, double alpha1, double alpha2,
                                Rng& rng) {
  return thin_to_area(config, build_partition(config, kGrcmConnection),
                      ClusterWeight(alpha1, alpha2), rng);
}

}  // namespace areaperc
