#include "areaperc/random.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace areaperc {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below needs n > 0");
  // Rejection on the top of the range keeps the result exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("bad Poisson mean");
  std::uint64_t k = 0;
  double t = 0.0;
  while (true) {
    t -= std::log1p(-uniform());
    if (t > mean) return k;
    ++k;
  }
}

std::uint64_t stream_seed(std::uint64_t master_seed, double beta, double z,
                          std::uint64_t replicate) {
  const auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v); };
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ bits(beta));
  h = mix64(h ^ bits(z));
  h = mix64(h ^ replicate);
  return h;
}

}  // namespace areaperc
