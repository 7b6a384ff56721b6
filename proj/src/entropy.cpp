#include "grc/entropy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "grc/errors.hpp"

namespace grc {

double shannon_entropy_nats(std::span<const double> probs) {
  double sum = 0.0;
  double h = 0.0;
  for (double p : probs) {
    if (p < 0.0) {
      throw InvariantError("probability entry is negative: " +
                           std::to_string(p));
    }
    sum += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    throw InvariantError("probabilities sum to " + std::to_string(sum) +
                         ", expected 1");
  }
  return h;
}

double entropy_of_support_nats(std::span<const double> probs) noexcept {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double nats_to_bits(double nats) noexcept { return nats / std::numbers::ln2; }

double bits_to_nats(double bits) noexcept { return bits * std::numbers::ln2; }

double heat_dissipation(double delta_s_nc_nats, double temperature_kelvin) {
  if (!(temperature_kelvin > 0.0)) {
    throw DomainError("temperature must be positive, got " +
                      std::to_string(temperature_kelvin));
  }
  if (delta_s_nc_nats < 0.0) {
    throw DomainError("ejected entropy must be non-negative, got " +
                      std::to_string(delta_s_nc_nats));
  }
  return delta_s_nc_nats * kBoltzmann * temperature_kelvin;
}

}  // namespace grc
