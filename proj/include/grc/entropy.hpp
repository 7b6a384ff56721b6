#pragma once

#include <span>

namespace grc {

// Shared numeric policy.  All entropies are handled in nats internally and
// converted to bits only at the presentation layer.
inline constexpr double kProbabilitySumTolerance = 1e-9;
inline constexpr double kDeterminismTolerance = 1e-12;

// CODATA value of the Boltzmann constant, J/K.
inline constexpr double kBoltzmann = 1.380649e-23;

// Shannon entropy sum(p * ln(1/p)) in nats, with 0 * ln(1/0) taken as 0.
// Rejects negative entries and vectors whose total differs from 1 by more
// than kProbabilitySumTolerance.
double shannon_entropy_nats(std::span<const double> probs);

// Same sum over entries already known to be strictly positive and
// normalized; skips validation.
double entropy_of_support_nats(std::span<const double> probs) noexcept;

double nats_to_bits(double nats) noexcept;
double bits_to_nats(double bits) noexcept;

// Heat that must be ejected to the environment when delta_s_nc nats of
// entropy leave the non-computational state at the given temperature:
// delta_s_nc * k_B * T joules.  Requires temperature > 0 and
// delta_s_nc >= 0.
double heat_dissipation(double delta_s_nc_nats, double temperature_kelvin);

}  // namespace grc
