#pragma once

// One motional mode as the working substance, with effective baths engineered
// through a V-type electronic system |g>, |e>, |f> whose excited levels decay
// quickly. Index 0 = |g>, 1 = |e>, 2 = |f>.

#include "ionotto/reservoir.hpp"

namespace ionotto
{

/// Rabi frequencies (rad/us) of the two lasers on each electronic transition.
struct ModeRabi
{
	double ge1 = 0.0;
	double ge2 = 0.0;
	double gf1 = 0.0;
	double gf2 = 0.0;

	[[nodiscard]] double max() const;
};

struct VSystemConfig
{
	double omega_ge = 0.0;
	double omega_gf = 0.0;
	double omega_m = 0.0;
	double lambda = 0.0;
	double gamma_ge = 0.0;
	double gamma_gf = 0.0;
	ModeRabi rabi;
	std::size_t fock_dim = 20;

	void validate() const;
	/// min over transitions of gamma_alpha / (lambda * max_l Omega_alpha,l).
	[[nodiscard]] double regime_ratio() const;
	[[nodiscard]] bool regime_warning() const { return regime_ratio() < kAdiabaticRatioThreshold; }
};

/// Laser settings producing the target mode bath; spec.gamma is the target
/// effective mode decay rate. Thermal and squeezed thermal baths only.
[[nodiscard]] ModeRabi match_rabi_for_mode(const ReservoirSpec& spec, double lambda, double gamma_ge,
	double gamma_gf);

/// Mode-only model, H = 0, channels of rate 4/gamma_alpha on
/// (lambda/2)(Omega_alpha,1 a + Omega_alpha,2 a^dag).
[[nodiscard]] LindbladModel effective_mode_model(const VSystemConfig& config);

/// Electronic V system plus mode on layout [3, fock_dim]; the excited levels
/// decay to |g>, motional decay is left out.
[[nodiscard]] LindbladModel full_v_model(const VSystemConfig& config);

struct ModeMoments
{
	double number = 0.0;
	Complex a_squared{0.0, 0.0};
};

/// <a^dag a> and <a^2> of a mode state, or of the mode factor of a [3, N] state.
[[nodiscard]] ModeMoments mode_moments(const ComplexMatrix& rho, std::size_t fock_dim);

} // namespace ionotto
