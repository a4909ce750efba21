#pragma once

// Reservoir engineering for the electronic two-level system of a trapped ion.
//
// A target bath (thermal, apparent negative temperature or squeezed thermal)
// is turned into four sideband Rabi frequencies. Two routes to the electronic
// dynamics are built from it: the effective collapse channels of the target
// bath, and the joint electronic-motional model whose motional modes decay at
// rate kappa. All operators live in the interaction picture, so every
// Hamiltonian here is time independent.

#include "ionotto/lindblad.hpp"

#include <array>
#include <limits>
#include <string_view>

namespace ionotto
{

enum class BathKind
{
	Thermal,
	NegativeTemperature,
	SqueezedThermal,
};

enum class Statistics
{
	BoseEinstein,
	FermiDirac,
};

[[nodiscard]] std::string_view to_string(BathKind kind);
[[nodiscard]] std::string_view to_string(Statistics statistics);

/// Target effective bath. `gamma` is the effective electronic decay rate in
/// rad/us, `n_R` the occupation, `r` the squeezing parameter.
struct ReservoirSpec
{
	BathKind kind = BathKind::Thermal;
	double gamma = 0.0;
	double n_R = 0.0;
	Statistics statistics = Statistics::BoseEinstein;
	double r = 0.0;

	[[nodiscard]] static ReservoirSpec thermal(double gamma, double n_R);
	[[nodiscard]] static ReservoirSpec negative_temperature(double gamma, double n_R);
	[[nodiscard]] static ReservoirSpec squeezed_thermal(double gamma, double n_R, double r);

	/// Throws PreconditionError naming the violated invariant.
	void validate() const;

	[[nodiscard]] double mu() const;
	[[nodiscard]] double nu() const;
	/// 1 / (mu^2 + nu^2); 1 for unsqueezed baths.
	[[nodiscard]] double zeta() const;
};

/// theta = beta_R * hbar * omega_e / 2 of a bath.
struct EffectiveTheta
{
	double theta = 0.0;
	/// Set when a Fermi-Dirac occupation of exactly 1/2 gives theta = 0.
	bool infinite_temperature = false;

	[[nodiscard]] bool negative() const { return theta < 0.0; }
};

[[nodiscard]] EffectiveTheta theta_from_occupation(double n_R, Statistics statistics);

struct AdiabaticRegime
{
	/// kappa / (lambda * max Omega); infinite when every laser is off.
	double ratio = std::numeric_limits<double>::infinity();
	bool warning = false;
};

inline constexpr double kAdiabaticRatioThreshold = 50.0;

/// Sideband Rabi frequencies (rad/us). Laser l = 1 sits at omega_e - omega_m
/// (red sideband), l = 2 at omega_e + omega_m (blue sideband); the phase is
/// fixed to -pi/2. Those choices are already built into the interaction
/// Hamiltonian and are kept here as a record only.
struct LaserSettings
{
	double rabi_x1 = 0.0;
	double rabi_x2 = 0.0;
	double rabi_y1 = 0.0;
	double rabi_y2 = 0.0;
	std::array<double, 2> sideband_offsets_in_omega_m{-1.0, 1.0};
	double phase = -1.5707963267948966;
	AdiabaticRegime regime;

	[[nodiscard]] double max_rabi() const;
};

[[nodiscard]] LaserSettings match_rabi_frequencies(const ReservoirSpec& spec, double lambda, double kappa);

/// Channels of the target bath in the electronic rotating frame, in the
/// (rate, L) convention of Channel. Zero-rate channels are omitted.
[[nodiscard]] std::vector<Channel> effective_collapse_channels(const ReservoirSpec& spec);

/// Channels produced by adiabatic elimination of the motion:
/// (2/kappa) D[s_alpha] for alpha = x, y, i.e. rate 4/kappa on
/// s_alpha = (lambda/2)(Omega_{alpha,1} sigma_ge + Omega_{alpha,2} sigma_ge^dag).
[[nodiscard]] std::vector<Channel> engineered_channels(const LaserSettings& settings, double lambda, double kappa);

/// Two-level rotating-frame model with H = 0 and the target-bath channels.
[[nodiscard]] LindbladModel effective_bath_model(const ReservoirSpec& spec);

/// sum_alpha (s_alpha a_alpha^dag + s_alpha^dag a_alpha) on layout [2, n_max, n_max].
[[nodiscard]] ComplexMatrix full_interaction_hamiltonian(const LaserSettings& settings, double lambda,
	std::size_t n_max);

/// Joint electronic-motional model: full interaction Hamiltonian plus motional
/// decay (kappa, a_x) and (kappa, a_y).
[[nodiscard]] LindbladModel joint_bath_model(const LaserSettings& settings, double lambda, double kappa,
	std::size_t n_max);

/// diag(p_g, p_e) with p_e = e^{-theta} / (2 cosh theta).
[[nodiscard]] ComplexMatrix gibbs_state(const EffectiveTheta& theta);

/// Gibbs populations mixed by the squeezing map; <sigma_z> contracts by zeta.
[[nodiscard]] ComplexMatrix squeezed_gibbs_state(const EffectiveTheta& theta, double r);

/// Closed-form steady state of the target bath.
[[nodiscard]] ComplexMatrix analytic_steady_state(const ReservoirSpec& spec);

} // namespace ionotto
