#pragma once

// Four-stroke quantum Otto cycle on the electronic two-level system:
// cooling (cold thermal bath at gap omega_c), expansion (gap omega_c -> omega_h
// followed by a carrier pulse with transition probability xi), heating (hot
// bath at gap omega_h) and compression (gap omega_h -> omega_c plus the same
// pulse). Energies are reported in units of hbar * omega_c.
//
// Three evaluation modes share the stroke sequence:
//  - ClosedForm: analytic net work, heats and efficiencies;
//  - Effective: the bath strokes integrate the two-level effective master
//    equation until equilibration;
//  - Full: the bath strokes evolve the joint electronic-motional state
//    (layout [2, N, N]) and trace out the motion.

#include "ionotto/reservoir.hpp"

#include <optional>
#include <string_view>

namespace ionotto
{

enum class CycleMode
{
	ClosedForm,
	Effective,
	Full,
};

/// Operating regime from the signs of (W_net, Q_hot, Q_cold).
enum class Regime
{
	HeatEngine,       // W < 0, Q_h > 0, Q_c < 0
	Refrigerator,     // W > 0, Q_h < 0, Q_c > 0
	Accelerator,      // W > 0, Q_h > 0, Q_c < 0
	Heater,           // W > 0, Q_h <= 0, Q_c <= 0
	DoubleAbsorption, // W < 0, Q_h > 0, Q_c >= 0
	ReversedEngine,   // W < 0, Q_h <= 0, Q_c > 0
	Idle,             // W = 0
	Inconsistent,     // sign pattern forbidden by the first law
};

[[nodiscard]] std::string_view to_string(CycleMode mode);
[[nodiscard]] std::string_view to_string(Regime regime);

struct CycleTolerances
{
	/// Relative local error of the Runge-Kutta integrator.
	double integrator = 1e-9;
	/// Trace-norm change per window that counts as equilibrated.
	double equilibration = 1e-8;
	/// Window length and total budget per bath stroke, in units of 1/gamma.
	double window_gammas = 5.0;
	double budget_gammas = 40.0;
	/// Full mode: largest allowed shift of the electronic steady populations
	/// when the Fock truncation grows by two.
	double truncation = 1e-4;
	bool check_truncation = true;
	/// Full mode: lambda * sqrt(max <a^dag a>) must stay below this.
	double lamb_dicke = 0.1;
};

/// Engine parameters. Frequencies in rad/us. Only omega_h / omega_c and the
/// bath occupations enter the thermodynamics; omega_m is recorded for the
/// regime report.
struct CycleConfig
{
	double omega_e_cold = 0.0;
	double omega_e_hot = 0.0;
	double omega_m = 0.0;
	double lambda = 0.0;
	double kappa = 0.0;
	double drive_rabi = 0.0;
	ReservoirSpec cold;
	ReservoirSpec hot;
	std::size_t fock_dim = 6;
	CycleTolerances tolerances;

	/// Throws PreconditionError naming the violated invariant.
	void validate() const;
};

struct StrokeEnergy
{
	double w_exp = 0.0;
	double w_comp = 0.0;
	double q_hot = 0.0;
	double q_cold = 0.0;

	[[nodiscard]] double w_net() const { return w_exp + w_comp; }
	[[nodiscard]] double first_law_residual() const { return w_exp + w_comp + q_hot + q_cold; }
};

/// Validity diagnostics of a run; only Full mode fills the motional entries.
struct ValidityReport
{
	double adiabatic_ratio = std::numeric_limits<double>::infinity();
	bool adiabatic_warning = false;
	double max_motional_occupation = 0.0;
	double lamb_dicke_measure = 0.0;
	bool lamb_dicke_violation = false;
	double truncation_shift = 0.0;
	bool truncation_checked = false;
	bool truncation_unconverged = false;
	double max_trace_drift = 0.0;
	double min_eigenvalue = 0.0;
	/// Trace-norm distance between the post-cooling state and the cold Gibbs state.
	double closure_error = 0.0;
};

struct CycleResult
{
	StrokeEnergy energies;
	/// Set only for HeatEngine and DoubleAbsorption.
	std::optional<double> efficiency;
	Regime regime = Regime::Idle;
	double xi = 0.0;
	CycleMode mode = CycleMode::ClosedForm;
	ValidityReport validity;
};

/// sin^2(Omega tau' / 2) for a resonant carrier pulse.
[[nodiscard]] double transition_probability(double drive_rabi, double tau_prime);
/// Pulse length giving transition probability xi within the first Rabi half-period.
[[nodiscard]] double pulse_duration(double drive_rabi, double xi);

/// Time-ordered product of fourth-order Magnus steps for the lab-frame
/// Hamiltonian (omega_e/2) sigma_z + (Omega/2)(sigma_ge e^{i omega_e t} + h.c.).
/// `omega_e` only sets the lab-frame oscillation; the transition probability
/// does not depend on it.
[[nodiscard]] ComplexMatrix carrier_propagator_numeric(double omega_e, double drive_rabi, double tau_prime,
	std::size_t steps);

/// Rotating-frame carrier unitary with |<e|U|g>|^2 = xi.
[[nodiscard]] ComplexMatrix carrier_unitary(double xi);

/// exp(-i int H_e dt) for a linear gap ramp omega_start -> omega_end over tau.
[[nodiscard]] ComplexMatrix gap_ramp_propagator(double omega_start, double omega_end, double tau);

/// Population map p_e -> (1 - xi) p_e + xi p_g; coherences untouched.
[[nodiscard]] ComplexMatrix apply_transition(const ComplexMatrix& rho, double xi);

/// theta of a bath, with theta -> +infinity for a zero-occupation thermal bath
/// and the sign forced negative for negative-temperature baths.
[[nodiscard]] double bath_theta(const ReservoirSpec& spec);

[[nodiscard]] StrokeEnergy closed_form_thermo(const CycleConfig& config, double xi);

[[nodiscard]] Regime classify_regime(double w_net, double q_hot, double q_cold, double eps = 1e-12);

/// Heat-engine efficiencies written in terms of tanh(theta). `ratio` is omega_c / omega_h.
[[nodiscard]] double efficiency_squeezed(double ratio, double theta_c, double theta_h, double zeta, double xi);
[[nodiscard]] double efficiency_thermal(double ratio, double theta_c, double theta_h, double xi);
[[nodiscard]] double efficiency_negative(double ratio, double theta_c, double theta_h, double xi);

/// Closed-form cycle: regime classification plus the efficiency formula that
/// matches the hot-bath kind.
[[nodiscard]] CycleResult closed_form_efficiency(const CycleConfig& config, double xi);

struct ReferenceEfficiencies
{
	double otto = 0.0;
	/// Omitted for a negative-temperature hot bath.
	std::optional<double> carnot;
};

[[nodiscard]] ReferenceEfficiencies reference_efficiencies(const CycleConfig& config);

[[nodiscard]] CycleResult run_cycle_effective(const CycleConfig& config, double xi);
[[nodiscard]] CycleResult run_cycle_full(const CycleConfig& config, double xi);

/// Full-mode cycle runner that factorizes the joint bath models once and
/// reuses them across transition probabilities. The Fock truncation check
/// also runs once, at construction.
class FullCycleRunner
{
public:
	explicit FullCycleRunner(const CycleConfig& config);

	[[nodiscard]] CycleResult run(double xi) const;
	[[nodiscard]] const ValidityReport& validity() const { return validity_; }

private:
	CycleConfig config_;
	Equilibrator hot_;
	Equilibrator cold_;
	ValidityReport validity_;
};

} // namespace ionotto
