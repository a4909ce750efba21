#include "ionotto/otto_cycle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ionotto
{

std::string_view to_string(CycleMode mode)
{
	switch(mode)
	{
	case CycleMode::ClosedForm: return "closed_form";
	case CycleMode::Effective: return "effective";
	case CycleMode::Full: return "full";
	}
	return "unknown";
}

std::string_view to_string(Regime regime)
{
	switch(regime)
	{
	case Regime::HeatEngine: return "heat_engine";
	case Regime::Refrigerator: return "refrigerator";
	case Regime::Accelerator: return "accelerator";
	case Regime::Heater: return "heater";
	case Regime::DoubleAbsorption: return "double_absorption";
	case Regime::ReversedEngine: return "reversed_engine";
	case Regime::Idle: return "idle";
	case Regime::Inconsistent: return "inconsistent";
	}
	return "unknown";
}

void CycleConfig::validate() const
{
	auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
	if(!positive(omega_e_cold) || !positive(omega_e_hot))
	{
		throw PreconditionError("CycleConfig.gap_positive: electronic frequencies must be positive");
	}
	if(!(omega_e_hot > omega_e_cold))
	{
		throw PreconditionError("CycleConfig.expansion_raises_gap: omega_e_hot must exceed omega_e_cold");
	}
	if(!(omega_m >= 0.0) || !std::isfinite(omega_m))
	{
		throw PreconditionError("CycleConfig.omega_m_nonnegative: omega_m must be finite and >= 0");
	}
	if(!positive(lambda)) { throw PreconditionError("CycleConfig.lambda_positive: lambda must be > 0"); }
	if(!positive(kappa)) { throw PreconditionError("CycleConfig.kappa_positive: kappa must be > 0"); }
	if(!positive(drive_rabi)) { throw PreconditionError("CycleConfig.drive_positive: drive Rabi frequency must be > 0"); }
	if(cold.kind != BathKind::Thermal)
	{
		throw PreconditionError("CycleConfig.cold_is_thermal: the cold bath must be thermal");
	}
	cold.validate();
	hot.validate();
	if(fock_dim < 2) { throw PreconditionError("CycleConfig.fock_dim: Fock truncation must be at least 2"); }
	if(!(tolerances.integrator > 0.0 && tolerances.integrator <= 1e-4))
	{
		throw PreconditionError("CycleConfig.integrator_tolerance: must lie in (0, 1e-4]");
	}
	if(!(tolerances.equilibration > 0.0) || !(tolerances.window_gammas > 0.0) ||
		!(tolerances.budget_gammas >= tolerances.window_gammas))
	{
		throw PreconditionError("CycleConfig.equilibration_budget: window and budget must be positive, budget >= window");
	}
}

double transition_probability(double drive_rabi, double tau_prime)
{
	const double s = std::sin(0.5 * drive_rabi * tau_prime);
	return s * s;
}

double pulse_duration(double drive_rabi, double xi)
{
	if(!(drive_rabi > 0.0)) { throw PreconditionError("pulse_duration: drive Rabi frequency must be > 0"); }
	if(!(xi >= 0.0 && xi <= 1.0)) { throw PreconditionError("pulse_duration: xi must lie in [0, 1]"); }
	return 2.0 * std::asin(std::sqrt(xi)) / drive_rabi;
}

ComplexMatrix carrier_propagator_numeric(double omega_e, double drive_rabi, double tau_prime, std::size_t steps)
{
	if(steps < 100) { throw PreconditionError("carrier_propagator_numeric: at least 100 steps required"); }
	if(!(tau_prime >= 0.0)) { throw PreconditionError("carrier_propagator_numeric: tau_prime must be >= 0"); }

	const ComplexMatrix sz = qubit::sigma_z();
	const ComplexMatrix sm = qubit::lowering();
	const ComplexMatrix sp = qubit::raising();
	auto hamiltonian = [&](double t) -> ComplexMatrix {
		const Complex phase = std::exp(kI * (omega_e * t));
		return 0.5 * omega_e * sz + 0.5 * drive_rabi * (phase * sm + std::conj(phase) * sp);
	};

	// Two-point Gauss-Legendre Magnus step of order four.
	const double h = tau_prime / static_cast<double>(steps);
	const double offset = std::sqrt(3.0) / 6.0;
	ComplexMatrix u = identity(2);
	if(h == 0.0) { return u; }
	for(std::size_t k = 0; k < steps; ++k)
	{
		const double t0 = static_cast<double>(k) * h;
		const ComplexMatrix h1 = hamiltonian(t0 + (0.5 - offset) * h);
		const ComplexMatrix h2 = hamiltonian(t0 + (0.5 + offset) * h);
		const ComplexMatrix comm = h2 * h1 - h1 * h2;
		ComplexMatrix h_eff = 0.5 * (h1 + h2) - kI * (std::sqrt(3.0) / 12.0 * h) * comm;
		h_eff = 0.5 * (h_eff + h_eff.adjoint());
		u = hermitian_propagator(h_eff, h) * u;
	}
	return u;
}

ComplexMatrix carrier_unitary(double xi)
{
	if(!(xi >= 0.0 && xi <= 1.0)) { throw PreconditionError("carrier_unitary: xi must lie in [0, 1]"); }
	const double s = std::sqrt(xi);
	const double c = std::sqrt(1.0 - xi);
	ComplexMatrix u(2, 2);
	u << c, -kI * s, -kI * s, c;
	return u;
}

ComplexMatrix gap_ramp_propagator(double omega_start, double omega_end, double tau)
{
	const double accumulated_phase = 0.5 * (omega_start + omega_end) * tau;
	return hermitian_propagator(0.5 * qubit::sigma_z(), accumulated_phase);
}

ComplexMatrix apply_transition(const ComplexMatrix& rho, double xi)
{
	if(rho.rows() != 2 || rho.cols() != 2) { throw PreconditionError("apply_transition: two-level state required"); }
	if(!(xi >= 0.0 && xi <= 1.0)) { throw PreconditionError("apply_transition: xi must lie in [0, 1]"); }
	ComplexMatrix out = rho;
	const Complex p_g = rho(0, 0);
	const Complex p_e = rho(1, 1);
	out(1, 1) = (1.0 - xi) * p_e + xi * p_g;
	out(0, 0) = (1.0 - xi) * p_g + xi * p_e;
	return out;
}

double bath_theta(const ReservoirSpec& spec)
{
	if(spec.kind != BathKind::NegativeTemperature && spec.n_R == 0.0)
	{
		return std::numeric_limits<double>::infinity();
	}
	const double theta = theta_from_occupation(spec.n_R, spec.statistics).theta;
	return spec.kind == BathKind::NegativeTemperature ? -std::abs(theta) : theta;
}

StrokeEnergy closed_form_thermo(const CycleConfig& config, double xi)
{
	if(!(xi >= 0.0 && xi <= 1.0)) { throw PreconditionError("closed_form_thermo: xi must lie in [0, 1]"); }
	const double gap = config.omega_e_hot / config.omega_e_cold;
	const double tc = std::tanh(bath_theta(config.cold));
	const double th = std::tanh(bath_theta(config.hot));
	const double zeta = config.hot.zeta();
	const double keep = 1.0 - 2.0 * xi;

	StrokeEnergy e;
	e.w_exp = 0.5 * tc - 0.5 * gap * keep * tc;
	e.w_comp = 0.5 * gap * zeta * th - 0.5 * keep * zeta * th;
	e.q_hot = 0.5 * gap * (tc - zeta * th - 2.0 * xi * tc);
	e.q_cold = -0.5 * (tc - zeta * th + 2.0 * xi * zeta * th);
	return e;
}

Regime classify_regime(double w_net, double q_hot, double q_cold, double eps)
{
	auto sign = [eps](double v) { return v > eps ? 1 : (v < -eps ? -1 : 0); };
	const int w = sign(w_net);
	const int h = sign(q_hot);
	const int c = sign(q_cold);

	if(w == 0) { return Regime::Idle; }
	if(w < 0)
	{
		if(h > 0 && c < 0) { return Regime::HeatEngine; }
		if(h > 0) { return Regime::DoubleAbsorption; }
		if(c > 0) { return Regime::ReversedEngine; }
		return Regime::Inconsistent;
	}
	if(h < 0 && c > 0) { return Regime::Refrigerator; }
	if(h > 0 && c < 0) { return Regime::Accelerator; }
	if(h <= 0 && c <= 0) { return Regime::Heater; }
	return Regime::Inconsistent;
}

double efficiency_squeezed(double ratio, double theta_c, double theta_h, double zeta, double xi)
{
	const double tc = std::tanh(theta_c);
	const double th = std::tanh(theta_h);
	const double keep = 1.0 - 2.0 * xi;
	return 1.0 - ratio * (tc - keep * zeta * th) / (keep * tc - zeta * th);
}

double efficiency_thermal(double ratio, double theta_c, double theta_h, double xi)
{
	return efficiency_squeezed(ratio, theta_c, theta_h, 1.0, xi);
}

double efficiency_negative(double ratio, double theta_c, double theta_h, double xi)
{
	const double tc = std::tanh(theta_c);
	const double th = std::tanh(std::abs(theta_h));
	const double keep = 1.0 - 2.0 * xi;
	return 1.0 - ratio * (tc + keep * th) / (keep * tc + th);
}

namespace
{

void assign_efficiency(CycleResult& result)
{
	const auto& e = result.energies;
	if(result.regime == Regime::HeatEngine) { result.efficiency = -e.w_net() / e.q_hot; }
	else if(result.regime == Regime::DoubleAbsorption) { result.efficiency = 1.0; }
}

/// Energy of a two-level state for gap `gap` (in units of omega_c).
double gap_energy(double gap, const ComplexMatrix& rho)
{
	return 0.5 * gap * expectation(qubit::sigma_z(), rho);
}

EquilibrationOptions stroke_options(const CycleConfig& config, const ReservoirSpec& bath, EquilibrationMethod method)
{
	EquilibrationOptions opt;
	opt.window = config.tolerances.window_gammas / bath.gamma;
	opt.max_windows = static_cast<std::size_t>(
		std::ceil(config.tolerances.budget_gammas / config.tolerances.window_gammas - 1e-12));
	opt.threshold = config.tolerances.equilibration;
	opt.tol = config.tolerances.integrator;
	opt.method = method;
	return opt;
}

constexpr double kSimulatedSignEps = 1e-10;

/// Drives the stroke sequence with a caller-supplied bath-stroke routine.
template<class BathStroke>
CycleResult run_strokes(const CycleConfig& config, double xi, CycleMode mode, BathStroke&& bath_stroke)
{
	if(!(xi >= 0.0 && xi <= 1.0)) { throw PreconditionError("run_cycle: xi must lie in [0, 1]"); }
	const double gap_h = config.omega_e_hot / config.omega_e_cold;
	const double gap_c = 1.0;

	CycleResult result;
	result.xi = xi;
	result.mode = mode;
	result.validity.min_eigenvalue = std::numeric_limits<double>::infinity();

	const ComplexMatrix start = analytic_steady_state(config.cold);

	// Expansion: relabel gap, then the carrier pulse.
	const double e0 = gap_energy(gap_c, start);
	const ComplexMatrix expanded = apply_transition(start, xi);
	const double e1 = gap_energy(gap_h, expanded);
	result.energies.w_exp = e1 - e0;

	// Heating.
	const ComplexMatrix heated = bath_stroke(true, expanded, result.validity);
	const double e2 = gap_energy(gap_h, heated);
	result.energies.q_hot = e2 - e1;

	// Compression.
	const ComplexMatrix compressed = apply_transition(heated, xi);
	const double e3 = gap_energy(gap_c, compressed);
	result.energies.w_comp = e3 - e2;

	// Cooling.
	const ComplexMatrix cooled = bath_stroke(false, compressed, result.validity);
	const double e4 = gap_energy(gap_c, cooled);
	result.energies.q_cold = e4 - e3;

	result.validity.closure_error = trace_norm(cooled - start);
	const auto& e = result.energies;
	result.regime = classify_regime(e.w_net(), e.q_hot, e.q_cold, kSimulatedSignEps);
	assign_efficiency(result);
	return result;
}

void absorb(ValidityReport& v, const EquilibrationReport& r)
{
	v.max_trace_drift = std::max(v.max_trace_drift, r.max_trace_drift);
	v.min_eigenvalue = std::min(v.min_eigenvalue, r.min_eigenvalue);
}

} // namespace

CycleResult closed_form_efficiency(const CycleConfig& config, double xi)
{
	config.validate();
	CycleResult result;
	result.xi = xi;
	result.mode = CycleMode::ClosedForm;
	result.energies = closed_form_thermo(config, xi);
	const auto& e = result.energies;
	result.regime = classify_regime(e.w_net(), e.q_hot, e.q_cold);

	if(result.regime == Regime::HeatEngine)
	{
		const double ratio = config.omega_e_cold / config.omega_e_hot;
		const double theta_c = bath_theta(config.cold);
		const double theta_h = bath_theta(config.hot);
		switch(config.hot.kind)
		{
		case BathKind::Thermal: result.efficiency = efficiency_thermal(ratio, theta_c, theta_h, xi); break;
		case BathKind::NegativeTemperature:
			result.efficiency = efficiency_negative(ratio, theta_c, theta_h, xi);
			break;
		case BathKind::SqueezedThermal:
			result.efficiency = efficiency_squeezed(ratio, theta_c, theta_h, config.hot.zeta(), xi);
			break;
		}
	}
	else if(result.regime == Regime::DoubleAbsorption) { result.efficiency = 1.0; }
	return result;
}

ReferenceEfficiencies reference_efficiencies(const CycleConfig& config)
{
	ReferenceEfficiencies ref;
	ref.otto = 1.0 - config.omega_e_cold / config.omega_e_hot;
	if(config.hot.kind != BathKind::NegativeTemperature)
	{
		// beta = 2 theta / (hbar omega)
		const double beta_c = 2.0 * bath_theta(config.cold) / config.omega_e_cold;
		const double beta_h = 2.0 * bath_theta(config.hot) / config.omega_e_hot;
		ref.carnot = 1.0 - beta_h / beta_c;
	}
	return ref;
}

CycleResult run_cycle_effective(const CycleConfig& config, double xi)
{
	config.validate();
	const Equilibrator hot(effective_bath_model(config.hot),
		stroke_options(config, config.hot, EquilibrationMethod::Integrate));
	const Equilibrator cold(effective_bath_model(config.cold),
		stroke_options(config, config.cold, EquilibrationMethod::Integrate));

	return run_strokes(config, xi, CycleMode::Effective,
		[&](bool heating, const ComplexMatrix& rho, ValidityReport& v) {
			const auto report = (heating ? hot : cold).run(rho);
			absorb(v, report);
			return report.state;
		});
}

namespace
{

LindbladModel joint_model_for(const CycleConfig& config, const ReservoirSpec& bath, std::size_t fock_dim)
{
	return joint_bath_model(match_rabi_frequencies(bath, config.lambda, config.kappa), config.lambda, config.kappa,
		fock_dim);
}

ComplexMatrix motional_ground(std::size_t fock_dim)
{
	return kron(projector(fock_dim, 0), projector(fock_dim, 0));
}

ComplexMatrix joint_bath_steady_electronic(const CycleConfig& config, const ReservoirSpec& bath,
	std::size_t fock_dim, const Equilibrator* prepared)
{
	const ComplexMatrix rho0 = kron(qubit::ground_projector(), motional_ground(fock_dim));
	const SpaceLayout layout{2, fock_dim, fock_dim};
	if(prepared) { return partial_trace(prepared->run(rho0).state, layout, {0}); }
	const Equilibrator eq(joint_model_for(config, bath, fock_dim),
		stroke_options(config, bath, EquilibrationMethod::Implicit));
	return partial_trace(eq.run(rho0).state, layout, {0});
}

} // namespace

FullCycleRunner::FullCycleRunner(const CycleConfig& config)
	: config_{(config.validate(), config)},
	  hot_{joint_model_for(config, config.hot, config.fock_dim),
		  stroke_options(config, config.hot, EquilibrationMethod::Implicit)},
	  cold_{joint_model_for(config, config.cold, config.fock_dim),
		  stroke_options(config, config.cold, EquilibrationMethod::Implicit)}
{
	const auto hot_settings = match_rabi_frequencies(config.hot, config.lambda, config.kappa);
	const auto cold_settings = match_rabi_frequencies(config.cold, config.lambda, config.kappa);
	validity_.adiabatic_ratio = std::min(hot_settings.regime.ratio, cold_settings.regime.ratio);
	validity_.adiabatic_warning = hot_settings.regime.warning || cold_settings.regime.warning;

	if(config.tolerances.check_truncation)
	{
		validity_.truncation_checked = true;
		double shift = 0.0;
		for(bool heating : {true, false})
		{
			const ReservoirSpec& bath = heating ? config.hot : config.cold;
			const ComplexMatrix base =
				joint_bath_steady_electronic(config, bath, config.fock_dim, heating ? &hot_ : &cold_);
			const ComplexMatrix grown = joint_bath_steady_electronic(config, bath, config.fock_dim + 2, nullptr);
			shift = std::max(shift, std::abs(base(1, 1).real() - grown(1, 1).real()));
		}
		validity_.truncation_shift = shift;
		validity_.truncation_unconverged = shift > config.tolerances.truncation;
		if(validity_.truncation_unconverged)
		{
			std::ostringstream msg;
			msg << "run_cycle_full: Fock truncation not converged (population shift " << shift << " > "
				<< config.tolerances.truncation << ")";
			throw NumericalError(msg.str());
		}
	}
}

CycleResult FullCycleRunner::run(double xi) const
{
	const std::size_t n = config_.fock_dim;
	const SpaceLayout layout{2, n, n};
	const ComplexMatrix ground = motional_ground(n);
	const ComplexMatrix a = bosonic_lowering(n);
	const ComplexMatrix n_x = embed(a.adjoint() * a, layout, 1);
	const ComplexMatrix n_y = embed(a.adjoint() * a, layout, 2);

	CycleResult result = run_strokes(config_, xi, CycleMode::Full,
		[&](bool heating, const ComplexMatrix& rho, ValidityReport& v) {
			const auto report = (heating ? hot_ : cold_).run(kron(rho, ground));
			absorb(v, report);
			const double occupation = std::max(expectation(n_x, report.state), expectation(n_y, report.state));
			v.max_motional_occupation = std::max(v.max_motional_occupation, occupation);
			return partial_trace(report.state, layout, {0});
		});

	auto& v = result.validity;
	v.adiabatic_ratio = validity_.adiabatic_ratio;
	v.adiabatic_warning = validity_.adiabatic_warning;
	v.truncation_checked = validity_.truncation_checked;
	v.truncation_shift = validity_.truncation_shift;
	v.truncation_unconverged = validity_.truncation_unconverged;
	v.lamb_dicke_measure = config_.lambda * std::sqrt(std::max(0.0, v.max_motional_occupation));
	v.lamb_dicke_violation = v.lamb_dicke_measure >= config_.tolerances.lamb_dicke;
	return result;
}

CycleResult run_cycle_full(const CycleConfig& config, double xi) { return FullCycleRunner(config).run(xi); }

} // namespace ionotto
