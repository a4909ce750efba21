#include "ionotto/reservoir.hpp"

#include <cmath>

namespace ionotto
{

std::string_view to_string(BathKind kind)
{
	switch(kind)
	{
	case BathKind::Thermal: return "thermal";
	case BathKind::NegativeTemperature: return "negative_temperature";
	case BathKind::SqueezedThermal: return "squeezed_thermal";
	}
	return "unknown";
}

std::string_view to_string(Statistics statistics)
{
	return statistics == Statistics::BoseEinstein ? "bose_einstein" : "fermi_dirac";
}

ReservoirSpec ReservoirSpec::thermal(double gamma, double n_R)
{
	return {BathKind::Thermal, gamma, n_R, Statistics::BoseEinstein, 0.0};
}

ReservoirSpec ReservoirSpec::negative_temperature(double gamma, double n_R)
{
	return {BathKind::NegativeTemperature, gamma, n_R, Statistics::FermiDirac, 0.0};
}

ReservoirSpec ReservoirSpec::squeezed_thermal(double gamma, double n_R, double r)
{
	return {BathKind::SqueezedThermal, gamma, n_R, Statistics::BoseEinstein, r};
}

void ReservoirSpec::validate() const
{
	if(!(gamma > 0.0) || !std::isfinite(gamma))
	{
		throw PreconditionError("ReservoirSpec.gamma_positive: gamma must be finite and positive");
	}
	if(!std::isfinite(n_R) || !std::isfinite(r))
	{
		throw PreconditionError("ReservoirSpec.finite: n_R and r must be finite");
	}
	switch(kind)
	{
	case BathKind::Thermal:
		if(statistics != Statistics::BoseEinstein)
		{
			throw PreconditionError("ReservoirSpec.thermal_statistics: thermal baths use Bose-Einstein statistics");
		}
		if(n_R < 0.0) { throw PreconditionError("ReservoirSpec.thermal_occupation: thermal n_R must be >= 0"); }
		if(r != 0.0) { throw PreconditionError("ReservoirSpec.thermal_unsqueezed: thermal baths require r = 0"); }
		break;
	case BathKind::NegativeTemperature:
		if(statistics != Statistics::FermiDirac)
		{
			throw PreconditionError(
				"ReservoirSpec.negative_temperature_statistics: negative-temperature baths use Fermi-Dirac statistics");
		}
		if(!(n_R > 0.5 && n_R < 1.0))
		{
			throw PreconditionError(
				"ReservoirSpec.negative_temperature_occupation: n_R must lie in (1/2, 1) for beta < 0");
		}
		if(r != 0.0)
		{
			throw PreconditionError("ReservoirSpec.negative_temperature_unsqueezed: r must be 0");
		}
		break;
	case BathKind::SqueezedThermal:
		if(statistics != Statistics::BoseEinstein)
		{
			throw PreconditionError(
				"ReservoirSpec.squeezed_statistics: squeezed thermal baths use Bose-Einstein statistics");
		}
		if(n_R < 0.0) { throw PreconditionError("ReservoirSpec.squeezed_occupation: n_R must be >= 0"); }
		if(!(r >= 0.0)) { throw PreconditionError("ReservoirSpec.squeezed_parameter: r must be >= 0"); }
		break;
	}
}

double ReservoirSpec::mu() const { return std::cosh(r); }
double ReservoirSpec::nu() const { return std::sinh(r); }
double ReservoirSpec::zeta() const { return 1.0 / std::cosh(2.0 * r); }

EffectiveTheta theta_from_occupation(double n_R, Statistics statistics)
{
	if(statistics == Statistics::BoseEinstein)
	{
		if(!(n_R > 0.0)) { throw PreconditionError("theta_from_occupation: Bose-Einstein n_R must be > 0"); }
		return {0.5 * std::log1p(1.0 / n_R), false};
	}
	if(!(n_R > 0.0 && n_R < 1.0))
	{
		throw PreconditionError("theta_from_occupation: Fermi-Dirac n_R must lie in (0, 1)");
	}
	if(n_R == 0.5) { return {0.0, true}; }
	return {0.5 * std::log(1.0 / n_R - 1.0), false};
}

double LaserSettings::max_rabi() const
{
	return std::max({std::abs(rabi_x1), std::abs(rabi_x2), std::abs(rabi_y1), std::abs(rabi_y2)});
}

LaserSettings match_rabi_frequencies(const ReservoirSpec& spec, double lambda, double kappa)
{
	if(!(lambda > 0.0)) { throw PreconditionError("match_rabi_frequencies: lambda must be > 0"); }
	if(!(kappa > 0.0)) { throw PreconditionError("match_rabi_frequencies: kappa must be > 0"); }
	if(spec.statistics == Statistics::FermiDirac && spec.n_R >= 1.0)
	{
		throw PreconditionError("match_rabi_frequencies: Fermi-Dirac n_R >= 1 gives a negative decay rate");
	}
	spec.validate();

	// lambda * Omega / sqrt(kappa) = amplitude
	const double scale = std::sqrt(kappa) / lambda;
	const double down = spec.statistics == Statistics::BoseEinstein ? 1.0 + spec.n_R : 1.0 - spec.n_R;
	const double a_down = std::sqrt(spec.gamma * down);
	const double a_up = std::sqrt(spec.gamma * spec.n_R);

	LaserSettings s;
	if(spec.kind == BathKind::SqueezedThermal)
	{
		s.rabi_x1 = scale * a_down * spec.mu();
		s.rabi_x2 = scale * a_down * spec.nu();
		s.rabi_y1 = scale * a_up * spec.nu();
		s.rabi_y2 = scale * a_up * spec.mu();
	}
	else
	{
		s.rabi_x1 = scale * a_down;
		s.rabi_y2 = scale * a_up;
	}

	const double max_omega = s.max_rabi();
	if(max_omega > 0.0)
	{
		s.regime.ratio = kappa / (lambda * max_omega);
		s.regime.warning = s.regime.ratio < kAdiabaticRatioThreshold;
	}
	return s;
}

std::vector<Channel> effective_collapse_channels(const ReservoirSpec& spec)
{
	spec.validate();
	const ComplexMatrix sm = qubit::lowering();
	const ComplexMatrix sp = qubit::raising();
	const double down = spec.statistics == Statistics::BoseEinstein ? 1.0 + spec.n_R : 1.0 - spec.n_R;

	std::vector<Channel> channels;
	if(spec.kind == BathKind::SqueezedThermal)
	{
		const double mu = spec.mu();
		const double nu = spec.nu();
		channels.push_back({1.0, std::sqrt(spec.gamma * down) * (mu * sm + nu * sp)});
		if(spec.n_R > 0.0) { channels.push_back({1.0, std::sqrt(spec.gamma * spec.n_R) * (nu * sm + mu * sp)}); }
	}
	else
	{
		if(down > 0.0) { channels.push_back({spec.gamma * down, sm}); }
		if(spec.n_R > 0.0) { channels.push_back({spec.gamma * spec.n_R, sp}); }
	}
	return channels;
}

namespace
{

ComplexMatrix s_operator(double lambda, double rabi_1, double rabi_2)
{
	return (0.5 * lambda) * (rabi_1 * qubit::lowering() + rabi_2 * qubit::raising());
}

} // namespace

std::vector<Channel> engineered_channels(const LaserSettings& settings, double lambda, double kappa)
{
	if(!(kappa > 0.0)) { throw PreconditionError("engineered_channels: kappa must be > 0"); }
	return {
		{4.0 / kappa, s_operator(lambda, settings.rabi_x1, settings.rabi_x2)},
		{4.0 / kappa, s_operator(lambda, settings.rabi_y1, settings.rabi_y2)},
	};
}

LindbladModel effective_bath_model(const ReservoirSpec& spec)
{
	return LindbladModel(ComplexMatrix::Zero(2, 2), effective_collapse_channels(spec), SpaceLayout{2});
}

ComplexMatrix full_interaction_hamiltonian(const LaserSettings& settings, double lambda, std::size_t n_max)
{
	if(n_max < 2) { throw PreconditionError("full_interaction_hamiltonian: n_max must be at least 2"); }
	const SpaceLayout layout{2, n_max, n_max};
	const ComplexMatrix a = bosonic_lowering(n_max);
	const ComplexMatrix a_x = embed(a, layout, 1);
	const ComplexMatrix a_y = embed(a, layout, 2);
	const ComplexMatrix s_x = embed(s_operator(lambda, settings.rabi_x1, settings.rabi_x2), layout, 0);
	const ComplexMatrix s_y = embed(s_operator(lambda, settings.rabi_y1, settings.rabi_y2), layout, 0);

	const ComplexMatrix half = s_x * a_x.adjoint() + s_y * a_y.adjoint();
	return half + half.adjoint();
}

LindbladModel joint_bath_model(const LaserSettings& settings, double lambda, double kappa, std::size_t n_max)
{
	if(!(kappa > 0.0)) { throw PreconditionError("joint_bath_model: kappa must be > 0"); }
	const SpaceLayout layout{2, n_max, n_max};
	const ComplexMatrix a = bosonic_lowering(n_max);
	std::vector<Channel> channels{
		{kappa, embed(a, layout, 1)},
		{kappa, embed(a, layout, 2)},
	};
	return LindbladModel(full_interaction_hamiltonian(settings, lambda, n_max), std::move(channels), layout);
}

ComplexMatrix gibbs_state(const EffectiveTheta& theta)
{
	// p_e = e^{-theta} / (e^{theta} + e^{-theta}), written to avoid overflow.
	const double p_e = 1.0 / (1.0 + std::exp(2.0 * theta.theta));
	const double p_g = 1.0 / (1.0 + std::exp(-2.0 * theta.theta));
	ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
	rho(0, 0) = p_g;
	rho(1, 1) = p_e;
	return rho;
}

ComplexMatrix squeezed_gibbs_state(const EffectiveTheta& theta, double r)
{
	const ComplexMatrix g = gibbs_state(theta);
	const double p_g = g(0, 0).real();
	const double p_e = g(1, 1).real();
	// w = nu^2 / mu^2 keeps r -> infinity finite.
	const double w = std::pow(std::tanh(r), 2);
	ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
	rho(0, 0) = (p_g + w * p_e) / (1.0 + w);
	rho(1, 1) = (w * p_g + p_e) / (1.0 + w);
	return rho;
}

ComplexMatrix analytic_steady_state(const ReservoirSpec& spec)
{
	spec.validate();
	if(spec.n_R == 0.0)
	{
		// Zero temperature: ground state, or the squeezed vacuum populations.
		const EffectiveTheta frozen{std::numeric_limits<double>::infinity(), false};
		return spec.kind == BathKind::SqueezedThermal ? squeezed_gibbs_state(frozen, spec.r) : gibbs_state(frozen);
	}
	const EffectiveTheta theta = theta_from_occupation(spec.n_R, spec.statistics);
	return spec.kind == BathKind::SqueezedThermal ? squeezed_gibbs_state(theta, spec.r) : gibbs_state(theta);
}

} // namespace ionotto
