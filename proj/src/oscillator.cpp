#include "ionotto/oscillator.hpp"

#include <algorithm>
#include <cmath>

namespace ionotto
{

double ModeRabi::max() const { return std::max({std::abs(ge1), std::abs(ge2), std::abs(gf1), std::abs(gf2)}); }

void VSystemConfig::validate() const
{
	if(!(lambda > 0.0)) { throw PreconditionError("VSystemConfig.lambda_positive: lambda must be > 0"); }
	if(!(gamma_ge > 0.0) || !(gamma_gf > 0.0))
	{
		throw PreconditionError("VSystemConfig.decay_positive: gamma_ge and gamma_gf must be > 0");
	}
	if(fock_dim < 2) { throw PreconditionError("VSystemConfig.fock_dim: Fock truncation must be at least 2"); }
	for(double w : {rabi.ge1, rabi.ge2, rabi.gf1, rabi.gf2})
	{
		if(!std::isfinite(w)) { throw PreconditionError("VSystemConfig.rabi_finite: Rabi frequencies must be finite"); }
	}
}

double VSystemConfig::regime_ratio() const
{
	const double ge = std::max(std::abs(rabi.ge1), std::abs(rabi.ge2));
	const double gf = std::max(std::abs(rabi.gf1), std::abs(rabi.gf2));
	double ratio = std::numeric_limits<double>::infinity();
	if(ge > 0.0) { ratio = std::min(ratio, gamma_ge / (lambda * ge)); }
	if(gf > 0.0) { ratio = std::min(ratio, gamma_gf / (lambda * gf)); }
	return ratio;
}

ModeRabi match_rabi_for_mode(const ReservoirSpec& spec, double lambda, double gamma_ge, double gamma_gf)
{
	if(spec.kind == BathKind::NegativeTemperature)
	{
		throw PreconditionError("match_rabi_for_mode: negative-temperature baths have no steady state on an oscillator");
	}
	if(!(lambda > 0.0)) { throw PreconditionError("match_rabi_for_mode: lambda must be > 0"); }
	if(!(gamma_ge > 0.0) || !(gamma_gf > 0.0))
	{
		throw PreconditionError("match_rabi_for_mode: gamma_ge and gamma_gf must be > 0");
	}
	spec.validate();

	const double down = std::sqrt(spec.gamma * (1.0 + spec.n_R));
	const double up = std::sqrt(spec.gamma * spec.n_R);
	const double mu = spec.mu();
	const double nu = spec.nu();

	ModeRabi rabi;
	rabi.ge1 = std::sqrt(gamma_ge) / lambda * down * mu;
	rabi.ge2 = std::sqrt(gamma_ge) / lambda * down * nu;
	rabi.gf1 = std::sqrt(gamma_gf) / lambda * up * nu;
	rabi.gf2 = std::sqrt(gamma_gf) / lambda * up * mu;
	return rabi;
}

namespace
{

ComplexMatrix mode_coupling(const ComplexMatrix& a, double lambda, double rabi_1, double rabi_2)
{
	return (0.5 * lambda) * (rabi_1 * a + rabi_2 * a.adjoint());
}

} // namespace

LindbladModel effective_mode_model(const VSystemConfig& config)
{
	config.validate();
	const ComplexMatrix a = bosonic_lowering(config.fock_dim);
	const auto n = static_cast<Eigen::Index>(config.fock_dim);
	std::vector<Channel> channels{
		{4.0 / config.gamma_ge, mode_coupling(a, config.lambda, config.rabi.ge1, config.rabi.ge2)},
		{4.0 / config.gamma_gf, mode_coupling(a, config.lambda, config.rabi.gf1, config.rabi.gf2)},
	};
	return LindbladModel(ComplexMatrix::Zero(n, n), std::move(channels), SpaceLayout{config.fock_dim});
}

LindbladModel full_v_model(const VSystemConfig& config)
{
	config.validate();
	const SpaceLayout layout{3, config.fock_dim};
	const ComplexMatrix a = bosonic_lowering(config.fock_dim);
	const ComplexMatrix sigma_ge = embed(transition(3, 0, 1), layout, 0);
	const ComplexMatrix sigma_gf = embed(transition(3, 0, 2), layout, 0);
	const ComplexMatrix s_ge = embed(mode_coupling(a, config.lambda, config.rabi.ge1, config.rabi.ge2), layout, 1);
	const ComplexMatrix s_gf = embed(mode_coupling(a, config.lambda, config.rabi.gf1, config.rabi.gf2), layout, 1);

	const ComplexMatrix half = s_ge * sigma_ge.adjoint() + s_gf * sigma_gf.adjoint();
	std::vector<Channel> channels{
		{config.gamma_ge, sigma_ge},
		{config.gamma_gf, sigma_gf},
	};
	return LindbladModel(half + half.adjoint(), std::move(channels), layout);
}

ModeMoments mode_moments(const ComplexMatrix& rho, std::size_t fock_dim)
{
	const auto n = static_cast<Eigen::Index>(fock_dim);
	ComplexMatrix mode;
	if(rho.rows() == n) { mode = rho; }
	else if(rho.rows() == 3 * n) { mode = partial_trace(rho, SpaceLayout{3, fock_dim}, {1}); }
	else { throw PreconditionError("mode_moments: state dimension does not match the Fock truncation"); }

	const ComplexMatrix a = bosonic_lowering(fock_dim);
	return {expectation(a.adjoint() * a, mode), expectation_complex(a * a, mode)};
}

} // namespace ionotto
