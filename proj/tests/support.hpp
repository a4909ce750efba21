#pragma once

#include "ionotto/otto_cycle.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace testing_support
{

using ionotto::Complex;
using ionotto::ComplexMatrix;

inline constexpr double kPi = std::numbers::pi;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index n)
{
	std::normal_distribution<double> g;
	ComplexMatrix m(n, n);
	for(Eigen::Index i = 0; i < n; ++i)
	{
		for(Eigen::Index j = 0; j < n; ++j) { m(i, j) = Complex(g(rng), g(rng)); }
	}
	return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n)
{
	const ComplexMatrix m = random_matrix(rng, n);
	return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index n)
{
	const ComplexMatrix m = random_matrix(rng, n);
	ComplexMatrix rho = m * m.adjoint();
	return rho / rho.trace();
}

/// Engine settings of the three reference panels in rad/us.
inline ionotto::CycleConfig panel(char which)
{
	ionotto::CycleConfig c;
	c.omega_e_cold = 2.0 * kPi * 1e6;
	c.omega_e_hot = 3.0 * kPi * 1e6;
	c.omega_m = 20.0 * kPi;
	c.lambda = 0.01;
	c.kappa = 2.0 * kPi;
	c.drive_rabi = 20.0 * kPi * 1e-3;
	const double gamma = 2.0 * kPi * 1e-4;
	c.cold = ionotto::ReservoirSpec::thermal(gamma, 0.6);
	switch(which)
	{
	case 'a': c.hot = ionotto::ReservoirSpec::thermal(gamma, 1.2); break;
	case 'b': c.hot = ionotto::ReservoirSpec::negative_temperature(gamma, 0.8); break;
	default: c.hot = ionotto::ReservoirSpec::squeezed_thermal(gamma, 0.4, 0.5); break;
	}
	return c;
}

} // namespace testing_support
