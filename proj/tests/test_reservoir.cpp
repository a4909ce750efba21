#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ionotto/reservoir.hpp"
#include "support.hpp"

using namespace ionotto;
using testing_support::kPi;

namespace
{

/// Rate-balance populations: total upward and downward jump rates of the
/// target bath, ignoring the sigma^2 cross terms that only touch coherences.
double rate_balance_excited(const ReservoirSpec& s)
{
	const double mu2 = std::cosh(s.r) * std::cosh(s.r);
	const double nu2 = std::sinh(s.r) * std::sinh(s.r);
	const double down_weight = s.statistics == Statistics::BoseEinstein ? 1.0 + s.n_R : 1.0 - s.n_R;
	const double up = down_weight * nu2 + s.n_R * mu2;
	const double down = down_weight * mu2 + s.n_R * nu2;
	return up / (up + down);
}

ReservoirSpec random_spec(std::mt19937_64& rng)
{
	std::uniform_real_distribution<double> u(0.0, 1.0);
	const double gamma = 1e-4 + u(rng);
	switch(static_cast<int>(u(rng) * 3.0))
	{
	case 0: return ReservoirSpec::thermal(gamma, 3.0 * u(rng));
	case 1: return ReservoirSpec::negative_temperature(gamma, 0.5 + 0.5 * (0.01 + 0.98 * u(rng)));
	default: return ReservoirSpec::squeezed_thermal(gamma, 2.0 * u(rng), 1.5 * u(rng));
	}
}

} // namespace

TEST_CASE("theta from occupation")
{
	CHECK(theta_from_occupation(0.6, Statistics::BoseEinstein).theta ==
		doctest::Approx(0.5 * std::log(8.0 / 3.0)).epsilon(1e-15));
	CHECK(theta_from_occupation(0.6, Statistics::BoseEinstein).theta == doctest::Approx(0.490415).epsilon(1e-6));
	const auto fd = theta_from_occupation(0.8, Statistics::FermiDirac);
	CHECK(fd.theta == doctest::Approx(-0.693147).epsilon(1e-6));
	CHECK(fd.negative());
	CHECK(theta_from_occupation(1e9, Statistics::BoseEinstein).theta < 1e-9);
	CHECK(theta_from_occupation(0.5, Statistics::FermiDirac).infinite_temperature);

	CHECK_THROWS_AS((void)theta_from_occupation(0.0, Statistics::BoseEinstein), PreconditionError);
	CHECK_THROWS_AS((void)theta_from_occupation(1.0, Statistics::FermiDirac), PreconditionError);
	CHECK_THROWS_AS((void)theta_from_occupation(-0.2, Statistics::FermiDirac), PreconditionError);
}

TEST_CASE("theta round trip through the distributions")
{
	for(double n : {0.01, 0.3, 1.0, 4.5})
	{
		const double t = theta_from_occupation(n, Statistics::BoseEinstein).theta;
		CHECK(1.0 / std::expm1(2.0 * t) == doctest::Approx(n).epsilon(1e-12));
	}
	for(double n : {0.1, 0.45, 0.55, 0.95})
	{
		const double t = theta_from_occupation(n, Statistics::FermiDirac).theta;
		CHECK(1.0 / (std::exp(2.0 * t) + 1.0) == doctest::Approx(n).epsilon(1e-12));
	}
}

TEST_CASE("spec invariants")
{
	CHECK_NOTHROW(ReservoirSpec::thermal(1.0, 0.0).validate());
	CHECK_THROWS_AS(ReservoirSpec::thermal(1.0, -0.1).validate(), PreconditionError);
	CHECK_THROWS_AS(ReservoirSpec::thermal(0.0, 0.5).validate(), PreconditionError);
	CHECK_THROWS_AS(ReservoirSpec::negative_temperature(1.0, 0.3).validate(), PreconditionError);
	CHECK_THROWS_AS(ReservoirSpec::negative_temperature(1.0, 1.0).validate(), PreconditionError);
	CHECK_THROWS_AS(ReservoirSpec::squeezed_thermal(1.0, 0.4, -0.1).validate(), PreconditionError);

	ReservoirSpec wrong_stats = ReservoirSpec::thermal(1.0, 0.4);
	wrong_stats.statistics = Statistics::FermiDirac;
	CHECK_THROWS_AS(wrong_stats.validate(), PreconditionError);
	ReservoirSpec squeezed_thermal = ReservoirSpec::thermal(1.0, 0.4);
	squeezed_thermal.r = 0.2;
	CHECK_THROWS_AS(squeezed_thermal.validate(), PreconditionError);

	try
	{
		ReservoirSpec::negative_temperature(1.0, 0.3).validate();
	}
	catch(const PreconditionError& e)
	{
		CHECK(std::string(e.what()).find("negative_temperature_occupation") != std::string::npos);
	}
}

TEST_CASE("matching conditions: examples")
{
	const double lambda = 0.01;
	const double kappa = 2.0 * kPi;

	const auto cold = match_rabi_frequencies(ReservoirSpec::thermal(1.0, 0.0), lambda, kappa);
	CHECK(cold.rabi_x1 == doctest::Approx(std::sqrt(2.0 * kPi) / 0.01).epsilon(1e-14));
	CHECK(cold.rabi_x2 == 0.0);
	CHECK(cold.rabi_y1 == 0.0);
	CHECK(cold.rabi_y2 == 0.0);

	const auto thermal = match_rabi_frequencies(ReservoirSpec::thermal(0.3, 0.7), lambda, kappa);
	const auto squeezed0 = match_rabi_frequencies(ReservoirSpec::squeezed_thermal(0.3, 0.7, 0.0), lambda, kappa);
	CHECK(thermal.rabi_x1 == squeezed0.rabi_x1);
	CHECK(thermal.rabi_x2 == squeezed0.rabi_x2);
	CHECK(thermal.rabi_y1 == squeezed0.rabi_y1);
	CHECK(thermal.rabi_y2 == squeezed0.rabi_y2);

	const double gamma = 2.0 * kPi * 1e-4;
	const auto fig = match_rabi_frequencies(ReservoirSpec::thermal(gamma, 0.6), lambda, kappa);
	CHECK(lambda * fig.rabi_x1 / std::sqrt(kappa) == doctest::Approx(std::sqrt(gamma * 1.6)).epsilon(1e-14));
	CHECK(lambda * fig.rabi_y2 / std::sqrt(kappa) == doctest::Approx(std::sqrt(gamma * 0.6)).epsilon(1e-14));
	CHECK(fig.regime.ratio == doctest::Approx(std::sqrt(1e4 / 1.6)).epsilon(1e-12));
	CHECK_FALSE(fig.regime.warning);

	const auto nt = match_rabi_frequencies(ReservoirSpec::negative_temperature(gamma, 0.8), lambda, kappa);
	CHECK(lambda * nt.rabi_x1 / std::sqrt(kappa) == doctest::Approx(std::sqrt(gamma * 0.2)).epsilon(1e-14));
	CHECK(nt.rabi_y2 > nt.rabi_x1);

	const auto crowded = match_rabi_frequencies(ReservoirSpec::thermal(0.1, 0.6), lambda, kappa);
	CHECK(crowded.regime.warning);

	CHECK_THROWS_AS((void)match_rabi_frequencies(ReservoirSpec::thermal(1.0, 0.5), 0.0, kappa), PreconditionError);
	CHECK_THROWS_AS((void)match_rabi_frequencies(ReservoirSpec::thermal(1.0, 0.5), lambda, -1.0), PreconditionError);
	ReservoirSpec overfull = ReservoirSpec::negative_temperature(1.0, 0.8);
	overfull.n_R = 1.2;
	CHECK_THROWS_AS((void)match_rabi_frequencies(overfull, lambda, kappa), PreconditionError);
}

TEST_CASE("matched lasers reproduce the target Liouvillian for random specs")
{
	std::mt19937_64 rng(31);
	std::uniform_real_distribution<double> u(0.0, 1.0);
	for(int trial = 0; trial < 50; ++trial)
	{
		const ReservoirSpec spec = random_spec(rng);
		const double lambda = 0.001 + 0.1 * u(rng);
		const double kappa = 0.1 + 10.0 * u(rng);
		const auto settings = match_rabi_frequencies(spec, lambda, kappa);
		const LindbladModel engineered(ComplexMatrix::Zero(2, 2), engineered_channels(settings, lambda, kappa),
			SpaceLayout{2});
		const ComplexMatrix diff = liouvillian_matrix(engineered) - liouvillian_matrix(effective_bath_model(spec));
		CHECK(diff.cwiseAbs().maxCoeff() <= 1e-12);
	}
}

TEST_CASE("effective channels: examples")
{
	const auto zero = effective_collapse_channels(ReservoirSpec::thermal(0.7, 0.0));
	REQUIRE(zero.size() == 1);
	CHECK(zero[0].rate == 0.7);
	CHECK((zero[0].op - qubit::lowering()).norm() == 0.0);

	const ComplexMatrix fd = steady_state(effective_bath_model(ReservoirSpec::negative_temperature(1.0, 0.8)));
	CHECK(std::abs(fd(1, 1).real() - 0.8) < 1e-12);

	const ReservoirSpec thermal = ReservoirSpec::thermal(1.0, 0.6);
	const auto late = evolve(effective_bath_model(thermal), qubit::excited_projector(), 20.0);
	CHECK(std::abs(late.final_state(1, 1).real() - 0.6 / 2.2) < 1e-6);
}

TEST_CASE("steady states agree with rate balance and the closed forms")
{
	std::mt19937_64 rng(32);
	for(int trial = 0; trial < 30; ++trial)
	{
		const ReservoirSpec spec = random_spec(rng);
		const ComplexMatrix ss = steady_state(effective_bath_model(spec));
		CHECK(std::abs(ss(1, 1).real() - rate_balance_excited(spec)) < 1e-10);
		CHECK((ss - analytic_steady_state(spec)).norm() < 1e-8);
	}
}

TEST_CASE("thermal steady states obey p_e / p_g = exp(-2 theta) for both signs")
{
	for(const ReservoirSpec& spec : {ReservoirSpec::thermal(1.0, 0.6), ReservoirSpec::thermal(0.2, 2.5),
			ReservoirSpec::negative_temperature(1.0, 0.8), ReservoirSpec::negative_temperature(0.3, 0.55)})
	{
		const ComplexMatrix ss = steady_state(effective_bath_model(spec));
		const double theta = theta_from_occupation(spec.n_R, spec.statistics).theta;
		CHECK(ss(1, 1).real() / ss(0, 0).real() == doctest::Approx(std::exp(-2.0 * theta)).epsilon(1e-10));
	}
}

TEST_CASE("Gibbs states")
{
	CHECK((gibbs_state({0.0, true}) - 0.5 * identity(2)).norm() < 1e-15);
	CHECK((gibbs_state({std::numeric_limits<double>::infinity(), false}) - qubit::ground_projector()).norm() == 0.0);
	CHECK(gibbs_state({-0.5 * std::log(4.0), false})(1, 1).real() == doctest::Approx(0.8).epsilon(1e-14));
	CHECK(gibbs_state({-800.0, false})(1, 1).real() == 1.0);

	const EffectiveTheta theta{0.5 * std::log(3.5), false};
	CHECK((squeezed_gibbs_state(theta, 0.0) - gibbs_state(theta)).norm() < 1e-15);
	CHECK((squeezed_gibbs_state(theta, 40.0) - 0.5 * identity(2)).norm() < 1e-14);

	const ComplexMatrix squeezed = steady_state(effective_bath_model(ReservoirSpec::squeezed_thermal(1.0, 0.4, 0.5)));
	CHECK((squeezed - squeezed_gibbs_state(theta, 0.5)).norm() < 1e-8);
}

TEST_CASE("squeezing contracts sigma_z by zeta")
{
	std::mt19937_64 rng(33);
	std::uniform_real_distribution<double> u(-3.0, 3.0);
	for(int trial = 0; trial < 100; ++trial)
	{
		const EffectiveTheta theta{u(rng), false};
		const double r = std::abs(u(rng));
		const double zeta = 1.0 / std::cosh(2.0 * r);
		const double sz_s = expectation(qubit::sigma_z(), squeezed_gibbs_state(theta, r));
		const double sz_g = expectation(qubit::sigma_z(), gibbs_state(theta));
		CHECK(std::abs(sz_s - zeta * sz_g) <= 1e-14);
	}
}

TEST_CASE("full interaction Hamiltonian structure")
{
	LaserSettings off;
	CHECK(full_interaction_hamiltonian(off, 0.01, 3).norm() == 0.0);
	CHECK_THROWS_AS((void)full_interaction_hamiltonian(off, 0.01, 1), PreconditionError);

	std::mt19937_64 rng(34);
	std::uniform_real_distribution<double> u(0.0, 10.0);
	LaserSettings s;
	s.rabi_x1 = u(rng);
	s.rabi_x2 = u(rng);
	s.rabi_y1 = u(rng);
	s.rabi_y2 = u(rng);
	CHECK(hermiticity_deviation(full_interaction_hamiltonian(s, 0.01, 4)) <= 1e-14);

	LaserSettings single;
	single.rabi_x1 = 3.0;
	const ComplexMatrix h = full_interaction_hamiltonian(single, 0.01, 2);
	// index = e * 4 + n_x * 2 + n_y; the y mode is a spectator
	ComplexMatrix rest = h;
	for(Eigen::Index ny : {0, 1})
	{
		const Eigen::Index e0 = 4 + ny;
		const Eigen::Index g1 = 2 + ny;
		CHECK(std::abs(h(g1, e0) - Complex(0.01 * 3.0 / 2.0)) < 1e-16);
		CHECK(std::abs(h(e0, g1) - Complex(0.01 * 3.0 / 2.0)) < 1e-16);
		rest(g1, e0) = 0.0;
		rest(e0, g1) = 0.0;
	}
	CHECK(rest.norm() == 0.0);
}

TEST_CASE("joint model steady state approaches the effective one as kappa grows")
{
	const ReservoirSpec spec = ReservoirSpec::squeezed_thermal(2.0 * kPi * 1e-4, 0.4, 0.5);
	const double lambda = 0.01;
	const ComplexMatrix target = analytic_steady_state(spec);
	const ComplexMatrix rho0 = kron(qubit::ground_projector(), kron(projector(5, 0), projector(5, 0)));

	double previous = 1.0;
	for(double kappa : {2.0 * kPi, 4.0 * kPi})
	{
		const auto settings = match_rabi_frequencies(spec, lambda, kappa);
		EquilibrationOptions opt;
		opt.window = 5.0 / spec.gamma;
		opt.max_windows = 8;
		opt.method = EquilibrationMethod::Implicit;
		const auto report = equilibrate(joint_bath_model(settings, lambda, kappa, 5), rho0, opt);
		const ComplexMatrix electronic = partial_trace(report.state, SpaceLayout{2, 5, 5}, {0});
		const double error = std::abs(electronic(1, 1).real() - target(1, 1).real());
		CHECK(error < 1e-2);
		CHECK(error < previous);
		previous = error;
	}
}
