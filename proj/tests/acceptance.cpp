// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "ionotto/oscillator.hpp"
#include "ionotto/otto_cycle.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace ionotto;
using testing_support::kPi;
using testing_support::panel;

namespace
{

struct Outcome
{
	bool pass = true;
	std::string detail;
};

/// Solver hygiene bookkeeping shared by every run below.
struct Hygiene
{
	double max_trace_drift = 0.0;
	double min_eigenvalue = std::numeric_limits<double>::infinity();
	std::size_t runs = 0;

	void record(double drift, double min_eig)
	{
		max_trace_drift = std::max(max_trace_drift, drift);
		min_eigenvalue = std::min(min_eigenvalue, min_eig);
		++runs;
	}
	void record_state(const ComplexMatrix& rho)
	{
		record(std::abs(rho.trace() - Complex(1.0)), min_eigenvalue_of(rho));
	}
	static double min_eigenvalue_of(const ComplexMatrix& rho) { return ionotto::min_eigenvalue(rho); }
};

Hygiene hygiene;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
	return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a)
{
	char buf[128];
	std::snprintf(buf, sizeof buf, f, a);
	return buf;
}

EquilibrationOptions joint_options(double gamma)
{
	EquilibrationOptions opt;
	opt.window = 5.0 / gamma;
	opt.max_windows = 8;
	opt.method = EquilibrationMethod::Implicit;
	return opt;
}

// 1
Outcome bath_steady_states()
{
	const auto t0 = std::chrono::steady_clock::now();
	Outcome o;
	const double gamma = 2.0 * kPi * 1e-4;
	struct Case
	{
		ReservoirSpec spec;
		double expected_pe;
	};
	const double mu2 = std::pow(std::cosh(0.5), 2);
	const double nu2 = std::pow(std::sinh(0.5), 2);
	const double pg0 = 1.4 / 1.8;
	const double pe0 = 0.4 / 1.8;
	const Case cases[] = {
		{ReservoirSpec::thermal(gamma, 0.6), 0.6 / 2.2},
		{ReservoirSpec::negative_temperature(gamma, 0.8), 0.8},
		{ReservoirSpec::squeezed_thermal(gamma, 0.4, 0.5), (nu2 * pg0 + mu2 * pe0) / (mu2 + nu2)},
	};
	double worst = 0.0;
	for(const Case& c : cases)
	{
		const ComplexMatrix ss = steady_state(effective_bath_model(c.spec));
		hygiene.record_state(ss);
		worst = std::max(worst, std::abs(ss(1, 1).real() - c.expected_pe));
		worst = std::max(worst, (ss - analytic_steady_state(c.spec)).cwiseAbs().maxCoeff());
	}
	const double elapsed = seconds_since(t0);
	o.pass = worst <= 1e-8 && elapsed < 1.0;
	o.detail = fmt("max error %.2e", worst) + fmt(", %.3f s", elapsed);
	return o;
}

// 2
Outcome matching_identity()
{
	const auto t0 = std::chrono::steady_clock::now();
	std::mt19937_64 rng(2024);
	std::uniform_real_distribution<double> u(0.0, 1.0);
	double worst = 0.0;
	for(int trial = 0; trial < 20; ++trial)
	{
		const double gamma = 1e-4 + u(rng);
		ReservoirSpec spec;
		switch(trial % 3)
		{
		case 0: spec = ReservoirSpec::thermal(gamma, 3.0 * u(rng)); break;
		case 1: spec = ReservoirSpec::negative_temperature(gamma, 0.505 + 0.49 * u(rng)); break;
		default: spec = ReservoirSpec::squeezed_thermal(gamma, 2.0 * u(rng), 1.5 * u(rng)); break;
		}
		const double lambda = 0.001 + 0.1 * u(rng);
		const double kappa = 0.1 + 10.0 * u(rng);
		const auto settings = match_rabi_frequencies(spec, lambda, kappa);
		const LindbladModel engineered(ComplexMatrix::Zero(2, 2), engineered_channels(settings, lambda, kappa),
			SpaceLayout{2});
		const ComplexMatrix diff = liouvillian_matrix(engineered) - liouvillian_matrix(effective_bath_model(spec));
		worst = std::max(worst, diff.cwiseAbs().maxCoeff());
	}
	const double elapsed = seconds_since(t0);
	return {worst <= 1e-12 && elapsed < 1.0, fmt("20 specs, max |dL| %.2e", worst) + fmt(", %.3f s", elapsed)};
}

// 3
Outcome adiabatic_elimination()
{
	Outcome o;
	const double gamma = 2.0 * kPi * 1e-4;
	const double lambda = 0.01;
	const double kappa = 2.0 * kPi;
	const std::size_t n = 6;
	const ReservoirSpec baths[] = {
		ReservoirSpec::thermal(gamma, 0.6),
		ReservoirSpec::thermal(gamma, 1.2),
		ReservoirSpec::negative_temperature(gamma, 0.8),
		ReservoirSpec::squeezed_thermal(gamma, 0.4, 0.5),
	};
	const ComplexMatrix rho0 = kron(qubit::ground_projector(), kron(projector(n, 0), projector(n, 0)));
	constexpr double kRoundOff = 1e-9;
	double worst = 0.0;
	double slowest = 0.0;
	std::string shrink;
	for(const ReservoirSpec& spec : baths)
	{
		const auto t0 = std::chrono::steady_clock::now();
		double err[2];
		for(int k = 0; k < 2; ++k)
		{
			const double kap = kappa * (k + 1);
			const auto settings = match_rabi_frequencies(spec, lambda, kap);
			const auto report = equilibrate(joint_bath_model(settings, lambda, kap, n), rho0, joint_options(gamma));
			hygiene.record(report.max_trace_drift, report.min_eigenvalue);
			const ComplexMatrix electronic = partial_trace(report.state, SpaceLayout{2, n, n}, {0});
			err[k] = (electronic - analytic_steady_state(spec)).cwiseAbs().maxCoeff();
		}
		slowest = std::max(slowest, seconds_since(t0));
		worst = std::max(worst, err[0]);
		const bool shrinks = err[1] < err[0] || std::max(err[0], err[1]) < kRoundOff;
		o.pass = o.pass && shrinks;
		shrink += fmt(" %.1e", err[0]) + fmt("->%.1e", err[1]);
	}
	o.pass = o.pass && worst <= 1e-2 && slowest < 60.0;
	o.detail = "error kappa->2kappa:" + shrink + fmt(", slowest case %.1f s", slowest);
	return o;
}

// 4
Outcome closed_form_identities()
{
	const auto t0 = std::chrono::steady_clock::now();
	std::mt19937_64 rng(4);
	std::uniform_real_distribution<double> u(0.0, 1.0);
	double residual = 0.0;
	double excess = -1.0;
	std::size_t engines = 0;
	for(int trial = 0; trial < 10000; ++trial)
	{
		CycleConfig c = panel('c');
		c.omega_e_hot = c.omega_e_cold * (1.0 + 4.0 * u(rng));
		c.cold = ReservoirSpec::thermal(1.0, 0.01 + 3.0 * u(rng));
		switch(trial % 3)
		{
		case 0: c.hot = ReservoirSpec::thermal(1.0, 0.01 + 5.0 * u(rng)); break;
		case 1: c.hot = ReservoirSpec::negative_temperature(1.0, 0.501 + 0.498 * u(rng)); break;
		default: c.hot = ReservoirSpec::squeezed_thermal(1.0, 5.0 * u(rng), 2.0 * u(rng)); break;
		}
		const double xi = u(rng);
		const CycleResult r = closed_form_efficiency(c, xi);
		residual = std::max(residual, std::abs(r.energies.first_law_residual()));
		if(r.regime == Regime::HeatEngine && c.hot.kind != BathKind::NegativeTemperature)
		{
			++engines;
			excess = std::max(excess, *r.efficiency - (1.0 - c.omega_e_cold / c.omega_e_hot));
		}
	}
	double endpoint = 0.0;
	for(char p : {'a', 'b', 'c'})
	{
		endpoint = std::max(endpoint, std::abs(*closed_form_efficiency(panel(p), 0.0).efficiency - 1.0 / 3.0));
	}
	const double elapsed = seconds_since(t0);
	Outcome o;
	o.pass = residual <= 1e-12 && excess <= 1e-12 && endpoint <= 1e-12 && elapsed < 5.0;
	o.detail = fmt("first-law residual %.1e", residual) + fmt(", max(eta - eta_O) %.2e", excess) +
		fmt(" over %.0f engines", static_cast<double>(engines)) + fmt(", |eta(0) - 1/3| %.1e", endpoint) +
		fmt(", %.2f s", elapsed);
	return o;
}

// 5
Outcome efficiency_landmarks()
{
	const auto t0 = std::chrono::steady_clock::now();
	double endpoint = 0.0;
	for(char p : {'a', 'b', 'c'})
	{
		endpoint = std::max(endpoint, std::abs(*closed_form_efficiency(panel(p), 0.0).efficiency - 1.0 / 3.0));
	}
	const double eta_minus = *closed_form_efficiency(panel('b'), 0.5).efficiency;

	// Sign scan of W_net on panel (a), refined by bisection.
	const CycleConfig a = panel('a');
	double lo = 0.0;
	double hi = 0.0;
	for(int k = 1; k <= 1000; ++k)
	{
		hi = 0.5 * k / 1000.0;
		if(closed_form_thermo(a, hi).w_net() >= 0.0) { break; }
		lo = hi;
	}
	for(int it = 0; it < 60; ++it)
	{
		const double mid = 0.5 * (lo + hi);
		(closed_form_thermo(a, mid).w_net() < 0.0 ? lo : hi) = mid;
	}
	const double xi_star = 0.5 * (lo + hi);
	const double carnot = *reference_efficiencies(a).carnot;
	const double elapsed = seconds_since(t0);

	Outcome o;
	o.pass = endpoint <= 1e-12 && std::abs(eta_minus - 0.4953) <= 1e-3 && std::abs(xi_star - 0.0410) <= 5e-4 &&
		std::abs(carnot - 0.5880) <= 1e-3 && elapsed < 5.0;
	o.detail = fmt("eta(0) err %.1e", endpoint) + fmt(", eta-(0.5) %.6f", eta_minus) + fmt(", xi* %.6f", xi_star) +
		fmt(", eta_C(a) %.6f", carnot) + fmt(", %.3f s", elapsed);
	return o;
}

// 6
Outcome mode_agreement()
{
	Outcome o;
	std::vector<double> grid(41);
	for(int i = 0; i <= 40; ++i) { grid[i] = 0.5 * i / 40.0; }
	auto eta = [](const CycleResult& r) { return -r.energies.w_net() / r.energies.q_hot; };

	for(char p : {'a', 'b', 'c'})
	{
		const auto t0 = std::chrono::steady_clock::now();
		const CycleConfig c = panel(p);
		const FullCycleRunner runner(c);
		double full_gap = 0.0;
		double eff_gap = 0.0;
		int points = 0;
		for(double xi : grid)
		{
			const CycleResult cf = closed_form_efficiency(c, xi);
			if(cf.regime != Regime::HeatEngine) { continue; }
			++points;
			const CycleResult eff = run_cycle_effective(c, xi);
			const CycleResult full = runner.run(xi);
			hygiene.record(eff.validity.max_trace_drift, eff.validity.min_eigenvalue);
			hygiene.record(full.validity.max_trace_drift, full.validity.min_eigenvalue);
			full_gap = std::max(full_gap, std::abs(eta(full) - eta(eff)));
			eff_gap = std::max(eff_gap, std::abs(eta(eff) - *cf.efficiency));
			o.pass = o.pass && !full.validity.lamb_dicke_violation;
		}
		const double elapsed = seconds_since(t0);
		o.pass = o.pass && points > 0 && full_gap <= 0.02 && eff_gap <= 1e-6 && elapsed <= 900.0;
		o.detail += std::string(o.detail.empty() ? "" : "; ") + p + ": " +
			fmt("%.0f engine points", static_cast<double>(points)) + fmt(", full-eff %.1e", full_gap) +
			fmt(", eff-cf %.1e", eff_gap) + fmt(", %.0f s", elapsed);
	}
	return o;
}

// 7
Outcome unitary_strokes()
{
	const auto t0 = std::chrono::steady_clock::now();
	std::mt19937_64 rng(7);
	std::uniform_real_distribution<double> u(0.0, 1.0);
	double worst = 0.0;
	for(int trial = 0; trial < 100; ++trial)
	{
		const double rabi = 0.1 + 2.0 * u(rng);
		const double tau = 2.0 * kPi / rabi * u(rng);
		const double omega = rabi * (5.0 + 15.0 * u(rng));
		const ComplexMatrix un = carrier_propagator_numeric(omega, rabi, tau, 8000);
		worst = std::max(worst, std::abs(std::norm(un(1, 0)) - transition_probability(rabi, tau)));
	}
	double relabel = 0.0;
	for(int trial = 0; trial < 100; ++trial)
	{
		const ComplexMatrix rho = testing_support::random_density(rng, 2);
		const ComplexMatrix ur = gap_ramp_propagator(2.0 * kPi * 1e6, 3.0 * kPi * 1e6, u(rng));
		const ComplexMatrix moved = ur * rho * ur.adjoint();
		relabel = std::max(relabel, (moved.diagonal() - rho.diagonal()).cwiseAbs().maxCoeff());
	}
	const double elapsed = seconds_since(t0);
	return {worst <= 1e-9 && relabel <= 1e-14 && elapsed < 5.0,
		fmt("max |P_num - sin^2| %.1e", worst) + fmt(", relabel shift %.1e", relabel) + fmt(", %.2f s", elapsed)};
}

// 8
Outcome oscillator_variant()
{
	const auto t0 = std::chrono::steady_clock::now();
	Outcome o;
	auto config = [](const ReservoirSpec& spec, double gamma, std::size_t fock) {
		VSystemConfig c;
		c.lambda = 0.01;
		c.gamma_ge = c.gamma_gf = gamma;
		c.fock_dim = fock;
		c.rabi = match_rabi_for_mode(spec, c.lambda, gamma, gamma);
		return c;
	};
	// Moment equations of the quadratic Lindbladian, written out from the lasers.
	auto moments = [](const VSystemConfig& c) {
		const double rates[] = {4.0 / c.gamma_ge, 4.0 / c.gamma_gf};
		const double p[] = {0.5 * c.lambda * c.rabi.ge1, 0.5 * c.lambda * c.rabi.gf1};
		const double q[] = {0.5 * c.lambda * c.rabi.ge2, 0.5 * c.lambda * c.rabi.gf2};
		double drift = 0.0, pump = 0.0, cross = 0.0;
		for(int k = 0; k < 2; ++k)
		{
			drift += rates[k] * (q[k] * q[k] - p[k] * p[k]);
			pump += rates[k] * q[k] * q[k];
			cross += rates[k] * p[k] * q[k];
		}
		Eigen::Matrix2d a;
		a << drift, 0.0, 0.0, drift;
		const Eigen::Vector2d x = a.partialPivLu().solve(Eigen::Vector2d(-pump, cross));
		return std::pair<double, double>{x(0), x(1)};
	};

	const ComplexMatrix thermal_ss = steady_state(effective_mode_model(config(ReservoirSpec::thermal(1e-3, 0.6), 1.0, 20)));
	hygiene.record_state(thermal_ss);
	const double thermal_err = std::abs(mode_moments(thermal_ss, 20).number - 0.6);

	const VSystemConfig sq = config(ReservoirSpec::squeezed_thermal(1e-3, 0.4, 0.5), 1.0, 50);
	const ComplexMatrix sq_ss = steady_state(effective_mode_model(sq));
	hygiene.record_state(sq_ss);
	const auto sq_m = mode_moments(sq_ss, 50);
	const auto sq_oracle = moments(sq);
	const double sq_err = std::max(std::abs(sq_m.a_squared.real() - sq_oracle.second),
		std::abs(sq_m.number - sq_oracle.first));
	const bool squeezed_nonzero = std::abs(sq_m.a_squared) > 1e-3;

	double full_err = 0.0;
	for(double r : {0.0, 0.5})
	{
		const double n = r == 0.0 ? 0.6 : 0.4;
		const double ratio = 50.0;
		const double mode_rate = 1.0 / (ratio * ratio * (1.0 + n) * std::pow(std::cosh(r), 2));
		const ReservoirSpec spec =
			r == 0.0 ? ReservoirSpec::thermal(mode_rate, n) : ReservoirSpec::squeezed_thermal(mode_rate, n, r);
		const VSystemConfig c = config(spec, 1.0, r == 0.0 ? 14 : 30);
		EquilibrationOptions opt;
		opt.window = 5.0 / mode_rate;
		opt.max_windows = 30;
		opt.method = EquilibrationMethod::Implicit;
		const auto report = equilibrate(full_v_model(c), kron(projector(3, 0), projector(c.fock_dim, 0)), opt);
		hygiene.record(report.max_trace_drift, report.min_eigenvalue);
		const auto got = mode_moments(report.state, c.fock_dim);
		const auto want = moments(c);
		full_err = std::max(full_err, std::abs(got.number - want.first) / want.first);
		if(r > 0.0) { full_err = std::max(full_err, std::abs(got.a_squared.real() - want.second) / std::abs(want.second)); }
	}
	const double elapsed = seconds_since(t0);
	o.pass = thermal_err <= 1e-6 && sq_err <= 1e-6 && squeezed_nonzero && full_err <= 0.02 && elapsed < 120.0;
	o.detail = fmt("thermal <n> err %.1e", thermal_err) + fmt(", squeezed moment err %.1e", sq_err) +
		fmt(", |<a^2>| %.3f", std::abs(sq_m.a_squared)) + fmt(", full-vs-effective %.2e", full_err) +
		fmt(", %.1f s", elapsed);
	return o;
}

// 9
Outcome solver_hygiene()
{
	const double gamma = 2.0 * kPi * 1e-4;
	double worst = 0.0;
	for(const ReservoirSpec& spec : {ReservoirSpec::thermal(gamma, 0.6), ReservoirSpec::thermal(gamma, 1.2),
			ReservoirSpec::negative_temperature(gamma, 0.8), ReservoirSpec::squeezed_thermal(gamma, 0.4, 0.5)})
	{
		const LindbladModel model = effective_bath_model(spec);
		const auto late = evolve(model, qubit::excited_projector(), 40.0 / gamma);
		hygiene.record(late.max_trace_drift, late.min_eigenvalue);
		worst = std::max(worst, (late.final_state - steady_state(model)).cwiseAbs().maxCoeff());
	}
	VSystemConfig c;
	c.lambda = 0.01;
	c.gamma_ge = c.gamma_gf = 1.0;
	c.fock_dim = 12;
	const double mode_rate = 1e-2;
	c.rabi = match_rabi_for_mode(ReservoirSpec::squeezed_thermal(mode_rate, 0.3, 0.3), c.lambda, 1.0, 1.0);
	const LindbladModel mode = effective_mode_model(c);
	const auto late = evolve(mode, projector(12, 0), 40.0 / mode_rate);
	hygiene.record(late.max_trace_drift, late.min_eigenvalue);
	worst = std::max(worst, (late.final_state - steady_state(mode)).cwiseAbs().maxCoeff());

	Outcome o;
	o.pass = hygiene.max_trace_drift <= 1e-8 && hygiene.min_eigenvalue >= -1e-9 && worst <= 1e-6;
	o.detail = fmt("%.0f runs", static_cast<double>(hygiene.runs)) + fmt(", max trace drift %.1e", hygiene.max_trace_drift) +
		fmt(", min eigenvalue %.1e", hygiene.min_eigenvalue) + fmt(", steady vs evolve %.1e", worst);
	return o;
}

} // namespace

int main()
{
	const std::pair<const char*, std::function<Outcome()>> criteria[] = {
		{"bath steady states of the effective models", bath_steady_states},
		{"matched lasers reproduce the target Liouvillian", matching_identity},
		{"joint ion model agrees with adiabatic elimination", adiabatic_elimination},
		{"closed-form first law and Otto bound", closed_form_identities},
		{"efficiency endpoints, threshold and Carnot value", efficiency_landmarks},
		{"full, effective and closed-form efficiencies agree", mode_agreement},
		{"carrier pulse and gap relabeling", unitary_strokes},
		{"oscillator working substance", oscillator_variant},
		{"solver hygiene", solver_hygiene},
	};
	int failures = 0;
	int index = 0;
	for(const auto& [name, check] : criteria)
	{
		++index;
		Outcome o;
		try
		{
			o = check();
		}
		catch(const std::exception& e)
		{
			o = {false, std::string("exception: ") + e.what()};
		}
		failures += o.pass ? 0 : 1;
		std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
		std::fflush(stdout);
	}
	std::printf("%d of %d criteria passed\n", index - failures, index);
	return failures == 0 ? 0 : 1;
}
