// ion-otto: sweeps, checks and steady states for the trapped-ion Otto engine.

#include "ionotto/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

namespace
{

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides
{
	std::vector<std::string> modes;
	std::size_t xi_points = 0;
	std::string output;
	std::size_t fock_dim = 0;
	bool strict = false;
};

ionotto::SweepConfig load_with_overrides(const std::string& path, const Overrides& o)
{
	ionotto::SweepConfig config = ionotto::load_config(path);
	if(!o.modes.empty())
	{
		config.modes.clear();
		for(const auto& m : o.modes) { config.modes.push_back(ionotto::parse_mode(m)); }
	}
	if(o.xi_points) { config.xi_grid = ionotto::xi_linspace(o.xi_points, config.xi_grid.back() > 0 ? config.xi_grid.back() : 0.5); }
	if(!o.output.empty()) { config.output_path = o.output; }
	if(o.fock_dim) { config.cycle.fock_dim = o.fock_dim; }
	config.validate();
	return config;
}

void print_bath(const char* label, const ionotto::ReservoirSpec& spec, double gap)
{
	std::printf("%s: kind=%s n_R=%.6g r=%.6g gamma=%.6g rad/us gap/omega_c=%.6g theta=%.9g\n", label,
		std::string(ionotto::to_string(spec.kind)).c_str(), spec.n_R, spec.r, spec.gamma, gap,
		ionotto::bath_theta(spec));
}

int cmd_validate(const ionotto::SweepConfig& config, bool strict)
{
	const auto& c = config.cycle;
	const double gap = c.omega_e_hot / c.omega_e_cold;
	print_bath("cold", c.cold, 1.0);
	print_bath("hot", c.hot, gap);

	bool warned = false;
	for(const auto* bath : {&c.cold, &c.hot})
	{
		const auto settings = ionotto::match_rabi_frequencies(*bath, c.lambda, c.kappa);
		std::printf("%s lasers: Omega_x=(%.6g, %.6g) Omega_y=(%.6g, %.6g) rad/us, kappa/(lambda max Omega)=%.4g%s\n",
			bath == &c.cold ? "cold" : "hot", settings.rabi_x1, settings.rabi_x2, settings.rabi_y1,
			settings.rabi_y2, settings.regime.ratio, settings.regime.warning ? " WARNING" : "");
		warned = warned || settings.regime.warning;
	}
	const auto ref = ionotto::reference_efficiencies(c);
	std::printf("eta_otto=%.12g\n", ref.otto);
	if(ref.carnot) { std::printf("eta_carnot=%.12g\n", *ref.carnot); }
	else { std::printf("eta_carnot=undefined (negative-temperature hot bath)\n"); }
	std::printf("xi grid: %zu points on [%.6g, %.6g]\n", config.xi_grid.size(), config.xi_grid.front(),
		config.xi_grid.back());
	return strict && warned ? kExitNumerical : 0;
}

void print_state(const char* label, const ionotto::ComplexMatrix& rho)
{
	std::printf("  %-10s p_g=%.12f p_e=%.12f |rho_ge|=%.3e\n", label, rho(0, 0).real(), rho(1, 1).real(),
		std::abs(rho(0, 1)));
}

int cmd_steadystate(const ionotto::SweepConfig& config)
{
	for(const auto* bath : {&config.cycle.cold, &config.cycle.hot})
	{
		std::printf("%s bath (%s)\n", bath == &config.cycle.cold ? "cold" : "hot",
			std::string(ionotto::to_string(bath->kind)).c_str());
		print_state("analytic", ionotto::analytic_steady_state(*bath));
		print_state("svd", ionotto::steady_state(ionotto::effective_bath_model(*bath)));
	}
	return 0;
}

int cmd_sweep(const ionotto::SweepConfig& config, bool strict)
{
	const auto report = ionotto::run_sweep(config);
	ionotto::emit_csv(report.rows, report.reference, std::filesystem::path(config.output_path));
	std::printf("wrote %zu rows to %s\n", report.rows.size(), config.output_path.c_str());
	if(!report.flags.empty())
	{
		std::printf("flags:");
		for(const auto& f : report.flags) { std::printf(" %s", f.c_str()); }
		std::printf("\n");
	}
	for(const auto& row : report.rows)
	{
		if(row.failed())
		{
			std::fprintf(stderr, "row %s xi=%.6g failed: %s\n", std::string(ionotto::to_string(row.mode)).c_str(),
				row.xi, row.error.c_str());
		}
	}
	return strict && report.failures > 0 ? kExitNumerical : 0;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Trapped-ion quantum Otto engine: xi sweeps, regime checks and bath steady states"};
	app.require_subcommand(1);

	Overrides o;
	std::string config_path;
	auto add_common = [&](CLI::App* sub) {
		sub->add_option("config", config_path, "JSON configuration file")->required();
		sub->add_option("--modes", o.modes, "closed_form, effective and/or full")->delimiter(',');
		sub->add_option("--xi-points", o.xi_points, "number of xi grid points");
		sub->add_option("--output", o.output, "CSV output path");
		sub->add_option("--fock-dim", o.fock_dim, "Fock truncation per motional mode");
		sub->add_flag("--strict", o.strict, "exit with code 3 on any numerical failure or regime warning");
	};
	auto* sweep = app.add_subcommand("sweep", "run the xi sweep and write the CSV");
	auto* validate = app.add_subcommand("validate", "check invariants and the adiabatic regime only");
	auto* steady = app.add_subcommand("steadystate", "print bath steady states (closed form and SVD)");
	for(auto* sub : {sweep, validate, steady}) { add_common(sub); }

	CLI11_PARSE(app, argc, argv);

	ionotto::SweepConfig config;
	try
	{
		config = load_with_overrides(config_path, o);
	}
	catch(const ionotto::ConfigError& e)
	{
		std::cerr << "config error: " << e.what() << '\n';
		return kExitConfig;
	}
	catch(const ionotto::PreconditionError& e)
	{
		std::cerr << "config error: " << e.what() << '\n';
		return kExitConfig;
	}

	try
	{
		if(*sweep) { return cmd_sweep(config, o.strict); }
		if(*validate) { return cmd_validate(config, o.strict); }
		return cmd_steadystate(config);
	}
	catch(const std::exception& e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return kExitNumerical;
	}
}
