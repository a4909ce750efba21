#include "ionotto/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <thread>

namespace ionotto
{

using nlohmann::json;

void SweepConfig::validate() const
{
	try
	{
		cycle.validate();
	}
	catch(const PreconditionError& e)
	{
		throw ConfigError(e.what());
	}
	if(xi_grid.empty()) { throw ConfigError("SweepConfig.xi_grid_nonempty: the xi grid is empty"); }
	if(!std::is_sorted(xi_grid.begin(), xi_grid.end()))
	{
		throw ConfigError("SweepConfig.xi_grid_sorted: xi values must be sorted");
	}
	if(xi_grid.front() < 0.0 || xi_grid.back() > 1.0)
	{
		throw ConfigError("SweepConfig.xi_grid_range: xi values must lie in [0, 1]");
	}
	if(modes.empty()) { throw ConfigError("SweepConfig.modes_nonempty: no cycle modes selected"); }
}

std::vector<double> xi_linspace(std::size_t points, double xi_max)
{
	if(points < 2) { throw ConfigError("SweepConfig.xi_points: at least two xi points required"); }
	if(!(xi_max > 0.0 && xi_max <= 1.0)) { throw ConfigError("SweepConfig.xi_max: xi_max must lie in (0, 1]"); }
	std::vector<double> grid(points);
	for(std::size_t i = 0; i < points; ++i)
	{
		grid[i] = xi_max * static_cast<double>(i) / static_cast<double>(points - 1);
	}
	return grid;
}

double frequency_unit_scale(const std::string& unit)
{
	if(unit == "rad_per_s") { return 1e-6; }
	if(unit == "rad_per_ms") { return 1e-3; }
	if(unit == "rad_per_us") { return 1.0; }
	if(unit == "rad_per_ns") { return 1e3; }
	if(unit == "rad_per_ps") { return 1e6; }
	throw ConfigError("unit '" + unit + "' is not a frequency unit (rad_per_s, rad_per_ms, rad_per_us, rad_per_ns, rad_per_ps)");
}

CycleMode parse_mode(const std::string& name)
{
	if(name == "closed_form") { return CycleMode::ClosedForm; }
	if(name == "effective") { return CycleMode::Effective; }
	if(name == "full") { return CycleMode::Full; }
	throw ConfigError("unknown mode '" + name + "' (closed_form, effective, full)");
}

namespace
{

void reject_unknown_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
	if(!obj.is_object()) { throw ConfigError(where + ": expected an object"); }
	for(const auto& item : obj.items())
	{
		const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
		if(!known) { throw ConfigError(where + ": unknown key '" + item.key() + "'"); }
	}
}

const json& require(const json& obj, const std::string& where, const char* key)
{
	if(!obj.contains(key)) { throw ConfigError(where + ": missing key '" + key + "'"); }
	return obj.at(key);
}

double quantity_number(const json& q, const std::string& where)
{
	reject_unknown_keys(q, where, {"value", "unit"});
	const json& value = require(q, where, "value");
	if(!value.is_number()) { throw ConfigError(where + ".value: expected a number"); }
	return value.get<double>();
}

std::string quantity_unit(const json& q, const std::string& where)
{
	const json& unit = require(q, where, "unit");
	if(!unit.is_string()) { throw ConfigError(where + ".unit: expected a string"); }
	return unit.get<std::string>();
}

double frequency(const json& obj, const std::string& where, const char* key)
{
	const std::string path = where + "." + key;
	const json& q = require(obj, where, key);
	const double value = quantity_number(q, path);
	const std::string unit = quantity_unit(q, path);
	try
	{
		return value * frequency_unit_scale(unit);
	}
	catch(const ConfigError& e)
	{
		throw ConfigError(path + ": " + e.what());
	}
}

double dimensionless(const json& obj, const std::string& where, const char* key)
{
	const std::string path = where + "." + key;
	const json& q = require(obj, where, key);
	const double value = quantity_number(q, path);
	const std::string unit = quantity_unit(q, path);
	if(unit != "dimensionless")
	{
		throw ConfigError(path + ": unit '" + unit + "' not allowed, expected 'dimensionless'");
	}
	return value;
}

std::size_t count(const json& obj, const std::string& where, const char* key)
{
	const json& v = require(obj, where, key);
	if(!v.is_number_unsigned()) { throw ConfigError(where + "." + key + ": expected a non-negative integer"); }
	return v.get<std::size_t>();
}

std::string text(const json& obj, const std::string& where, const char* key)
{
	const json& v = require(obj, where, key);
	if(!v.is_string()) { throw ConfigError(where + "." + key + ": expected a string"); }
	return v.get<std::string>();
}

ReservoirSpec parse_bath(const json& obj, const std::string& where)
{
	reject_unknown_keys(obj, where, {"kind", "gamma", "n_R", "r", "statistics"});
	const std::string kind = text(obj, where, "kind");
	const double gamma = frequency(obj, where, "gamma");
	const double n_R = dimensionless(obj, where, "n_R");
	const double r = obj.contains("r") ? dimensionless(obj, where, "r") : 0.0;

	ReservoirSpec spec;
	if(kind == "thermal") { spec = ReservoirSpec::thermal(gamma, n_R); }
	else if(kind == "negative_temperature") { spec = ReservoirSpec::negative_temperature(gamma, n_R); }
	else if(kind == "squeezed_thermal") { spec = ReservoirSpec::squeezed_thermal(gamma, n_R, r); }
	else
	{
		throw ConfigError(where + ".kind: unknown bath kind '" + kind +
						  "' (thermal, negative_temperature, squeezed_thermal)");
	}
	if(kind != "squeezed_thermal") { spec.r = r; }
	if(obj.contains("statistics"))
	{
		const std::string stats = text(obj, where, "statistics");
		if(stats == "bose_einstein") { spec.statistics = Statistics::BoseEinstein; }
		else if(stats == "fermi_dirac") { spec.statistics = Statistics::FermiDirac; }
		else { throw ConfigError(where + ".statistics: unknown statistics '" + stats + "'"); }
	}
	try
	{
		spec.validate();
	}
	catch(const PreconditionError& e)
	{
		throw ConfigError(where + ": " + e.what());
	}
	return spec;
}

std::string locate(const std::string& text, std::size_t byte)
{
	std::size_t line = 1;
	std::size_t column = 1;
	const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
	for(std::size_t i = 0; i < end; ++i)
	{
		if(text[i] == '\n')
		{
			++line;
			column = 1;
		}
		else { ++column; }
	}
	return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

} // namespace

SweepConfig parse_config(const std::string& source)
{
	json doc;
	try
	{
		doc = json::parse(source);
	}
	catch(const json::parse_error& e)
	{
		throw ConfigError("parse error at " + locate(source, e.byte) + ": " + e.what());
	}

	reject_unknown_keys(doc, "config", {"engine", "cold", "hot", "sweep"});
	SweepConfig config;

	const json& engine = require(doc, "config", "engine");
	reject_unknown_keys(engine, "engine",
		{"omega_cold", "omega_hot", "omega_m", "lambda", "kappa", "drive_rabi", "fock_dim"});
	CycleConfig& c = config.cycle;
	c.omega_e_cold = frequency(engine, "engine", "omega_cold");
	c.omega_e_hot = frequency(engine, "engine", "omega_hot");
	c.omega_m = frequency(engine, "engine", "omega_m");
	c.lambda = dimensionless(engine, "engine", "lambda");
	c.kappa = frequency(engine, "engine", "kappa");
	c.drive_rabi = frequency(engine, "engine", "drive_rabi");
	if(engine.contains("fock_dim")) { c.fock_dim = count(engine, "engine", "fock_dim"); }

	c.cold = parse_bath(require(doc, "config", "cold"), "cold");
	c.hot = parse_bath(require(doc, "config", "hot"), "hot");

	config.xi_grid = xi_linspace(41, 0.5);
	if(doc.contains("sweep"))
	{
		const json& sweep = doc.at("sweep");
		reject_unknown_keys(sweep, "sweep", {"xi", "xi_points", "xi_max", "modes", "output"});
		if(sweep.contains("xi") && (sweep.contains("xi_points") || sweep.contains("xi_max")))
		{
			throw ConfigError("sweep: give either xi or xi_points/xi_max, not both");
		}
		if(sweep.contains("xi"))
		{
			const json& xs = sweep.at("xi");
			if(!xs.is_array()) { throw ConfigError("sweep.xi: expected an array of numbers"); }
			config.xi_grid.clear();
			for(const json& x : xs)
			{
				if(!x.is_number()) { throw ConfigError("sweep.xi: expected an array of numbers"); }
				config.xi_grid.push_back(x.get<double>());
			}
		}
		else if(sweep.contains("xi_points") || sweep.contains("xi_max"))
		{
			const std::size_t points = sweep.contains("xi_points") ? count(sweep, "sweep", "xi_points") : 41;
			const double xi_max = sweep.contains("xi_max") ? dimensionless(sweep, "sweep", "xi_max") : 0.5;
			config.xi_grid = xi_linspace(points, xi_max);
		}
		if(sweep.contains("modes"))
		{
			const json& ms = sweep.at("modes");
			if(!ms.is_array()) { throw ConfigError("sweep.modes: expected an array of strings"); }
			config.modes.clear();
			for(const json& m : ms)
			{
				if(!m.is_string()) { throw ConfigError("sweep.modes: expected an array of strings"); }
				const CycleMode mode = parse_mode(m.get<std::string>());
				if(std::find(config.modes.begin(), config.modes.end(), mode) == config.modes.end())
				{
					config.modes.push_back(mode);
				}
			}
		}
		if(sweep.contains("output")) { config.output_path = text(sweep, "sweep", "output"); }
	}

	config.validate();
	return config;
}

SweepConfig load_config(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if(!in) { throw ConfigError("cannot open config file '" + path.string() + "'"); }
	std::ostringstream buffer;
	buffer << in.rdbuf();
	return parse_config(buffer.str());
}

namespace
{

std::vector<std::string> row_flags(const CycleResult& r)
{
	std::vector<std::string> flags;
	const auto& v = r.validity;
	if(v.adiabatic_warning) { flags.emplace_back("adiabatic_regime"); }
	if(v.lamb_dicke_violation) { flags.emplace_back("lamb_dicke"); }
	if(v.truncation_unconverged) { flags.emplace_back("truncation_unconverged"); }
	return flags;
}

void fill_row(SweepRow& row, const std::function<CycleResult()>& compute)
{
	try
	{
		row.result = compute();
		row.flags = row_flags(*row.result);
	}
	catch(const std::exception& e)
	{
		row.error = e.what();
		row.flags = {"error"};
	}
}

bool row_less(const SweepRow& a, const SweepRow& b)
{
	if(a.mode != b.mode) { return a.mode < b.mode; }
	return a.xi < b.xi;
}

} // namespace

SweepReport run_sweep(const SweepConfig& config, const SweepOptions& options)
{
	config.validate();

	std::vector<SweepRow> rows;
	for(CycleMode mode : config.modes)
	{
		for(double xi : config.xi_grid)
		{
			SweepRow row;
			row.mode = mode;
			row.xi = xi;
			rows.push_back(std::move(row));
		}
	}
	std::sort(rows.begin(), rows.end(), row_less);

	std::vector<std::size_t> light;
	std::vector<std::size_t> full;
	for(std::size_t i = 0; i < rows.size(); ++i)
	{
		(rows[i].mode == CycleMode::Full ? full : light).push_back(i);
	}

	// Light rows are shared out to workers; each writes only its own slot.
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for(std::size_t k = next++; k < light.size(); k = next++)
		{
			SweepRow& row = rows[light[k]];
			fill_row(row, [&] {
				return row.mode == CycleMode::ClosedForm ? closed_form_efficiency(config.cycle, row.xi)
														 : run_cycle_effective(config.cycle, row.xi);
			});
		}
	};
	std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
	threads = std::min(threads, std::max<std::size_t>(light.size(), 1));
	std::vector<std::jthread> pool;
	for(std::size_t t = 1; t < threads; ++t) { pool.emplace_back(worker); }

	if(!full.empty())
	{
		std::optional<FullCycleRunner> runner;
		std::string setup_error;
		try
		{
			runner.emplace(config.cycle);
		}
		catch(const std::exception& e)
		{
			setup_error = e.what();
		}
		for(std::size_t i : full)
		{
			SweepRow& row = rows[i];
			if(!runner)
			{
				row.error = setup_error;
				row.flags = {"error"};
				continue;
			}
			fill_row(row, [&] { return runner->run(row.xi); });
		}
	}
	worker();
	pool.clear();

	SweepReport report;
	report.reference = reference_efficiencies(config.cycle);
	for(const SweepRow& row : rows)
	{
		report.flags.insert(row.flags.begin(), row.flags.end());
		if(row.failed())
		{
			++report.failures;
			continue;
		}
		const CycleResult& r = *row.result;
		report.max_first_law_residual =
			std::max(report.max_first_law_residual, std::abs(r.energies.first_law_residual()));
		report.min_adiabatic_ratio = std::min(report.min_adiabatic_ratio, r.validity.adiabatic_ratio);
	}
	report.rows = std::move(rows);
	return report;
}

namespace
{

std::string number(double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.12g", v);
	return buf;
}

std::string csv_field(const std::string& s)
{
	if(s.find_first_of(",\"\r\n") == std::string::npos) { return s; }
	std::string out = "\"";
	for(char ch : s)
	{
		if(ch == '"') { out += '"'; }
		out += ch;
	}
	return out + "\"";
}

} // namespace

void emit_csv(std::vector<SweepRow> rows, const ReferenceEfficiencies& reference, std::ostream& out)
{
	if(rows.empty()) { throw PreconditionError("emit_csv: no rows to write"); }
	std::stable_sort(rows.begin(), rows.end(), row_less);

	const std::string eta_otto = number(reference.otto);
	const std::string eta_carnot = reference.carnot ? number(*reference.carnot) : "";
	out << kCsvHeader << '\n';
	for(const SweepRow& row : rows)
	{
		std::string flags;
		for(const std::string& f : row.flags) { flags += (flags.empty() ? "" : ";") + f; }
		if(row.failed()) { flags += (flags.empty() ? "" : ";") + ("message=" + row.error); }

		out << number(row.xi) << ',' << to_string(row.mode) << ',';
		if(row.failed()) { out << "error,,,,,"; }
		else
		{
			const CycleResult& r = *row.result;
			out << to_string(r.regime) << ',' << (r.efficiency ? number(*r.efficiency) : "") << ','
				<< number(r.energies.w_net()) << ',' << number(r.energies.q_hot) << ','
				<< number(r.energies.q_cold) << ',';
		}
		out << eta_otto << ',' << eta_carnot << ',' << csv_field(flags) << '\n';
	}
}

void emit_csv(const std::vector<SweepRow>& rows, const ReferenceEfficiencies& reference,
	const std::filesystem::path& path)
{
	std::ofstream out(path, std::ios::binary);
	if(!out) { throw std::runtime_error("emit_csv: cannot open '" + path.string() + "' for writing"); }
	emit_csv(rows, reference, out);
	out.flush();
	if(!out) { throw std::runtime_error("emit_csv: write to '" + path.string() + "' failed"); }
}

} // namespace ionotto
