#pragma once

// Configuration files, xi sweeps over the cycle modes and CSV output.
//
// Config layout (JSON):
//   engine: omega_cold, omega_hot, omega_m, kappa, drive_rabi (frequencies),
//           lambda (dimensionless), optional fock_dim
//   cold, hot: kind, gamma (frequency), n_R, optional r, optional statistics
//   sweep: optional xi (explicit list) or xi_points / xi_max, modes, output
// Every physical quantity is an object {"value": <number>, "unit": <string>}.

#include "ionotto/otto_cycle.hpp"

#include <filesystem>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ionotto
{

/// Bad configuration: parse failure, unknown key, unit outside the whitelist
/// or a violated invariant.
class ConfigError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

struct SweepConfig
{
	CycleConfig cycle;
	std::vector<double> xi_grid;
	std::vector<CycleMode> modes{CycleMode::ClosedForm, CycleMode::Effective, CycleMode::Full};
	std::string output_path = "sweep.csv";

	/// Throws ConfigError naming the violated invariant.
	void validate() const;
};

/// `points` evenly spaced values on [0, xi_max].
[[nodiscard]] std::vector<double> xi_linspace(std::size_t points, double xi_max = 0.5);

/// Scale factor to rad/us for a frequency unit: rad_per_s, rad_per_ms,
/// rad_per_us, rad_per_ns or rad_per_ps.
[[nodiscard]] double frequency_unit_scale(const std::string& unit);

[[nodiscard]] CycleMode parse_mode(const std::string& name);

[[nodiscard]] SweepConfig parse_config(const std::string& text);
[[nodiscard]] SweepConfig load_config(const std::filesystem::path& path);

struct SweepRow
{
	CycleMode mode = CycleMode::ClosedForm;
	double xi = 0.0;
	std::optional<CycleResult> result;
	std::string error;
	std::vector<std::string> flags;

	[[nodiscard]] bool failed() const { return !result.has_value(); }
};

struct SweepReport
{
	/// Sorted by (mode, xi).
	std::vector<SweepRow> rows;
	ReferenceEfficiencies reference;
	std::size_t failures = 0;
	std::set<std::string> flags;
	double max_first_law_residual = 0.0;
	double min_adiabatic_ratio = std::numeric_limits<double>::infinity();
};

struct SweepOptions
{
	/// Worker threads for ClosedForm and Effective rows; 0 picks the hardware count.
	std::size_t threads = 0;
};

[[nodiscard]] SweepReport run_sweep(const SweepConfig& config, const SweepOptions& options = {});

inline constexpr const char* kCsvHeader = "xi,mode,regime,eta,W_net,Q_hot,Q_cold,eta_otto,eta_carnot,flags";

/// Rows are written sorted by (mode, xi) whatever their input order.
void emit_csv(std::vector<SweepRow> rows, const ReferenceEfficiencies& reference, std::ostream& out);
void emit_csv(const std::vector<SweepRow>& rows, const ReferenceEfficiencies& reference,
	const std::filesystem::path& path);

} // namespace ionotto
