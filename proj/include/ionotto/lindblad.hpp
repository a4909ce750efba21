#pragma once

#include "ionotto/operators.hpp"

#include <memory>
#include <vector>

namespace ionotto
{

/// One dissipation channel contributing (rate/2) * D[op], with
/// D[L]rho = 2 L rho L^dag - L^dag L rho - rho L^dag L.
struct Channel
{
	double rate = 0.0;
	ComplexMatrix op;
};

/// Hamiltonian (angular frequency units, hbar = 1) plus dissipation channels.
class LindbladModel
{
public:
	LindbladModel(ComplexMatrix hamiltonian, std::vector<Channel> channels, SpaceLayout layout);

	[[nodiscard]] const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
	[[nodiscard]] const std::vector<Channel>& channels() const { return channels_; }
	[[nodiscard]] const SpaceLayout& layout() const { return layout_; }
	[[nodiscard]] Eigen::Index dim() const { return hamiltonian_.rows(); }

private:
	ComplexMatrix hamiltonian_;
	std::vector<Channel> channels_;
	SpaceLayout layout_;
};

struct EvolutionReport
{
	ComplexMatrix final_state;
	std::size_t steps_taken = 0;
	double max_trace_drift = 0.0;
	double min_eigenvalue = 0.0;
};

/// d rho / dt for the model at state rho.
[[nodiscard]] ComplexMatrix apply_liouvillian(const LindbladModel& model, const ComplexMatrix& rho);

/// Superoperator acting on column-major vec(rho).
[[nodiscard]] ComplexMatrix liouvillian_matrix(const LindbladModel& model);
[[nodiscard]] SparseMatrix liouvillian_sparse(const LindbladModel& model);

/// Adaptive Dormand-Prince 5(4) integration of the master equation to time t.
/// `tol` is the relative local error bound per step (absolute bound tol*1e-3).
/// The state is re-symmetrized after every accepted step.
[[nodiscard]] EvolutionReport evolve(const LindbladModel& model, const ComplexMatrix& rho0, double t,
	double tol = 1e-9);

/// Trace-one null vector of the dense Liouvillian, from its smallest singular
/// value. Throws NumericalError if the null space is not one-dimensional.
[[nodiscard]] ComplexMatrix steady_state(const LindbladModel& model);

/// tr(op rho).
[[nodiscard]] Complex expectation_complex(const ComplexMatrix& op, const ComplexMatrix& rho);
/// Real tr(op rho) for Hermitian op; the imaginary part must be <= 1e-9.
[[nodiscard]] double expectation(const ComplexMatrix& op, const ComplexMatrix& rho);

enum class EquilibrationMethod
{
	Auto,
	/// Explicit Runge-Kutta over each window.
	Integrate,
	/// Implicit Euler sub-steps with a sparse LU of (I - h L); used for stiff
	/// joint ion models where kappa exceeds the effective rates by ~1e4.
	Implicit,
};

struct EquilibrationOptions
{
	double window = 1.0;
	std::size_t max_windows = 8;
	double threshold = 1e-8;
	double tol = 1e-9;
	EquilibrationMethod method = EquilibrationMethod::Auto;
	std::size_t implicit_substeps = 8;
	/// Auto picks Implicit above this Hilbert-space dimension.
	Eigen::Index implicit_above_dim = 32;
};

struct EquilibrationReport
{
	ComplexMatrix state;
	std::size_t windows = 0;
	double elapsed = 0.0;
	double last_change = 0.0;
	double max_trace_drift = 0.0;
	double min_eigenvalue = 0.0;
	EquilibrationMethod method_used = EquilibrationMethod::Integrate;
};

/// Evolves in windows until the trace-norm change over one window falls below
/// `threshold`. Throws NumericalError when the window budget runs out.
///
/// Construction does the expensive part (sparse LU for the implicit method),
/// so one Equilibrator can be reused for many initial states.
class Equilibrator
{
public:
	Equilibrator(const LindbladModel& model, EquilibrationOptions options);
	~Equilibrator();
	Equilibrator(Equilibrator&&) noexcept;
	Equilibrator& operator=(Equilibrator&&) noexcept;

	[[nodiscard]] EquilibrationReport run(const ComplexMatrix& rho0) const;
	[[nodiscard]] EquilibrationMethod method() const { return method_; }
	[[nodiscard]] const EquilibrationOptions& options() const { return options_; }

private:
	struct Impl;
	std::unique_ptr<Impl> impl_;
	EquilibrationOptions options_;
	EquilibrationMethod method_;
	Eigen::Index dim_;
};

[[nodiscard]] EquilibrationReport equilibrate(const LindbladModel& model, const ComplexMatrix& rho0,
	const EquilibrationOptions& options);

/// Checks Hermiticity, unit trace and positivity of a density matrix.
void require_density_matrix(const ComplexMatrix& rho, double tol, const char* context);

} // namespace ionotto
