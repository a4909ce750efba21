#pragma once

// Dense operator algebra for composite ion Hilbert spaces.
//
// Subsystem order is fixed: [electronic, mode_x, mode_y] for the two-level
// ion and [electronic, mode] for the V-type variant. Electronic basis index 0
// is |g>, index 1 is |e> (index 2 is |f> for the V system); sigma_z has |e>
// as its +1 eigenvector.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace ionotto
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Thrown when an argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical procedure fails (non-finite values, no convergence,
/// degenerate null space).
class NumericalError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Ordered subsystem dimensions of a tensor-product space.
class SpaceLayout
{
public:
	SpaceLayout() = default;
	SpaceLayout(std::initializer_list<std::size_t> dims);
	explicit SpaceLayout(std::vector<std::size_t> dims);

	[[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }
	[[nodiscard]] std::size_t size() const { return dims_.size(); }
	[[nodiscard]] std::size_t dim(std::size_t subsystem) const { return dims_.at(subsystem); }
	/// Product of all subsystem dimensions.
	[[nodiscard]] std::size_t total() const;

	bool operator==(const SpaceLayout&) const = default;

private:
	std::vector<std::size_t> dims_;
};

[[nodiscard]] ComplexMatrix identity(std::size_t n);

/// Standard Kronecker product; entry [(i*rb+k),(j*cb+l)] = a[i,j]*b[k,l].
[[nodiscard]] ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
[[nodiscard]] SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

/// Places `op` on subsystem `target` with identities elsewhere.
[[nodiscard]] ComplexMatrix embed(const ComplexMatrix& op, const SpaceLayout& layout, std::size_t target);

/// Reduced state over the subsystems listed in `keep` (in layout order).
[[nodiscard]] ComplexMatrix partial_trace(const ComplexMatrix& rho, const SpaceLayout& layout,
	std::vector<std::size_t> keep);

/// Truncated annihilation operator: a[n-1, n] = sqrt(n).
[[nodiscard]] ComplexMatrix bosonic_lowering(std::size_t n_max);

/// exp(-i h t) from the eigendecomposition of a Hermitian h.
[[nodiscard]] ComplexMatrix hermitian_propagator(const ComplexMatrix& h, double t);

[[nodiscard]] double hermiticity_deviation(const ComplexMatrix& m);
[[nodiscard]] double unitarity_deviation(const ComplexMatrix& u);
[[nodiscard]] bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);
[[nodiscard]] bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);

/// Smallest eigenvalue of the Hermitian part of m.
[[nodiscard]] double min_eigenvalue(const ComplexMatrix& m);
/// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
[[nodiscard]] double trace_norm(const ComplexMatrix& m);

[[nodiscard]] SparseMatrix to_sparse(const ComplexMatrix& m, double drop = 0.0);

/// Two-level operators in the (g, e) basis.
namespace qubit
{
[[nodiscard]] ComplexMatrix sigma_z();
/// |g><e|
[[nodiscard]] ComplexMatrix lowering();
/// |e><g|
[[nodiscard]] ComplexMatrix raising();
[[nodiscard]] ComplexMatrix ground_projector();
[[nodiscard]] ComplexMatrix excited_projector();
} // namespace qubit

/// |i><j| on a d-level space.
[[nodiscard]] ComplexMatrix transition(std::size_t d, std::size_t i, std::size_t j);
/// |k><k| on a d-level space.
[[nodiscard]] ComplexMatrix projector(std::size_t d, std::size_t k);

} // namespace ionotto
