#include "ionotto/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ionotto
{

SpaceLayout::SpaceLayout(std::initializer_list<std::size_t> dims) : SpaceLayout(std::vector<std::size_t>(dims)) {}

SpaceLayout::SpaceLayout(std::vector<std::size_t> dims) : dims_{std::move(dims)}
{
	for(auto d : dims_)
	{
		if(d == 0) { throw PreconditionError("SpaceLayout: subsystem dimension must be positive"); }
	}
}

std::size_t SpaceLayout::total() const
{
	return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>{});
}

ComplexMatrix identity(std::size_t n)
{
	return ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b)
{
	const Eigen::Index rb = b.rows();
	const Eigen::Index cb = b.cols();
	ComplexMatrix out(a.rows() * rb, a.cols() * cb);
	for(Eigen::Index i = 0; i < a.rows(); ++i)
	{
		for(Eigen::Index j = 0; j < a.cols(); ++j)
		{
			out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
		}
	}
	return out;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b)
{
	std::vector<Eigen::Triplet<Complex>> triplets;
	triplets.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
	for(Eigen::Index ka = 0; ka < a.outerSize(); ++ka)
	{
		for(SparseMatrix::InnerIterator ia(a, ka); ia; ++ia)
		{
			for(Eigen::Index kb = 0; kb < b.outerSize(); ++kb)
			{
				for(SparseMatrix::InnerIterator ib(b, kb); ib; ++ib)
				{
					triplets.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
						ia.value() * ib.value());
				}
			}
		}
	}
	SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
	out.setFromTriplets(triplets.begin(), triplets.end());
	return out;
}

ComplexMatrix embed(const ComplexMatrix& op, const SpaceLayout& layout, std::size_t target)
{
	if(target >= layout.size()) { throw PreconditionError("embed: target subsystem out of range"); }
	if(static_cast<std::size_t>(op.rows()) != layout.dim(target) || op.rows() != op.cols())
	{
		throw PreconditionError("embed: operator dimension does not match the target subsystem");
	}
	ComplexMatrix out = ComplexMatrix::Identity(1, 1);
	for(std::size_t s = 0; s < layout.size(); ++s)
	{
		out = kron(out, s == target ? op : identity(layout.dim(s)));
	}
	return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const SpaceLayout& layout, std::vector<std::size_t> keep)
{
	const std::size_t total = layout.total();
	if(rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != total)
	{
		throw PreconditionError("partial_trace: state dimension does not match layout");
	}
	std::sort(keep.begin(), keep.end());
	keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
	for(auto k : keep)
	{
		if(k >= layout.size()) { throw PreconditionError("partial_trace: kept subsystem out of range"); }
	}

	const std::size_t n_sub = layout.size();
	std::vector<bool> kept(n_sub, false);
	for(auto k : keep) { kept[k] = true; }

	// Split each global index into (kept index, traced index), both mixed-radix
	// with subsystem 0 most significant.
	std::vector<std::size_t> kept_part(total), traced_part(total);
	std::size_t kept_dim = 1;
	for(auto k : keep) { kept_dim *= layout.dim(k); }
	for(std::size_t idx = 0; idx < total; ++idx)
	{
		std::size_t rem = idx;
		std::size_t kmul = 1, tmul = 1, kval = 0, tval = 0;
		for(std::size_t s = n_sub; s-- > 0;)
		{
			const std::size_t d = layout.dim(s);
			const std::size_t digit = rem % d;
			rem /= d;
			if(kept[s])
			{
				kval += digit * kmul;
				kmul *= d;
			}
			else
			{
				tval += digit * tmul;
				tmul *= d;
			}
		}
		kept_part[idx] = kval;
		traced_part[idx] = tval;
	}

	ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kept_dim), static_cast<Eigen::Index>(kept_dim));
	for(std::size_t c = 0; c < total; ++c)
	{
		for(std::size_t r = 0; r < total; ++r)
		{
			if(traced_part[r] == traced_part[c])
			{
				out(static_cast<Eigen::Index>(kept_part[r]), static_cast<Eigen::Index>(kept_part[c])) +=
					rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
			}
		}
	}
	return out;
}

ComplexMatrix bosonic_lowering(std::size_t n_max)
{
	if(n_max < 2) { throw PreconditionError("bosonic_lowering: n_max must be at least 2"); }
	const auto n = static_cast<Eigen::Index>(n_max);
	ComplexMatrix a = ComplexMatrix::Zero(n, n);
	for(Eigen::Index k = 1; k < n; ++k) { a(k - 1, k) = std::sqrt(static_cast<double>(k)); }
	return a;
}

ComplexMatrix hermitian_propagator(const ComplexMatrix& h, double t)
{
	if(h.rows() != h.cols()) { throw PreconditionError("hermitian_propagator: matrix must be square"); }
	if(!is_hermitian(h, 1e-10)) { throw PreconditionError("hermitian_propagator: generator is not Hermitian"); }
	const ComplexMatrix sym = 0.5 * (h + h.adjoint());
	const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
	if(es.info() != Eigen::Success) { throw NumericalError("hermitian_propagator: eigendecomposition failed"); }
	ComplexVector phases(es.eigenvalues().size());
	for(Eigen::Index k = 0; k < phases.size(); ++k)
	{
		phases(k) = std::exp(-kI * (es.eigenvalues()(k) * t));
	}
	return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double hermiticity_deviation(const ComplexMatrix& m)
{
	if(m.size() == 0) { return 0.0; }
	return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_deviation(const ComplexMatrix& u)
{
	if(u.size() == 0) { return 0.0; }
	return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol)
{
	return m.rows() == m.cols() && hermiticity_deviation(m) <= tol;
}

bool is_unitary(const ComplexMatrix& u, double tol)
{
	return u.rows() == u.cols() && unitarity_deviation(u) <= tol;
}

double min_eigenvalue(const ComplexMatrix& m)
{
	const ComplexMatrix sym = 0.5 * (m + m.adjoint());
	const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
	return es.eigenvalues().minCoeff();
}

double trace_norm(const ComplexMatrix& m)
{
	const ComplexMatrix sym = 0.5 * (m + m.adjoint());
	const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
	return es.eigenvalues().cwiseAbs().sum();
}

SparseMatrix to_sparse(const ComplexMatrix& m, double drop)
{
	std::vector<Eigen::Triplet<Complex>> triplets;
	for(Eigen::Index c = 0; c < m.cols(); ++c)
	{
		for(Eigen::Index r = 0; r < m.rows(); ++r)
		{
			if(std::abs(m(r, c)) > drop) { triplets.emplace_back(r, c, m(r, c)); }
		}
	}
	SparseMatrix out(m.rows(), m.cols());
	out.setFromTriplets(triplets.begin(), triplets.end());
	return out;
}

ComplexMatrix transition(std::size_t d, std::size_t i, std::size_t j)
{
	if(i >= d || j >= d) { throw PreconditionError("transition: level index out of range"); }
	ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
	m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
	return m;
}

ComplexMatrix projector(std::size_t d, std::size_t k) { return transition(d, k, k); }

namespace qubit
{
ComplexMatrix sigma_z()
{
	ComplexMatrix m = ComplexMatrix::Zero(2, 2);
	m(0, 0) = -1.0;
	m(1, 1) = 1.0;
	return m;
}
ComplexMatrix lowering() { return transition(2, 0, 1); }
ComplexMatrix raising() { return transition(2, 1, 0); }
ComplexMatrix ground_projector() { return projector(2, 0); }
ComplexMatrix excited_projector() { return projector(2, 1); }
} // namespace qubit

} // namespace ionotto
