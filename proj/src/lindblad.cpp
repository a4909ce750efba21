#include "ionotto/lindblad.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <sstream>

namespace ionotto
{

LindbladModel::LindbladModel(ComplexMatrix hamiltonian, std::vector<Channel> channels, SpaceLayout layout)
	: hamiltonian_{std::move(hamiltonian)}, channels_{std::move(channels)}, layout_{std::move(layout)}
{
	if(hamiltonian_.rows() != hamiltonian_.cols())
	{
		throw PreconditionError("LindbladModel: Hamiltonian must be square");
	}
	if(static_cast<std::size_t>(hamiltonian_.rows()) != layout_.total())
	{
		throw PreconditionError("LindbladModel: Hamiltonian dimension does not match layout");
	}
	if(!is_hermitian(hamiltonian_, 1e-10)) { throw PreconditionError("LindbladModel: Hamiltonian is not Hermitian"); }
	for(const auto& ch : channels_)
	{
		if(!(ch.rate >= 0.0) || !std::isfinite(ch.rate))
		{
			throw PreconditionError("LindbladModel: channel rates must be finite and non-negative");
		}
		if(ch.op.rows() != hamiltonian_.rows() || ch.op.cols() != hamiltonian_.cols())
		{
			throw PreconditionError("LindbladModel: collapse operator dimension mismatch");
		}
	}
}

namespace
{

/// Precomputed sparse pieces of the right-hand side
/// d rho = X + X^dag, X = -i H_eff rho + 1/2 sum rate L rho L^dag,
/// which holds for Hermitian rho.
struct SparseGenerator
{
	SparseMatrix h_eff;
	std::vector<SparseMatrix> ops;
	std::vector<SparseMatrix> ops_adj;
	std::vector<double> rates;

	explicit SparseGenerator(const LindbladModel& model)
	{
		ComplexMatrix heff = model.hamiltonian();
		for(const auto& ch : model.channels())
		{
			if(ch.rate == 0.0) { continue; }
			heff -= 0.5 * kI * ch.rate * (ch.op.adjoint() * ch.op);
			ops.push_back(to_sparse(ch.op));
			ops_adj.push_back(to_sparse(ch.op.adjoint()));
			rates.push_back(ch.rate);
		}
		h_eff = to_sparse(heff);
	}

	[[nodiscard]] ComplexMatrix operator()(const ComplexMatrix& rho) const
	{
		ComplexMatrix x = -kI * (h_eff * rho);
		for(std::size_t k = 0; k < ops.size(); ++k)
		{
			const ComplexMatrix lr = ops[k] * rho;
			x.noalias() += (0.5 * rates[k]) * (lr * ops_adj[k]);
		}
		return x + x.adjoint();
	}
};

bool all_finite(const ComplexMatrix& m)
{
	return m.allFinite();
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

} // namespace

ComplexMatrix apply_liouvillian(const LindbladModel& model, const ComplexMatrix& rho)
{
	if(rho.rows() != model.dim() || rho.cols() != model.dim())
	{
		throw PreconditionError("apply_liouvillian: state dimension mismatch");
	}
	const ComplexMatrix& h = model.hamiltonian();
	ComplexMatrix out = -kI * (h * rho - rho * h);
	for(const auto& ch : model.channels())
	{
		const ComplexMatrix ldl = ch.op.adjoint() * ch.op;
		out += 0.5 * ch.rate * (2.0 * ch.op * rho * ch.op.adjoint() - ldl * rho - rho * ldl);
	}
	return out;
}

SparseMatrix liouvillian_sparse(const LindbladModel& model)
{
	// vec(A X B) = (B^T kron A) vec(X), column-major vec.
	const auto n = static_cast<std::size_t>(model.dim());
	SparseMatrix id(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
	id.setIdentity();

	const SparseMatrix h = to_sparse(model.hamiltonian());
	const SparseMatrix h_t = SparseMatrix(h.transpose());
	SparseMatrix out = (-kI) * (kron(id, h) - kron(h_t, id));
	for(const auto& ch : model.channels())
	{
		if(ch.rate == 0.0) { continue; }
		const SparseMatrix l = to_sparse(ch.op);
		const SparseMatrix l_conj = SparseMatrix(l.conjugate());
		const SparseMatrix ldl = to_sparse(ch.op.adjoint() * ch.op);
		const SparseMatrix ldl_t = SparseMatrix(ldl.transpose());
		out += ch.rate * (kron(l_conj, l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl_t, id));
	}
	out.makeCompressed();
	return out;
}

ComplexMatrix liouvillian_matrix(const LindbladModel& model) { return ComplexMatrix(liouvillian_sparse(model)); }

Complex expectation_complex(const ComplexMatrix& op, const ComplexMatrix& rho)
{
	if(op.rows() != rho.cols() || op.cols() != rho.rows())
	{
		throw PreconditionError("expectation: dimension mismatch");
	}
	// tr(op rho) without forming the product.
	return (op.transpose().cwiseProduct(rho)).sum();
}

double expectation(const ComplexMatrix& op, const ComplexMatrix& rho)
{
	const Complex v = expectation_complex(op, rho);
	if(is_hermitian(op, 1e-10) && std::abs(v.imag()) > 1e-9)
	{
		throw NumericalError("expectation: imaginary part of a Hermitian expectation exceeds 1e-9");
	}
	return v.real();
}

void require_density_matrix(const ComplexMatrix& rho, double tol, const char* context)
{
	std::ostringstream msg;
	if(rho.rows() != rho.cols())
	{
		msg << context << ": density matrix must be square";
		throw PreconditionError(msg.str());
	}
	if(!is_hermitian(rho, tol))
	{
		msg << context << ": density matrix is not Hermitian";
		throw PreconditionError(msg.str());
	}
	if(std::abs(rho.trace() - Complex{1.0, 0.0}) > tol)
	{
		msg << context << ": density matrix trace differs from 1";
		throw PreconditionError(msg.str());
	}
	if(min_eigenvalue(rho) < -tol)
	{
		msg << context << ": density matrix is not positive semidefinite";
		throw PreconditionError(msg.str());
	}
}

namespace
{

// Dormand-Prince 5(4) tableau.
constexpr double c_a21 = 1.0 / 5.0;
constexpr std::array<double, 2> c_a3{3.0 / 40.0, 9.0 / 40.0};
constexpr std::array<double, 3> c_a4{44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
constexpr std::array<double, 4> c_a5{19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0};
constexpr std::array<double, 5> c_a6{9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
	-5103.0 / 18656.0};
constexpr std::array<double, 6> c_b5{35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
	11.0 / 84.0};
constexpr std::array<double, 7> c_b4{5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0,
	-92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0};

struct RkOutcome
{
	ComplexMatrix state;
	std::size_t steps = 0;
	double max_trace_drift = 0.0;
};

RkOutcome integrate_dopri(const SparseGenerator& f, const ComplexMatrix& rho0, double t, double rtol, double atol)
{
	RkOutcome out{rho0, 0, 0.0};
	if(t <= 0.0) { return out; }

	const Complex trace0 = rho0.trace();
	ComplexMatrix y = rho0;
	ComplexMatrix k1 = f(y);

	const double scale0 = atol + rtol * y.cwiseAbs().maxCoeff();
	const double deriv = k1.cwiseAbs().maxCoeff();
	double h = deriv > 0.0 ? 0.01 * scale0 / deriv : t;
	h = std::clamp(h, 1e-12 * t, t);

	double time = 0.0;
	std::size_t rejected_in_row = 0;
	while(time < t)
	{
		if(time + h > t) { h = t - time; }

		const ComplexMatrix k2 = f(y + h * (c_a21 * k1));
		const ComplexMatrix k3 = f(y + h * (c_a3[0] * k1 + c_a3[1] * k2));
		const ComplexMatrix k4 = f(y + h * (c_a4[0] * k1 + c_a4[1] * k2 + c_a4[2] * k3));
		const ComplexMatrix k5 = f(y + h * (c_a5[0] * k1 + c_a5[1] * k2 + c_a5[2] * k3 + c_a5[3] * k4));
		const ComplexMatrix k6 =
			f(y + h * (c_a6[0] * k1 + c_a6[1] * k2 + c_a6[2] * k3 + c_a6[3] * k4 + c_a6[4] * k5));
		const ComplexMatrix y5 =
			y + h * (c_b5[0] * k1 + c_b5[2] * k3 + c_b5[3] * k4 + c_b5[4] * k5 + c_b5[5] * k6);
		const ComplexMatrix k7 = f(y5);
		const ComplexMatrix err = h * ((c_b5[0] - c_b4[0]) * k1 + (c_b5[2] - c_b4[2]) * k3 +
			(c_b5[3] - c_b4[3]) * k4 + (c_b5[4] - c_b4[4]) * k5 + (c_b5[5] - c_b4[5]) * k6 - c_b4[6] * k7);

		if(!all_finite(y5) || !all_finite(err))
		{
			throw NumericalError("evolve: non-finite entries during integration");
		}

		double err_norm = 0.0;
		for(Eigen::Index c = 0; c < y.cols(); ++c)
		{
			for(Eigen::Index r = 0; r < y.rows(); ++r)
			{
				const double sc = atol + rtol * std::max(std::abs(y(r, c)), std::abs(y5(r, c)));
				err_norm = std::max(err_norm, std::abs(err(r, c)) / sc);
			}
		}

		if(err_norm <= 1.0)
		{
			time += h;
			y = hermitize(y5);
			k1 = f(y);
			++out.steps;
			rejected_in_row = 0;
			out.max_trace_drift = std::max(out.max_trace_drift, std::abs(y.trace() - trace0));
		}
		else if(++rejected_in_row > 50)
		{
			throw NumericalError("evolve: step size underflow");
		}

		const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
		h *= factor;
		if(h < 1e-14 * t && time < t) { throw NumericalError("evolve: step size underflow"); }
	}
	out.state = std::move(y);
	return out;
}

} // namespace

EvolutionReport evolve(const LindbladModel& model, const ComplexMatrix& rho0, double t, double tol)
{
	if(!(tol > 0.0 && tol <= 1e-4)) { throw PreconditionError("evolve: tol must lie in (0, 1e-4]"); }
	if(!(t >= 0.0) || !std::isfinite(t)) { throw PreconditionError("evolve: time must be finite and non-negative"); }
	if(rho0.rows() != model.dim() || rho0.cols() != model.dim())
	{
		throw PreconditionError("evolve: state dimension mismatch");
	}
	require_density_matrix(rho0, 1e-10, "evolve");

	const SparseGenerator f(model);
	auto outcome = integrate_dopri(f, rho0, t, tol, tol * 1e-3);

	EvolutionReport report;
	report.steps_taken = outcome.steps;
	report.max_trace_drift = outcome.max_trace_drift;
	report.min_eigenvalue = min_eigenvalue(outcome.state);
	report.final_state = std::move(outcome.state);
	return report;
}

ComplexMatrix steady_state(const LindbladModel& model)
{
	if(model.channels().empty()) { throw PreconditionError("steady_state: model has no dissipation channels"); }

	const ComplexMatrix l = liouvillian_matrix(model);
	const Eigen::BDCSVD<ComplexMatrix> svd(l, Eigen::ComputeFullV);
	const auto& s = svd.singularValues();
	const Eigen::Index m = s.size();
	const double cutoff = std::max(1e-300, 1e-10 * s(0));

	Eigen::Index null_dim = 0;
	for(Eigen::Index k = 0; k < m; ++k)
	{
		if(s(k) <= cutoff) { ++null_dim; }
	}
	if(null_dim != 1)
	{
		std::ostringstream msg;
		msg << "steady_state: null space dimension is " << null_dim << " (expected 1)";
		throw NumericalError(msg.str());
	}

	const ComplexVector v = svd.matrixV().col(m - 1);
	const auto n = model.dim();
	ComplexMatrix rho = Eigen::Map<const ComplexMatrix>(v.data(), n, n);
	const Complex tr = rho.trace();
	if(std::abs(tr) < 1e-14) { throw NumericalError("steady_state: null vector has vanishing trace"); }
	rho /= tr;
	return hermitize(rho);
}

namespace
{

struct ImplicitStepper
{
	Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;

	ImplicitStepper(const LindbladModel& model, double h)
	{
		const SparseMatrix l = liouvillian_sparse(model);
		SparseMatrix a(l.rows(), l.cols());
		a.setIdentity();
		a -= h * l;
		a.makeCompressed();
		lu.analyzePattern(a);
		lu.factorize(a);
		if(lu.info() != Eigen::Success) { throw NumericalError("equilibrate: sparse LU factorization failed"); }
	}

	[[nodiscard]] ComplexMatrix step(const ComplexMatrix& rho) const
	{
		const auto n = rho.rows();
		const ComplexVector x = lu.solve(Eigen::Map<const ComplexVector>(rho.data(), n * n));
		return Eigen::Map<const ComplexMatrix>(x.data(), n, n);
	}
};

} // namespace

struct Equilibrator::Impl
{
	std::unique_ptr<SparseGenerator> generator;
	std::unique_ptr<ImplicitStepper> stepper;
};

Equilibrator::Equilibrator(const LindbladModel& model, EquilibrationOptions options)
	: impl_{std::make_unique<Impl>()}, options_{options}, method_{options.method}, dim_{model.dim()}
{
	if(!(options_.window > 0.0)) { throw PreconditionError("equilibrate: window must be positive"); }
	if(options_.max_windows == 0) { throw PreconditionError("equilibrate: window budget must be positive"); }
	options_.implicit_substeps = std::max<std::size_t>(1, options_.implicit_substeps);
	if(method_ == EquilibrationMethod::Auto)
	{
		method_ = model.dim() > options_.implicit_above_dim ? EquilibrationMethod::Implicit
															: EquilibrationMethod::Integrate;
	}
	if(method_ == EquilibrationMethod::Integrate) { impl_->generator = std::make_unique<SparseGenerator>(model); }
	else
	{
		impl_->stepper = std::make_unique<ImplicitStepper>(
			model, options_.window / static_cast<double>(options_.implicit_substeps));
	}
}

Equilibrator::~Equilibrator() = default;
Equilibrator::Equilibrator(Equilibrator&&) noexcept = default;
Equilibrator& Equilibrator::operator=(Equilibrator&&) noexcept = default;

EquilibrationReport Equilibrator::run(const ComplexMatrix& rho0) const
{
	if(rho0.rows() != dim_ || rho0.cols() != dim_) { throw PreconditionError("equilibrate: state dimension mismatch"); }
	require_density_matrix(rho0, 1e-10, "equilibrate");

	EquilibrationReport report;
	report.method_used = method_;
	const Complex trace0 = rho0.trace();
	ComplexMatrix rho = rho0;

	for(std::size_t w = 0; w < options_.max_windows; ++w)
	{
		ComplexMatrix next;
		if(impl_->generator)
		{
			auto outcome = integrate_dopri(*impl_->generator, rho, options_.window, options_.tol, options_.tol * 1e-3);
			next = std::move(outcome.state);
		}
		else
		{
			next = rho;
			for(std::size_t k = 0; k < options_.implicit_substeps; ++k) { next = impl_->stepper->step(next); }
			next = hermitize(next);
			if(!all_finite(next)) { throw NumericalError("equilibrate: non-finite entries during integration"); }
		}
		report.max_trace_drift = std::max(report.max_trace_drift, std::abs(next.trace() - trace0));
		report.last_change = trace_norm(next - rho);
		rho = std::move(next);
		report.windows = w + 1;
		report.elapsed += options_.window;
		if(report.last_change < options_.threshold)
		{
			report.min_eigenvalue = min_eigenvalue(rho);
			report.state = std::move(rho);
			return report;
		}
	}
	std::ostringstream msg;
	msg << "equilibrate: equilibration not reached within " << options_.max_windows
		<< " windows (last trace-norm change " << report.last_change << ")";
	throw NumericalError(msg.str());
}

EquilibrationReport equilibrate(const LindbladModel& model, const ComplexMatrix& rho0,
	const EquilibrationOptions& options)
{
	if(rho0.rows() != model.dim() || rho0.cols() != model.dim())
	{
		throw PreconditionError("equilibrate: state dimension mismatch");
	}
	return Equilibrator(model, options).run(rho0);
}

} // namespace ionotto
