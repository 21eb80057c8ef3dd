#include "nirvana/factorize.hpp"

#include "nirvana/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nirvana
{

Factorization factorization_from_labeling(OrthonormalBasis basis, TensorSplit split, std::vector<MultiIndex> labels)
{
	return Factorization(std::move(basis), std::move(split), std::move(labels));
}

// ---------------------------------------------------------------------------
// Minimal-interaction projection

CMatrix LocalDecomposition::reconstruct() const
{
	const auto p = h1.rows();
	const auto q = h2.rows();
	return kron(h1, CMatrix::Identity(q, q)) + kron(CMatrix::Identity(p, p), h2) -
	       c * CMatrix::Identity(p * q, p * q) + hint;
}

LocalDecomposition local_projection(const CMatrix& h, const TensorSplit& split)
{
	if(!split.bipartite())
		throw DimensionError("local projection requires a bipartite split");
	const auto p = static_cast<Eigen::Index>(split.factor_dim(0));
	const auto q = static_cast<Eigen::Index>(split.factor_dim(1));
	LocalDecomposition d{partial_trace(h, split, 0) / static_cast<double>(q),
	                     partial_trace(h, split, 1) / static_cast<double>(p),
	                     h.trace().real() / static_cast<double>(p * q), CMatrix(), split};
	d.hint = h - kron(d.h1, CMatrix::Identity(q, q)) - kron(CMatrix::Identity(p, p), d.h2) +
	         d.c * CMatrix::Identity(p * q, p * q);
	return d;
}

LocalDecomposition nearest_local_decomposition(const Operator& h, const Factorization& f)
{
	if(!h.is_hermitian())
		throw NotHermitianError("nearest_local_decomposition requires a hermitian operator");
	if(h.dim() != f.dim())
		throw DimensionError("nearest_local_decomposition: operator and factorization dimensions differ");
	return local_projection(f.express(h.matrix()), f.split());
}

double interaction_action(const Operator& h, const Factorization& f, const State& psi)
{
	const auto d = nearest_local_decomposition(h, f);
	return (d.hint * f.coordinates(psi.amplitudes())).norm();
}

// ---------------------------------------------------------------------------
// Reports

std::string_view to_string(FactorizationKind kind)
{
	switch(kind)
	{
	case FactorizationKind::static_nirvana: return "static-nirvana";
	case FactorizationKind::samsara_branches: return "samsara-branches";
	case FactorizationKind::dynamic_nirvana: return "dynamic-nirvana";
	case FactorizationKind::optimized: return "optimized";
	}
	return "unknown";
}

bool FactorizationReport::all_checks_pass() const
{
	return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second; });
}

const Factorization& FactorizationReport::static_factorization() const
{
	if(const auto* f = std::get_if<Factorization>(&factorization))
		return *f;
	throw Error("report holds a time-dependent factorization");
}

namespace
{

TensorSplit story_split(const TensorSplit& split)
{
	return split.bipartite() ? split : split.bipartition(1);
}

double max_of(const std::vector<double>& v)
{
	return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

} // namespace

FactorizationReport static_nirvana_factorization(const Operator& h, std::size_t p, std::size_t q, double tol)
{
	if(p < 2 || q < 2 || p * q != h.dim())
		throw DimensionError("static_nirvana_factorization: need dim = p q with p, q >= 2 (dim " +
		                     std::to_string(h.dim()) + ")");
	const auto es = eigh(h);
	const std::vector<double> energies(es.values.data(), es.values.data() + es.values.size());
	const TensorSplit split({p, q});

	FactorizationReport report;
	report.sumset = sumset_decompose(energies, p, q, tol);

	std::vector<MultiIndex> labels(h.dim());
	if(report.sumset)
	{
		const auto& e1 = report.sumset->factors[0];
		const auto& e2 = report.sumset->factors[1];
		// Pairs sorted by sum (ties lexicographic) zipped with ascending
		// eigenvalues: the lexicographically smallest consistent assignment.
		std::vector<MultiIndex> pairs;
		for(std::size_t i = 0; i < p; ++i)
			for(std::size_t j = 0; j < q; ++j)
				pairs.push_back({i, j});
		std::stable_sort(pairs.begin(), pairs.end(), [&](const MultiIndex& x, const MultiIndex& y) {
			return e1[x[0]] + e2[x[1]] < e1[y[0]] + e2[y[1]];
		});
		for(std::size_t n = 0; n < pairs.size(); ++n)
			labels[n] = pairs[n];
		report.kind = FactorizationKind::static_nirvana;
	}
	else
	{
		for(std::size_t n = 0; n < h.dim(); ++n)
			labels[n] = split.multi_index(n);
		report.kind = FactorizationKind::samsara_branches;
		report.notes.push_back("no additive spectrum split at the requested tolerance; eigenvectors labeled "
		                       "row-major in ascending energy");
		report.notes.push_back("all branches are present from the beginning; the interaction only changes the "
		                       "phase speeds of the branches");
	}

	Factorization f(es.basis, split, std::move(labels));
	const auto d = nearest_local_decomposition(h, f);
	report.objective_value = d.interaction_norm();
	if(report.kind == FactorizationKind::static_nirvana)
		report.checks["interaction_vanishes"] = d.interaction_norm() <= std::max(tol, 1e-9) * (1.0 + h.frobenius_norm());
	report.factorization = std::move(f);
	return report;
}

void tell_story(FactorizationReport& report, const PiecewiseHamiltonian& h, const State& psi0,
                const std::vector<double>& times)
{
	const Factorization& f = report.static_factorization();
	auto tr = components_in_frame(trace(h, psi0, times), static_frame(f, times));
	add_drift_diagnostics(tr);
	add_entropy_diagnostic(tr);

	const TensorSplit bi = story_split(f.split());
	auto& norm = tr.diagnostics["interaction_norm"];
	auto& action = tr.diagnostics["interaction_action"];
	for(std::size_t k = 0; k < tr.size(); ++k)
	{
		const auto d = local_projection(f.express(h.at(tr.times[k])), bi);
		norm.push_back(d.interaction_norm());
		action.push_back((d.hint * tr.components[k]).norm());
	}

	report.times = tr.times;
	report.components = std::move(tr.components);
	report.story = std::move(tr.diagnostics);
	report.checks["constant_modulus"] = max_of(report.story["modulus_drift"]) <= 1e-8;
}

FactorizationReport dynamic_nirvana_factorization(const PiecewiseHamiltonian& h, const State& psi0,
                                                  const TensorSplit& split, const std::vector<double>& times)
{
	if(split.total() != h.dim())
		throw DimensionError("dynamic_nirvana_factorization: split does not match the dimension");
	auto frame = comoving_frame(h, psi0, times, split);
	auto tr = components_in_frame(trace(h, psi0, times), frame);
	add_drift_diagnostics(tr);
	add_entropy_diagnostic(tr);

	std::vector<double> later(times);
	for(auto& t : later)
		t += kApparentStep;
	const auto frame_later = comoving_frame(h, psi0, later, split);

	auto& gen_norm = tr.diagnostics["apparent_generator_norm"];
	auto& action = tr.diagnostics["apparent_interaction_action"];
	for(std::size_t k = 0; k < tr.size(); ++k)
	{
		const CMatrix k_app =
		    apparent_generator(h, frame.frame(k), frame_later.frame(k), times[k], kApparentStep);
		gen_norm.push_back(k_app.norm());
		// a single factor has no interaction part
		action.push_back(split.factors() == 1 ? 0.0
		                                      : (local_projection(k_app, story_split(split)).hint * tr.components[k]).norm());
	}

	FactorizationReport report;
	report.kind = FactorizationKind::dynamic_nirvana;
	report.objective_value = max_of(tr.diagnostics["component_drift"]);
	report.checks["coordinates_constant"] = report.objective_value <= 1e-9;
	report.checks["entropy_zero"] = max_of(tr.diagnostics["entropy"]) <= 1e-9;
	report.checks["apparent_generator_zero"] = max_of(gen_norm) <= 1e-9 * (1.0 + h.dim());
	report.checks["state_is_first_product_vector"] = true;
	for(const auto& c : tr.components)
		report.checks["state_is_first_product_vector"] =
		    report.checks["state_is_first_product_vector"] && std::abs(c(0) - 1.0) <= 1e-9;
	report.notes.push_back("the evolving state is the fixed product vector |f_1>|g_1>...; every subsystem "
	                       "sits in an eigenstate of a zero Hamiltonian");
	report.times = tr.times;
	report.components = std::move(tr.components);
	report.story = std::move(tr.diagnostics);
	report.factorization = std::move(frame);
	return report;
}

// ---------------------------------------------------------------------------
// Optimizer

std::optional<Objective> parse_objective(std::string_view name)
{
	if(name == "interaction-norm")
		return Objective::interaction_norm;
	if(name == "mean-entropy")
		return Objective::mean_entropy;
	return std::nullopt;
}

std::string_view to_string(Objective objective)
{
	return objective == Objective::interaction_norm ? "interaction-norm" : "mean-entropy";
}

std::vector<CMatrix> hermitian_generators(std::size_t dim)
{
	const auto n = static_cast<Eigen::Index>(dim);
	const double r = 1.0 / std::sqrt(2.0);
	std::vector<CMatrix> out;
	out.reserve(dim * dim);
	for(Eigen::Index k = 0; k < n; ++k)
	{
		CMatrix g = CMatrix::Zero(n, n);
		g(k, k) = 1.0;
		out.push_back(std::move(g));
	}
	for(Eigen::Index k = 0; k < n; ++k)
		for(Eigen::Index l = k + 1; l < n; ++l)
		{
			CMatrix sym = CMatrix::Zero(n, n);
			sym(k, l) = sym(l, k) = r;
			out.push_back(std::move(sym));
			CMatrix asym = CMatrix::Zero(n, n);
			asym(k, l) = cplx(0.0, -r);
			asym(l, k) = cplx(0.0, r);
			out.push_back(std::move(asym));
		}
	return out;
}

namespace
{

/// exp(i G) for hermitian G.
CMatrix exp_i(const CMatrix& g)
{
	Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (g + g.adjoint()));
	const RVector& w = solver.eigenvalues();
	CVector phases(w.size());
	for(Eigen::Index k = 0; k < w.size(); ++k)
		phases(k) = std::polar(1.0, w(k));
	return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

class ObjectiveFunction
{
public:
	ObjectiveFunction(Objective objective, const Operator& h, const State& psi0, const TensorSplit& split,
	                  const std::vector<double>& times)
	    : objective_(objective), h_(h.matrix()), split_(split)
	{
		if(objective_ == Objective::mean_entropy)
		{
			if(times.empty())
				throw Error("mean-entropy objective needs a time grid");
			for(double t : times)
				states_.push_back(propagator(h, t).matrix() * psi0.amplitudes());
		}
	}

	double operator()(const CMatrix& basis) const
	{
		if(objective_ == Objective::interaction_norm)
			return local_projection(basis.adjoint() * h_ * basis, split_).interaction_norm();
		double sum = 0.0;
		for(const auto& s : states_)
			sum += entanglement_entropy(CVector(basis.adjoint() * s), split_);
		return sum / static_cast<double>(states_.size());
	}

	/// Quantity the descent minimizes: the squared norm for interaction-norm
	/// (smooth at the optimum), the objective itself otherwise.
	double descent_value(const CMatrix& basis) const
	{
		const double v = (*this)(basis);
		return squared() ? v * v : v;
	}

	bool squared() const { return objective_ == Objective::interaction_norm; }

	/// Real residual vector r with descent_value = |r|^2 (interaction-norm only).
	RVector residual(const CMatrix& basis) const
	{
		const CMatrix hint = local_projection(basis.adjoint() * h_ * basis, split_).hint;
		RVector r(2 * hint.size());
		for(Eigen::Index k = 0; k < hint.size(); ++k)
		{
			r(2 * k) = hint.data()[k].real();
			r(2 * k + 1) = hint.data()[k].imag();
		}
		return r;
	}

private:
	Objective objective_;
	CMatrix h_;
	TensorSplit split_;
	std::vector<CVector> states_;
};

struct DescentResult
{
	CMatrix basis;
	std::vector<double> trace;
	std::size_t iterations = 0;
	bool converged = false;
	bool stalled = false;
	double gradient_norm = 0.0;
};

struct Stencil
{
	std::vector<CMatrix> generators;
	std::vector<CMatrix> plus;  // exp(+i h G_a)
	std::vector<CMatrix> minus; // exp(-i h G_a)
};

/// Step coefficients along the generators: steepest descent, or the
/// Gauss-Newton least-squares step when the objective is a residual norm.
RVector step_coefficients(const ObjectiveFunction& fn, const CMatrix& basis, const Stencil& st,
                          const OptimizerOptions& opt, bool gauss_newton, RVector& grad)
{
	const auto m = static_cast<Eigen::Index>(st.generators.size());
	if(!gauss_newton)
	{
		for(Eigen::Index a = 0; a < m; ++a)
			grad(a) = (fn.descent_value(basis * st.plus[a]) - fn.descent_value(basis * st.minus[a])) /
			          (2.0 * opt.fd_step);
		return -grad;
	}
	const RVector r = fn.residual(basis);
	Eigen::MatrixXd jac(r.size(), m);
	for(Eigen::Index a = 0; a < m; ++a)
		jac.col(a) = (fn.residual(basis * st.plus[a]) - fn.residual(basis * st.minus[a])) / (2.0 * opt.fd_step);
	grad = 2.0 * jac.transpose() * r;
	// minimum-norm solution: the local-unitary gauge directions are left alone
	return -jac.completeOrthogonalDecomposition().solve(r);
}

DescentResult descend(const ObjectiveFunction& fn, CMatrix basis, const Stencil& st, const OptimizerOptions& opt)
{
	const bool gauss_newton = opt.method == DescentMethod::gauss_newton ||
	                          (opt.method == DescentMethod::automatic && fn.squared());
	const double floor = fn.squared() ? opt.objective_floor * opt.objective_floor : opt.objective_floor;

	DescentResult r;
	double value = fn.descent_value(basis);
	r.trace.push_back(fn(basis));
	const auto m = static_cast<Eigen::Index>(st.generators.size());
	// first trial is the learning rate (GD) or the full step (Gauss-Newton)
	const double first = gauss_newton ? 1.0 : opt.learning_rate;
	const double cap = gauss_newton ? 1.0 : opt.max_learning_rate;
	double step = 0.5 * first;
	RVector grad(m);

	while(true)
	{
		const RVector coeffs = step_coefficients(fn, basis, st, opt, gauss_newton, grad);
		// report the gradient of the objective itself, not of its square
		r.gradient_norm = fn.squared() ? grad.norm() / (2.0 * std::sqrt(std::max(value, 1e-300))) : grad.norm();
		if(r.gradient_norm <= opt.gradient_tol || value <= floor)
		{
			r.converged = true;
			break;
		}
		if(r.iterations >= opt.max_iterations)
			break;

		CMatrix direction = CMatrix::Zero(basis.rows(), basis.cols());
		for(Eigen::Index a = 0; a < m; ++a)
			direction += coeffs(a) * st.generators[static_cast<std::size_t>(a)];

		bool accepted = false;
		double rate = std::min(2.0 * step, cap);
		for(std::size_t halving = 0; halving <= opt.max_halvings; ++halving, rate *= 0.5)
		{
			CMatrix candidate = basis * exp_i(rate * direction);
			const double v = fn.descent_value(candidate);
			if(v < value)
			{
				basis = std::move(candidate);
				value = v;
				step = rate;
				accepted = true;
				break;
			}
		}
		if(!accepted)
		{
			r.stalled = true;
			break;
		}
		++r.iterations;
		r.trace.push_back(fn(basis));
	}
	r.basis = std::move(basis);
	return r;
}

} // namespace

double evaluate_objective(Objective objective, const Operator& h, const State& psi0, const TensorSplit& split,
                          const CMatrix& basis, const std::vector<double>& times)
{
	return ObjectiveFunction(objective, h, psi0, split, times)(basis);
}

FactorizationReport optimize_factorization(const Operator& h, const State& psi0, const TensorSplit& split,
                                           Objective objective, const OptimizerOptions& options)
{
	if(!split.bipartite())
		throw DimensionError("optimize_factorization requires a bipartite split");
	if(!h.is_hermitian())
		throw NotHermitianError("optimize_factorization requires a hermitian operator");
	if(h.dim() != split.total() || psi0.dim() != h.dim())
		throw DimensionError("optimize_factorization: dimensions differ");

	const ObjectiveFunction fn(objective, h, psi0, split, options.times);
	Stencil st;
	st.generators = hermitian_generators(h.dim());
	for(const auto& g : st.generators)
	{
		st.plus.push_back(exp_i(options.fd_step * g));
		st.minus.push_back(exp_i(-options.fd_step * g));
	}

	const auto n = static_cast<Eigen::Index>(h.dim());
	auto best = descend(fn, CMatrix::Identity(n, n), st, options);
	Rng rng(options.seed);
	for(std::size_t k = 0; k < options.restarts; ++k)
	{
		auto next = descend(fn, random_unitary(h.dim(), rng).matrix(), st, options);
		if(next.trace.back() < best.trace.back())
			best = std::move(next);
	}

	FactorizationReport report;
	report.kind = FactorizationKind::optimized;
	report.factorization = Factorization::row_major(OrthonormalBasis(best.basis), split);
	report.objective_value = best.trace.back();
	report.objective_trace = best.trace;
	report.iterations = best.iterations;
	report.converged = best.converged;
	if(best.stalled)
		report.notes.push_back("line search found no decrease; stopped before the gradient tolerance");
	if(!best.converged)
		report.notes.push_back("not converged: gradient norm " + std::to_string(best.gradient_norm) +
		                       " above tolerance");
	bool monotone = true;
	for(std::size_t k = 1; k < best.trace.size(); ++k)
		monotone = monotone && best.trace[k] <= best.trace[k - 1];
	report.checks["objective_monotone"] = monotone;
	report.notes.push_back(std::string("objective: ") + std::string(to_string(objective)));
	return report;
}

} // namespace nirvana
