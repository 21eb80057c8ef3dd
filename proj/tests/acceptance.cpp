// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "nirvana/dynamics.hpp"
#include "nirvana/factorize.hpp"
#include "nirvana/random.hpp"
#include "nirvana/scenarios.hpp"
#include "nirvana/sumset.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>

using namespace nirvana;

namespace
{

const double kR = 1.0 / std::sqrt(2.0);

struct Outcome
{
	bool pass = true;
	std::string detail;
};

CVector real_vector(std::initializer_list<double> xs)
{
	CVector v(static_cast<Eigen::Index>(xs.size()));
	Eigen::Index k = 0;
	for(double x : xs)
		v(k++) = x;
	return v;
}

double phase_free_distance(const CVector& c, const CVector& target)
{
	const cplx ov = target.dot(c);
	const cplx phase = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
	return (c / phase - target).cwiseAbs().maxCoeff();
}

CMatrix local_sum(const CMatrix& a, const CMatrix& b)
{
	return kron(a, CMatrix::Identity(b.rows(), b.rows())) + kron(CMatrix::Identity(a.rows(), a.rows()), b);
}

std::string fmt(double x)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.3g", x);
	return buf;
}

Outcome unprimed_components()
{
	const auto model = scenarios::build_measurement_model(0.0, 1.0);
	const auto tr = scenarios::run_superposition(model, 21);
	const double d0 = phase_free_distance(tr.components.front(), real_vector({kR, kR, 0, 0, 0, 0}));
	const double d1 = phase_free_distance(tr.components.back(), real_vector({0, 0, kR, 0, 0, kR}));
	return {d0 <= 1e-10 && d1 <= 1e-10, "initial err " + fmt(d0) + ", final err " + fmt(d1)};
}

Outcome primed_components()
{
	const auto model = scenarios::build_measurement_model(0.0, 1.0);
	const auto report = scenarios::primed_factorization(model, 21);
	const double d0 = phase_free_distance(report.components.front(), real_vector({kR, kR, 0, 0, 0, 0}));
	const double d1 = phase_free_distance(report.components.back(), real_vector({kR, -kR, 0, 0, 0, 0}));
	return {d0 <= 1e-10 && d1 <= 1e-10, "initial err " + fmt(d0) + ", final err " + fmt(d1)};
}

Outcome schmidt_profiles()
{
	const auto model = scenarios::build_measurement_model(0.0, 1.0);
	const auto f = scenarios::primed_factorization(model, 3).static_factorization();
	const auto after = evolve(model.hamiltonian, model.superposition(), model.t_after);
	const auto primed = schmidt(f.coordinates(after.amplitudes()), model.split);
	const auto unprimed = schmidt(after, model.split);
	const double ep = std::max(std::abs(primed.coefficients(0) - 1.0), std::abs(primed.coefficients(1)));
	const double eu = std::max(std::abs(unprimed.coefficients(0) - kR), std::abs(unprimed.coefficients(1) - kR));
	const double sp = entanglement_entropy(f.coordinates(after.amplitudes()), model.split);
	const double su = entanglement_entropy(after, model.split);
	const double es = std::max(std::abs(sp), std::abs(su - std::log(2.0)));
	return {ep <= 1e-10 && eu <= 1e-10 && es <= 1e-9,
	        "primed err " + fmt(ep) + ", unprimed err " + fmt(eu) + ", entropy err " + fmt(es)};
}

Outcome observer_recursion()
{
	const auto model = scenarios::build_measurement_model(0.0, 1.0);
	const auto observer = scenarios::build_observer_model(model);
	const auto tr = scenarios::run_full(observer, 21);
	const double d0 = phase_free_distance(tr.components.front().head(2), real_vector({kR, kR}));
	const double d1 = phase_free_distance(tr.components.back().head(2), real_vector({kR, -kR}));
	const double ov = std::abs(inner(observer.phi_before, observer.phi_after));
	return {d0 <= 1e-9 && d1 <= 1e-9 && ov <= 1e-10,
	        "alpha/beta err " + fmt(std::max(d0, d1)) + ", overlap " + fmt(ov)};
}

Outcome minimal_interaction()
{
	Rng rng(5);
	Outcome out;
	double worst_trace = 0.0, worst_gap = std::numeric_limits<double>::infinity();
	for(int trial = 0; trial < 100; ++trial)
	{
		const std::size_t p = 2, q = trial % 2 ? 3 : 2;
		const auto h = random_hermitian(p * q, rng);
		const auto d = nearest_local_decomposition(h, Factorization::standard(TensorSplit({p, q})));
		const auto ip = static_cast<Eigen::Index>(p), iq = static_cast<Eigen::Index>(q);
		const double t = std::max(oracle::trace_out_second(d.hint, ip, iq).cwiseAbs().maxCoeff(),
		                          oracle::trace_out_first(d.hint, ip, iq).cwiseAbs().maxCoeff()) /
		                 h.frobenius_norm();
		worst_trace = std::max(worst_trace, t);
		if(t > 1e-10)
			out.pass = false;
		for(int sample = 0; sample < 1000; ++sample)
		{
			CMatrix a = random_hermitian(p, rng).matrix(), b = random_hermitian(q, rng).matrix();
			if(sample % 2)
			{
				a = d.h1 + 1e-3 * a;
				b = d.h2 - d.c * CMatrix::Identity(iq, iq) + 1e-3 * b;
			}
			const double gap = (h.matrix() - local_sum(a, b)).norm() - d.interaction_norm();
			worst_gap = std::min(worst_gap, gap);
			if(gap < 0.0)
				out.pass = false;
		}
	}
	out.detail = "max partial trace / ||H|| " + fmt(worst_trace) + ", min alternative margin " + fmt(worst_gap);
	return out;
}

/// Spectrum of Q diag(s) Q^dagger for a random unitary Q.
std::vector<double> operator_spectrum(const std::vector<double>& s, Rng& rng)
{
	const auto n = static_cast<Eigen::Index>(s.size());
	CMatrix d = CMatrix::Zero(n, n);
	for(Eigen::Index k = 0; k < n; ++k)
		d(k, k) = s[static_cast<std::size_t>(k)];
	const CMatrix q = random_unitary(s.size(), rng).matrix();
	const auto es = eigh(Operator::hermitian(q * d * q.adjoint()));
	return {es.values.data(), es.values.data() + n};
}

Outcome sumset_oracle()
{
	Rng rng(6);
	std::normal_distribution<double> n;
	std::uniform_int_distribution<int> small(0, 3);
	const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {4, 2},
	                                                                {3, 3}, {2, 5}, {5, 2}, {2, 6}, {6, 2},
	                                                                {3, 4}, {4, 3}};
	Outcome out;
	int feasible = 0, infeasible = 0, disagreements = 0;
	double worst = 0.0;
	const double tol = 1e-9;
	for(int trial = 0; trial < 200; ++trial)
	{
		const auto [p, q] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
		const bool integer = trial % 4 < 2; // exercises degeneracies
		std::vector<double> a(p), b(q);
		for(auto& x : a)
			x = integer ? small(rng) : n(rng);
		for(auto& x : b)
			x = integer ? small(rng) : n(rng);
		auto target = minkowski_sum({a, b});
		if(trial % 2)
		{
			std::uniform_int_distribution<std::size_t> pick(0, target.size() - 1);
			target[pick(rng)] += 0.05 + 0.5 * std::abs(n(rng));
		}
		const auto s = operator_spectrum(target, rng);
		const bool expected = oracle::sumset_feasible(s, p, q, tol);
		const auto d = sumset_decompose(s, p, q, tol);
		if(expected != d.has_value())
			++disagreements;
		if(d)
		{
			++feasible;
			const double e = multiset_distance(minkowski_sum(d->factors), s);
			worst = std::max(worst, e);
			if(e > 1e-9)
				out.pass = false;
		}
		else
			++infeasible;
	}
	if(disagreements || feasible == 0 || infeasible == 0)
		out.pass = false;
	out.detail = std::to_string(feasible) + " feasible, " + std::to_string(infeasible) + " infeasible, " +
	             std::to_string(disagreements) + " disagreements, max re-expansion err " + fmt(worst);
	return out;
}

Outcome static_nirvana()
{
	Rng rng(7);
	Outcome out;
	double worst_hint = 0.0, worst_phase = 0.0;
	for(int trial = 0; trial < 20; ++trial)
	{
		const auto a = random_hermitian(2, rng), b = random_hermitian(3, rng);
		const Operator h = Operator::hermitian(local_sum(a.matrix(), b.matrix()));
		const auto report = static_nirvana_factorization(h, 2, 3, 1e-9);
		if(report.kind != FactorizationKind::static_nirvana || !report.sumset)
		{
			out.pass = false;
			continue;
		}
		const auto& f = report.static_factorization();
		const double hint = nearest_local_decomposition(h, f).interaction_norm();
		worst_hint = std::max(worst_hint, hint);
		const auto& e1 = report.sumset->factors[0];
		const auto& e2 = report.sumset->factors[1];
		const auto hp = PiecewiseHamiltonian::constant(h, 0.0, 2.0);
		const auto psi0 = random_state(6, rng);
		const CVector c0 = f.coordinates(psi0.amplitudes());
		for(double t : linear_grid(0.0, 2.0, 20))
		{
			const CVector c = f.coordinates(evolve(hp, psi0, t).amplitudes());
			for(std::size_t i = 0; i < 2; ++i)
				for(std::size_t j = 0; j < 3; ++j)
				{
					const auto r = static_cast<Eigen::Index>(i * 3 + j);
					worst_phase =
					    std::max(worst_phase, std::abs(c(r) - std::exp(cplx(0, -(e1[i] + e2[j]) * t)) * c0(r)));
				}
		}
	}
	out.pass = out.pass && worst_hint <= 1e-9 && worst_phase <= 1e-8;
	out.detail = "max ||Hint|| " + fmt(worst_hint) + ", max component err " + fmt(worst_phase);
	return out;
}

Outcome dynamic_nirvana()
{
	Rng rng(8);
	double worst_drift = 0.0, worst_entropy = 0.0;
	for(int trial = 0; trial < 50; ++trial)
	{
		const auto h = random_hermitian(6, rng);
		const auto psi0 = random_state(6, rng);
		const auto report = dynamic_nirvana_factorization(PiecewiseHamiltonian::constant(h, 0.0, 1.0), psi0,
		                                                  TensorSplit({2, 3}), linear_grid(0.0, 1.0, 50));
		for(const auto& c : report.components)
			worst_drift = std::max(worst_drift, (c - report.components.front()).norm());
		for(double s : report.story.at("entropy"))
			worst_entropy = std::max(worst_entropy, s);
	}
	return {worst_drift <= 1e-9 && worst_entropy <= 1e-9,
	        "max drift " + fmt(worst_drift) + ", max entropy " + fmt(worst_entropy)};
}

Outcome optimizer_recovery()
{
	Rng rng(42);
	int reached = 0;
	bool monotone = true;
	std::size_t max_iters = 0;
	for(int trial = 0; trial < 20; ++trial)
	{
		const auto a = random_hermitian(2, rng), b = random_hermitian(2, rng);
		const auto w = random_unitary(4, rng).matrix();
		const Operator h = Operator::hermitian(w * local_sum(a.matrix(), b.matrix()) * w.adjoint());
		const auto report =
		    optimize_factorization(h, State::basis(4, 0), TensorSplit({2, 2}), Objective::interaction_norm);
		if(report.objective_value <= 1e-6 && report.iterations <= 5000)
			++reached;
		max_iters = std::max(max_iters, report.iterations);
		for(std::size_t k = 1; k < report.objective_trace.size(); ++k)
			if(report.objective_trace[k] > report.objective_trace[k - 1])
				monotone = false;
	}
	return {reached >= 18 && monotone, std::to_string(reached) + "/20 reached 1e-6, max iterations " +
	                                       std::to_string(max_iters) + (monotone ? ", traces monotone" : ", NON-MONOTONE")};
}

Outcome core_numerics()
{
	Rng rng(10);
	const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 2}, {2, 3}, {2, 4}, {3, 3}, {2, 5}, {3, 4},
	                                                                {4, 4}, {3, 6}, {4, 5}, {4, 6}, {5, 6}, {6, 6},
	                                                                {2, 18}, {3, 12}};
	std::uniform_real_distribution<double> time(0.0, 5.0);
	double unitarity = 0, norm = 0, energy = 0, recon = 0, ptrace = 0, entropy = 0;
	for(int trial = 0; trial < 1000; ++trial)
	{
		const auto [p, q] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
		const std::size_t dim = p * q;
		const TensorSplit split({p, q});
		const auto h = random_hermitian(dim, rng);
		const auto psi0 = random_state(dim, rng);
		const double t = time(rng);

		const CMatrix u = propagator(h, t).matrix();
		const auto n = static_cast<Eigen::Index>(dim);
		unitarity = std::max(unitarity, (u.adjoint() * u - CMatrix::Identity(n, n)).norm());

		const auto hp = PiecewiseHamiltonian::constant(h, 0.0, 5.0);
		const auto psi = evolve(hp, psi0, t);
		norm = std::max(norm, std::abs(psi.amplitudes().norm() - 1.0));
		const CVector& a = psi.amplitudes();
		const CVector& a0 = psi0.amplitudes();
		energy = std::max(energy, std::abs(a.dot(h.matrix() * a).real() - a0.dot(h.matrix() * a0).real()));

		const auto sd = schmidt(psi, split);
		recon = std::max(recon, (sd.reconstruct() - psi.amplitudes()).norm());

		const CMatrix rho = density(psi.amplitudes());
		const CMatrix reduced = partial_trace(rho, split, 0);
		ptrace = std::max(ptrace, std::abs(reduced.trace() - rho.trace()));
		const Eigen::SelfAdjointEigenSolver<CMatrix> es(reduced);
		double s = 0.0;
		for(Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
		{
			const double l = es.eigenvalues()(k);
			if(l > 1e-15)
				s -= l * std::log(l);
		}
		entropy = std::max(entropy, std::abs(s - entanglement_entropy(psi, split)));
	}
	const bool pass = unitarity <= 1e-10 && norm <= 1e-9 && energy <= 1e-9 && recon <= 1e-9 && ptrace <= 1e-10 &&
	                  entropy <= 1e-9;
	return {pass, "unitarity " + fmt(unitarity) + ", norm " + fmt(norm) + ", energy " + fmt(energy) +
	                  ", schmidt " + fmt(recon) + ", trace " + fmt(ptrace) + ", entropy " + fmt(entropy)};
}

struct Criterion
{
	int id;
	const char* name;
	double budget_seconds;
	std::function<Outcome()> run;
};

} // namespace

int main()
{
	const std::vector<Criterion> criteria{
	    {1, "measurement: unprimed components", 1.0, unprimed_components},
	    {2, "measurement: primed components", 1.0, primed_components},
	    {3, "measurement: Schmidt profiles and entropies", 1.0, schmidt_profiles},
	    {4, "observer: alpha/beta recursion", 1.0, observer_recursion},
	    {5, "minimal-interaction certificate", 10.0, minimal_interaction},
	    {6, "sumset oracle equivalence", 30.0, sumset_oracle},
	    {7, "static Nirvana property", 1.0e9, static_nirvana},
	    {8, "dynamic Nirvana property", 1.0e9, dynamic_nirvana},
	    {9, "optimizer recovery", 120.0, optimizer_recovery},
	    {10, "core numerics", 30.0, core_numerics},
	};
	int failed = 0;
	for(const auto& c : criteria)
	{
		const auto start = std::chrono::steady_clock::now();
		Outcome o;
		try
		{
			o = c.run();
		}
		catch(const std::exception& e)
		{
			o = {false, std::string("exception: ") + e.what()};
		}
		const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		if(seconds > c.budget_seconds)
		{
			o.pass = false;
			o.detail += ", over time budget";
		}
		std::printf("%s  [%2d] %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds);
		if(!o.pass)
			++failed;
	}
	std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
	return failed ? 1 : 0;
}
