#include "nirvana/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace nirvana::scenarios
{

namespace
{

std::size_t s2_index(std::size_t pointer, std::size_t spin)
{
	return pointer * 2 + spin;
}

State basis_combination(std::size_t dim, std::initializer_list<std::pair<std::size_t, double>> terms)
{
	CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
	for(auto [k, w] : terms)
		v(static_cast<Eigen::Index>(k)) += w;
	return State::normalized(v);
}

} // namespace

CMatrix rotation_generator(std::size_t dim, std::size_t a, std::size_t b)
{
	const auto n = static_cast<Eigen::Index>(dim);
	CMatrix y = CMatrix::Zero(n, n);
	y(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = cplx(0.0, 1.0);
	y(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = cplx(0.0, -1.0);
	return y;
}

// ---------------------------------------------------------------------------
// Measurement

State MeasurementModel::e(std::size_t k) const
{
	if(k < 1 || k > 6)
		throw DimensionError("basis label must be in 1..6");
	return State::basis(6, k - 1);
}

State MeasurementModel::superposition() const
{
	return basis_combination(6, {{s2_index(kPointerReady, kSpinUp), 1.0}, {s2_index(kPointerReady, kSpinDown), 1.0}});
}

std::vector<double> MeasurementModel::grid(std::size_t samples) const
{
	return linear_grid(t_before, t_after, samples);
}

MeasurementModel build_measurement_model(double t_before, double t_after)
{
	if(!(t_after > t_before))
		throw Error("measurement window must have positive length");
	MeasurementModel m;
	m.t_before = t_before;
	m.t_after = t_after;
	m.omega = std::numbers::pi / (2.0 * (t_after - t_before));
	const CMatrix g = m.omega * (rotation_generator(6, s2_index(kPointerReady, kSpinUp), s2_index(kPointerPlus, kSpinUp)) +
	                             rotation_generator(6, s2_index(kPointerReady, kSpinDown),
	                                                s2_index(kPointerMinus, kSpinDown)));
	m.generator = Operator::hermitian(g);
	m.hamiltonian = PiecewiseHamiltonian::constant(m.generator, t_before, t_after);
	return m;
}

EvolutionTrace run_superposition(const MeasurementModel& model, std::size_t samples)
{
	const auto times = model.grid(samples);
	auto tr = components_in_frame(trace(model.hamiltonian, model.superposition(), times),
	                              static_frame(model.unprimed, times));
	add_entropy_diagnostic(tr);
	add_drift_diagnostics(tr);
	return tr;
}

OrthonormalBasis primed_basis(const MeasurementModel& model)
{
	(void)model;
	const State first[] = {
	    basis_combination(6, {{0, 0.5}, {1, 0.5}, {2, 0.5}, {5, 0.5}}),
	    basis_combination(6, {{0, 0.5}, {1, 0.5}, {2, -0.5}, {5, -0.5}}),
	};
	return gram_schmidt_complete(first);
}

FactorizationReport primed_factorization(const MeasurementModel& model, std::size_t samples)
{
	FactorizationReport report;
	report.kind = FactorizationKind::static_nirvana;
	Factorization f = Factorization::row_major(primed_basis(model), model.split);
	report.objective_value = nearest_local_decomposition(model.generator, f).interaction_norm();
	report.factorization = std::move(f);
	tell_story(report, model.hamiltonian, model.superposition(), model.grid(samples));

	double max_entropy = 0.0;
	for(double s : report.story.at("entropy"))
		max_entropy = std::max(max_entropy, s);
	report.checks["entropy_zero"] = max_entropy <= 1e-10;
	// the state only ever occupies |0'> (x) span{up', down'}
	report.checks.erase("constant_modulus");
	report.notes.push_back("disentangled description: the trajectory stays the product |0'> (x) phi(t); the "
	                       "down' component ends with phase -1");
	return report;
}

std::vector<Branch> pointer_readout(const MeasurementModel& model, const State& after)
{
	const CVector c = model.unprimed.coordinates(after.amplitudes());
	std::vector<Branch> out;
	for(auto [pointer, value] : {std::pair{kPointerPlus, 1.0}, std::pair{kPointerMinus, -1.0}})
	{
		CVector spin(2);
		spin(0) = c(static_cast<Eigen::Index>(s2_index(pointer, kSpinUp)));
		spin(1) = c(static_cast<Eigen::Index>(s2_index(pointer, kSpinDown)));
		const double w = spin.squaredNorm();
		if(w > kTol)
			out.push_back({value, w, State::normalized(spin)});
	}
	return out;
}

// ---------------------------------------------------------------------------
// Observer

Factorization ObserverModel::alpha_beta_factorization() const
{
	const State first[] = {alpha, beta};
	return Factorization::row_major(gram_schmidt_complete(first), TensorSplit({9, 2}));
}

std::vector<double> ObserverModel::grid(std::size_t samples) const
{
	return linear_grid(base.t_before, t_end, samples);
}

ObserverModel build_observer_model(const MeasurementModel& model)
{
	constexpr std::size_t ready = 0, saw_plus = 1, saw_minus = 2;
	auto idx = [](std::size_t observer, std::size_t pointer, std::size_t spin) {
		return observer * 6 + s2_index(pointer, spin);
	};

	ObserverModel o;
	o.base = model;
	const double window = model.t_after - model.t_before;
	o.t_end = model.t_after + window;

	CMatrix g = CMatrix::Zero(18, 18);
	for(std::size_t spin : {kSpinUp, kSpinDown})
	{
		g += rotation_generator(18, idx(ready, kPointerPlus, spin), idx(saw_plus, kPointerPlus, spin));
		g += rotation_generator(18, idx(ready, kPointerMinus, spin), idx(saw_minus, kPointerMinus, spin));
	}
	o.readout = Operator::hermitian(model.omega * g);

	const Operator id3 = Operator::identity(3);
	const Operator ops[] = {id3, model.generator};
	PiecewiseHamiltonian h(18);
	h.add(model.t_before, model.t_after, kron(ops));
	h.add(model.t_after, o.t_end, o.readout);
	o.hamiltonian = std::move(h);

	const State parts[] = {State::basis(3, ready), model.superposition()};
	o.phi_before = tensor(parts);
	o.phi_after = evolve(o.hamiltonian, o.phi_before, o.t_end);
	if(std::abs(inner(o.phi_before, o.phi_after)) > kTol)
		throw Error("observer model: Phi_before and Phi_after are not orthogonal");

	const CVector& b = o.phi_before.amplitudes();
	const CVector& a = o.phi_after.amplitudes();
	o.alpha = State::normalized(b + a);
	o.beta = State::normalized(b - a);
	return o;
}

EvolutionTrace run_full(const ObserverModel& observer, std::size_t samples)
{
	const auto times = observer.grid(samples);
	auto tr = trace(observer.hamiltonian, observer.phi_before, times);

	std::vector<double> observer_entropy;
	for(const auto& s : tr.states)
		observer_entropy.push_back(entanglement_entropy(s, observer.split));

	tr = components_in_frame(std::move(tr), static_frame(observer.alpha_beta_factorization(), times));
	add_entropy_diagnostic(tr);
	add_drift_diagnostics(tr);
	tr.diagnostics["observer_entropy"] = std::move(observer_entropy);
	return tr;
}

} // namespace nirvana::scenarios
