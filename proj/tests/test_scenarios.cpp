#include "nirvana/scenarios.hpp"

#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace nirvana;
using namespace nirvana::scenarios;
using support::kRoot2;
using support::max_abs;
using support::phase_free_distance;
using support::vec;

TEST_CASE("measurement model maps")
{
	for(double dt : {1.0, 0.25, 3.0})
	{
		const auto m = build_measurement_model(0.5, 0.5 + dt);
		CHECK(m.omega == doctest::Approx(std::numbers::pi / (2.0 * dt)));
		const CMatrix u = m.hamiltonian.propagator(m.t_before, m.t_after);
		// exact phases, not merely up to a global factor
		CHECK((u * m.e(1).amplitudes() - m.e(3).amplitudes()).norm() <= 1e-10);
		CHECK((u * m.e(2).amplitudes() - m.e(6).amplitudes()).norm() <= 1e-10);
		CHECK((u * m.e(4).amplitudes() - m.e(4).amplitudes()).norm() <= 1e-10);
		CHECK((u * m.e(5).amplitudes() - m.e(5).amplitudes()).norm() <= 1e-10);
	}
	CHECK_THROWS_AS(build_measurement_model(1.0, 1.0), Error);
	CHECK_THROWS_AS(build_measurement_model(2.0, 1.0), Error);
}

TEST_CASE("generator structure")
{
	const auto m = build_measurement_model(0.0, 1.0);
	const double w = m.omega;
	CMatrix expected = CMatrix::Zero(6, 6);
	expected(2, 0) = cplx(0, w);
	expected(0, 2) = cplx(0, -w);
	expected(5, 1) = cplx(0, w);
	expected(1, 5) = cplx(0, -w);
	CHECK(max_abs(m.generator.matrix() - expected) <= 1e-15);

	// labeling |e1> = |0,up>, |e2> = |0,down>, ...
	CHECK(std::abs(m.e(1)[0] - 1.0) == 0.0);
	CHECK(std::abs(m.e(6)[5] - 1.0) == 0.0);
	CHECK_THROWS_AS(m.e(0), DimensionError);
	CHECK_THROWS_AS(m.e(7), DimensionError);
}

TEST_CASE("single branches")
{
	const auto m = build_measurement_model(0.0, 1.0);
	CHECK((evolve(m.hamiltonian, m.e(1), 1.0).amplitudes() - m.e(3).amplitudes()).norm() <= 1e-10);
	CHECK((evolve(m.hamiltonian, m.e(2), 1.0).amplitudes() - m.e(6).amplitudes()).norm() <= 1e-10);
	CHECK((evolve(m.hamiltonian, m.e(4), 1.0).amplitudes() - m.e(4).amplitudes()).norm() <= 1e-10);
}

TEST_CASE("superposition in the unprimed factorization")
{
	const auto m = build_measurement_model(0.0, 1.0);
	const auto tr = run_superposition(m, 21);
	CHECK(phase_free_distance(tr.components.front(), vec({kRoot2, kRoot2, 0, 0, 0, 0})) <= 1e-10);
	CHECK(phase_free_distance(tr.components.back(), vec({0, 0, kRoot2, 0, 0, kRoot2})) <= 1e-10);
	const auto& s = tr.diagnostics.at("entropy");
	CHECK(s.front() <= 1e-12);
	CHECK(std::abs(s.back() - std::log(2.0)) <= 1e-9);
	for(std::size_t k = 1; k < s.size(); ++k)
		CHECK(s[k] >= s[k - 1] - 1e-12);
}

TEST_CASE("primed basis")
{
	const auto m = build_measurement_model(0.0, 1.0);
	const auto b = primed_basis(m);
	const CVector p1 = b.matrix().col(0), p2 = b.matrix().col(1);
	CHECK(std::abs(p1.dot(p2)) <= 1e-15);
	CHECK(std::abs(p1.norm() - 1.0) <= 1e-15);
	CHECK((p1 - vec({0.5, 0.5, 0.5, 0, 0, 0.5})).norm() <= 1e-15);
	CHECK((p2 - vec({0.5, 0.5, -0.5, 0, 0, -0.5})).norm() <= 1e-15);
	CHECK((b.matrix().adjoint() * b.matrix() - CMatrix::Identity(6, 6)).norm() <= 1e-10);

	const CVector before = b.coordinates(m.superposition().amplitudes());
	CHECK(before.tail(4).norm() <= 1e-15);
}

TEST_CASE("primed factorization tells a disentangled story")
{
	const auto m = build_measurement_model(0.0, 1.0);
	const auto report = primed_factorization(m, 21);
	CHECK(report.kind == FactorizationKind::static_nirvana);
	CHECK(phase_free_distance(report.components.front(), vec({kRoot2, kRoot2, 0, 0, 0, 0})) <= 1e-10);
	CHECK(phase_free_distance(report.components.back(), vec({kRoot2, -kRoot2, 0, 0, 0, 0})) <= 1e-10);
	for(double s : report.story.at("entropy"))
		CHECK(s <= 1e-10);
	CHECK(report.all_checks_pass());

	const auto& f = report.static_factorization();
	const auto after = evolve(m.hamiltonian, m.superposition(), m.t_after);
	const auto sd = schmidt(f.coordinates(after.amplitudes()), m.split);
	CHECK(std::abs(sd.coefficients(0) - 1.0) <= 1e-10);
	CHECK(std::abs(sd.coefficients(1)) <= 1e-10);

	const auto unprimed = schmidt(after, m.split);
	CHECK(std::abs(unprimed.coefficients(0) - kRoot2) <= 1e-10);
	CHECK(std::abs(unprimed.coefficients(1) - kRoot2) <= 1e-10);

	// both descriptions reconstruct the same vector
	const CVector from_primed = f.lattice_basis() * f.coordinates(after.amplitudes());
	const CVector from_unprimed = m.unprimed.lattice_basis() * m.unprimed.coordinates(after.amplitudes());
	CHECK(std::abs(std::abs(from_primed.dot(from_unprimed)) - 1.0) <= 1e-12);

	CHECK(std::abs(report.objective_value -
	               nearest_local_decomposition(m.generator, f).interaction_norm()) <= 1e-8);
}

TEST_CASE("entropy pair at and after the window end")
{
	const auto m = build_measurement_model(0.0, 1.0);
	const auto f = primed_factorization(m, 3).static_factorization();
	for(double t : {1.0, 1.5, 4.0})
	{
		const auto psi = evolve(m.hamiltonian, m.superposition(), t);
		CHECK(std::abs(entanglement_entropy(psi, m.split) - std::log(2.0)) <= 1e-9);
		CHECK(entanglement_entropy(f.coordinates(psi.amplitudes()), m.split) <= 1e-9);
	}
}

TEST_CASE("primed interaction action stays at omega")
{
	// No completion of e'1, e'2 makes the nearest-local interaction annihilate
	// |0'> (x) phi for every phi, so the action along the trajectory is not zero.
	const auto m = build_measurement_model(0.0, 1.0);
	const auto report = primed_factorization(m, 11);
	const auto& action = report.story.at("interaction_action");
	for(std::size_t k = 0; k + 1 < action.size(); ++k)
		CHECK(std::abs(action[k] - m.omega) <= 1e-9);
}

TEST_CASE("pointer readout")
{
	const auto m = build_measurement_model(0.0, 1.0);
	const auto after = evolve(m.hamiltonian, m.superposition(), m.t_after);
	const auto branches = pointer_readout(m, after);
	REQUIRE(branches.size() == 2);
	CHECK(branches[0].pointer_value == 1.0);
	CHECK(branches[0].weight == doctest::Approx(0.5));
	CHECK(std::abs(std::abs(branches[0].spin[kSpinUp]) - 1.0) <= 1e-10);
	CHECK(branches[1].pointer_value == -1.0);
	CHECK(std::abs(std::abs(branches[1].spin[kSpinDown]) - 1.0) <= 1e-10);
}

TEST_CASE("observer model")
{
	const auto m = build_measurement_model(0.0, 1.0);
	const auto o = build_observer_model(m);
	CHECK(std::abs(inner(o.phi_before, o.phi_after)) <= 1e-10);
	CHECK(o.t_end == doctest::Approx(2.0));
	CHECK(std::abs(inner(o.alpha, o.beta)) <= 1e-12);

	const auto tr = run_full(o, 21);
	CHECK(phase_free_distance(tr.components.front().head(2), vec({kRoot2, kRoot2})) <= 1e-9);
	CHECK(phase_free_distance(tr.components.back().head(2), vec({kRoot2, -kRoot2})) <= 1e-9);
	CHECK(tr.components.back().tail(16).norm() <= 1e-9);
	CHECK(tr.diagnostics.at("entropy").front() <= 1e-9);
	CHECK(tr.diagnostics.at("entropy").back() <= 1e-9);
	CHECK(std::abs(tr.diagnostics.at("observer_entropy").back() - std::log(2.0)) <= 1e-9);

	const CMatrix rho = partial_trace(density(tr.states.back().amplitudes()), o.split, 0);
	CMatrix expected = CMatrix::Zero(3, 3);
	expected(1, 1) = expected(2, 2) = 0.5;
	CHECK(max_abs(rho - expected) <= 1e-10);
}

TEST_CASE("recursion pattern matches one level up")
{
	const auto m = build_measurement_model(0.0, 1.0);
	const auto primed = primed_factorization(m, 5);
	const auto full = run_full(build_observer_model(m), 5);
	CHECK((primed.components.front().head(2) - full.components.front().head(2)).norm() <= 1e-9);
	CHECK((primed.components.back().head(2) - full.components.back().head(2)).norm() <= 1e-9);
}
