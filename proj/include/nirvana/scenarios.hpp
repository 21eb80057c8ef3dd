#pragma once

#include "nirvana/dynamics.hpp"
#include "nirvana/factorize.hpp"
#include "nirvana/hilbert.hpp"

#include <vector>

namespace nirvana::scenarios
{

// Pointer levels of the apparatus M and spin levels of the object S1.
inline constexpr std::size_t kPointerReady = 0; // |0>
inline constexpr std::size_t kPointerPlus = 1;  // |+>
inline constexpr std::size_t kPointerMinus = 2; // |->
inline constexpr std::size_t kSpinUp = 0;
inline constexpr std::size_t kSpinDown = 1;

/// i (|b><a| - |a><b|) on a dim-dimensional space. Over an interval of
/// length pi / (2 w), exp(-i w Y t) maps |a> to |b> with phase exactly +1.
CMatrix rotation_generator(std::size_t dim, std::size_t a, std::size_t b);

/// Apparatus M (pointer |0>, |+>, |->) coupled to a spin S1 (up, down) during
/// [t_before, t_after]. The coupling rotates |0,s> into |+,up> or |-,down>.
struct MeasurementModel
{
	double t_before = 0.0;
	double t_after = 1.0;
	double omega = 0.0;
	TensorSplit split{{3, 2}};
	Factorization unprimed = Factorization::standard(TensorSplit({3, 2}));
	Operator generator = Operator::zero(6);
	PiecewiseHamiltonian hamiltonian{6};

	/// |e_k>, k = 1..6, in the product labeling |e1> = |0,up>, |e2> = |0,down>,
	/// |e3> = |+,up>, |e4> = |+,down>, |e5> = |-,up>, |e6> = |-,down>.
	State e(std::size_t k) const;
	/// (|0,up> + |0,down>) / sqrt 2.
	State superposition() const;
	std::vector<double> grid(std::size_t samples) const;
};

MeasurementModel build_measurement_model(double t_before, double t_after);

/// Trajectory of the superposition across the window, with unprimed
/// coordinates and the M|S1 entanglement entropy.
EvolutionTrace run_superposition(const MeasurementModel& model, std::size_t samples);

/// e'_1 = (e1 + e2 + e3 + e6) / 2, e'_2 = (e1 + e2 - e3 - e6) / 2, completed
/// by Gram-Schmidt over the remaining standard vectors.
OrthonormalBasis primed_basis(const MeasurementModel& model);

/// Primed basis labeled row-major on 3 x 2, so |e'_1> = |0'>|up'> and
/// |e'_2> = |0'>|down'>. The story is filled over the window.
FactorizationReport primed_factorization(const MeasurementModel& model, std::size_t samples);

/// One branch of the after-state: pointer reading (+1 or -1), its weight,
/// and the spin state conditioned on it.
struct Branch
{
	double pointer_value;
	double weight;
	State spin;
};

std::vector<Branch> pointer_readout(const MeasurementModel& model, const State& after);

/// Observer O (|ready>, |saw +>, |saw ->) read-off of the apparatus, appended
/// as a second window of the same length. Ambient space O (x) M (x) S1.
struct ObserverModel
{
	MeasurementModel base;
	TensorSplit split{{3, 6}};
	Operator readout = Operator::zero(18);
	PiecewiseHamiltonian hamiltonian{18};
	double t_end = 0.0;
	State phi_before = State::basis(18, 0);
	State phi_after = State::basis(18, 0);
	State alpha = State::basis(18, 0);
	State beta = State::basis(18, 0);

	/// alpha, beta, then the Gram-Schmidt completion, labeled row-major on
	/// 9 x 2 so that alpha = |0''>|up''> and beta = |0''>|down''>.
	Factorization alpha_beta_factorization() const;
	std::vector<double> grid(std::size_t samples) const;
};

/// Throws Error if Phi_before and Phi_after are not orthogonal.
ObserverModel build_observer_model(const MeasurementModel& model);

/// Full trajectory (measurement then read-off) with coordinates in the
/// alpha/beta factorization. Diagnostics: "entropy" in that factorization and
/// "observer_entropy" across O | S2.
EvolutionTrace run_full(const ObserverModel& observer, std::size_t samples);

} // namespace nirvana::scenarios
