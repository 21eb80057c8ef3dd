#pragma once

#include "nirvana/hilbert.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nirvana
{

/// exp(-i H dt) through the eigendecomposition of H.
Operator propagator(const Operator& h, double dt);

/// Hamiltonian that is constant on each of a sequence of contiguous windows
/// and zero outside them.
class PiecewiseHamiltonian
{
public:
	struct Segment
	{
		double t_start;
		double t_end;
		Operator h;
		Eigensystem spectrum;
	};

	explicit PiecewiseHamiltonian(std::size_t dim) : dim_(dim) {}

	/// Appends [t_start, t_end) with generator h. The new window must begin
	/// where the previous one ended.
	PiecewiseHamiltonian& add(double t_start, double t_end, Operator h);

	/// Single window.
	static PiecewiseHamiltonian constant(Operator h, double t_start, double t_end);

	std::size_t dim() const { return dim_; }
	const std::vector<Segment>& segments() const { return segments_; }

	/// Generator active on [t, t + 0): right-continuous, zero outside.
	CMatrix at(double t) const;

	/// U(t_to, t_from) for t_to >= t_from.
	CMatrix propagator(double t_from, double t_to) const;

private:
	std::size_t dim_;
	std::vector<Segment> segments_;
};

/// State at time t, given psi0 held before the first window. Before the
/// first window the state is frozen (the generator is zero there).
State evolve(const PiecewiseHamiltonian& h, const State& psi0, double t);
/// State at t_to, given psi at t_from (t_to >= t_from).
State evolve(const PiecewiseHamiltonian& h, const State& psi, double t_from, double t_to);

/// Evenly spaced grid including both endpoints.
std::vector<double> linear_grid(double start, double end, std::size_t samples);

/// Time-sampled record of a trajectory, optionally with its coordinates in a
/// (possibly moving) frame and named per-sample diagnostics.
struct EvolutionTrace
{
	std::vector<double> times;
	std::vector<State> states;
	std::optional<BasisTrajectory> frame;
	std::vector<CVector> components;
	std::map<std::string, std::vector<double>> diagnostics;
	/// Complex diagnostics keyed by name, e.g. frame coordinates of a
	/// secondary description.
	std::map<std::string, std::vector<CVector>> extra_components;

	std::size_t size() const { return times.size(); }
};

/// Samples evolve(h, psi0, t) on the grid.
EvolutionTrace trace(const PiecewiseHamiltonian& h, const State& psi0, std::vector<double> times);

/// Records c_k(t) = <e_k(t)|Psi(t)> in tensor-layout order. Time grids must
/// match exactly.
EvolutionTrace components_in_frame(EvolutionTrace trace, const BasisTrajectory& frame);

/// Constant frame repeated on a grid.
BasisTrajectory static_frame(const Factorization& f, const std::vector<double>& times);

/// Comoving frame: the initial basis (psi0 first, then the Gram-Schmidt
/// completion) transported by the full propagator, so that e_1(t) is the
/// evolved state. Lattice index 0 carries e_1.
BasisTrajectory comoving_frame(const PiecewiseHamiltonian& h, const State& psi0, const std::vector<double>& times,
                               std::optional<TensorSplit> split = std::nullopt);

/// Apparent generator K(t) in frame coordinates: i d/dt c = K c. Extracted
/// from the coordinate transition over [t, t + dt] by an exact arcsin
/// inversion; valid while ||K|| dt < pi / 2.
CMatrix apparent_generator(const PiecewiseHamiltonian& h, const Factorization& frame_now,
                           const Factorization& frame_later, double t, double dt);

/// Adds "component_drift" (||c(t) - c(t0)||) and "modulus_drift"
/// (max_k ||c_k(t)| - |c_k(t0)||) diagnostics for a trace with components.
void add_drift_diagnostics(EvolutionTrace& trace);

/// Adds "entropy" computed from the frame coordinates of each sample under
/// the frame's bipartition at `cut`.
void add_entropy_diagnostic(EvolutionTrace& trace, std::size_t cut = 1, const std::string& name = "entropy");

/// CSV: time, re(c1), im(c1), ..., then one column per diagnostic.
std::string to_csv(const EvolutionTrace& trace);

} // namespace nirvana
