#include "nirvana/dynamics.hpp"

#include "nirvana/format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nirvana
{

namespace
{

CMatrix exp_from_spectrum(const Eigensystem& es, double dt)
{
	const CMatrix& v = es.basis.matrix();
	CVector phases(es.values.size());
	for(Eigen::Index k = 0; k < es.values.size(); ++k)
		phases(k) = std::polar(1.0, -es.values(k) * dt);
	return v * phases.asDiagonal() * v.adjoint();
}

} // namespace

Operator propagator(const Operator& h, double dt)
{
	if(!h.is_hermitian())
		throw NotHermitianError("propagator requires a hermitian generator");
	Operator u(exp_from_spectrum(eigh(h), dt));
	if(!u.is_unitary())
		throw Error("propagator lost unitarity beyond tolerance");
	return u;
}

// ---------------------------------------------------------------------------
// PiecewiseHamiltonian

PiecewiseHamiltonian& PiecewiseHamiltonian::add(double t_start, double t_end, Operator h)
{
	if(!(t_start < t_end))
		throw Error("segment must satisfy t_start < t_end");
	if(h.dim() != dim_)
		throw DimensionError("segment generator has the wrong dimension");
	if(!h.is_hermitian())
		throw NotHermitianError("segment generator is not hermitian");
	if(!segments_.empty() && segments_.back().t_end != t_start)
		throw Error("segments must be contiguous and non-overlapping");
	auto spectrum = eigh(h);
	segments_.push_back({t_start, t_end, std::move(h), std::move(spectrum)});
	return *this;
}

PiecewiseHamiltonian PiecewiseHamiltonian::constant(Operator h, double t_start, double t_end)
{
	PiecewiseHamiltonian out(h.dim());
	out.add(t_start, t_end, std::move(h));
	return out;
}

CMatrix PiecewiseHamiltonian::at(double t) const
{
	for(const auto& s : segments_)
		if(t >= s.t_start && t < s.t_end)
			return s.h.matrix();
	const auto n = static_cast<Eigen::Index>(dim_);
	return CMatrix::Zero(n, n);
}

CMatrix PiecewiseHamiltonian::propagator(double t_from, double t_to) const
{
	if(t_to < t_from)
		throw Error("backward propagation is not supported");
	const auto n = static_cast<Eigen::Index>(dim_);
	CMatrix u = CMatrix::Identity(n, n);
	for(const auto& s : segments_)
	{
		const double a = std::max(t_from, s.t_start);
		const double b = std::min(t_to, s.t_end);
		if(b > a)
			u = exp_from_spectrum(s.spectrum, b - a) * u;
	}
	return u;
}

State evolve(const PiecewiseHamiltonian& h, const State& psi, double t_from, double t_to)
{
	if(psi.dim() != h.dim())
		throw DimensionError("evolve: state and Hamiltonian dimensions differ");
	return State(h.propagator(t_from, t_to) * psi.amplitudes(), 1e-9);
}

State evolve(const PiecewiseHamiltonian& h, const State& psi0, double t)
{
	const double origin = h.segments().empty() ? t : std::min(t, h.segments().front().t_start);
	return evolve(h, psi0, origin, t);
}

std::vector<double> linear_grid(double start, double end, std::size_t samples)
{
	if(samples < 2)
		throw Error("a time grid needs at least two samples");
	if(!(end > start))
		throw Error("time grid end must exceed its start");
	std::vector<double> out(samples);
	const double step = (end - start) / static_cast<double>(samples - 1);
	for(std::size_t k = 0; k < samples; ++k)
		out[k] = start + step * static_cast<double>(k);
	out.back() = end;
	return out;
}

EvolutionTrace trace(const PiecewiseHamiltonian& h, const State& psi0, std::vector<double> times)
{
	EvolutionTrace out;
	out.states.reserve(times.size());
	for(std::size_t k = 0; k < times.size(); ++k)
	{
		if(k > 0 && !(times[k] > times[k - 1]))
			throw Error("trace times must be strictly increasing");
		out.states.push_back(evolve(h, psi0, times[k]));
	}
	out.times = std::move(times);
	return out;
}

EvolutionTrace components_in_frame(EvolutionTrace trace, const BasisTrajectory& frame)
{
	if(trace.times != frame.times())
		throw Error("components_in_frame: time grids differ");
	trace.components.clear();
	for(std::size_t k = 0; k < trace.size(); ++k)
	{
		const auto& f = frame.frame(k);
		if(f.dim() != trace.states[k].dim())
			throw DimensionError("components_in_frame: frame dimension differs from the state");
		trace.components.push_back(f.coordinates(trace.states[k].amplitudes()));
	}
	trace.frame = frame;
	return trace;
}

BasisTrajectory static_frame(const Factorization& f, const std::vector<double>& times)
{
	return BasisTrajectory(times, std::vector<Factorization>(times.size(), f));
}

BasisTrajectory comoving_frame(const PiecewiseHamiltonian& h, const State& psi0, const std::vector<double>& times,
                               std::optional<TensorSplit> split)
{
	if(psi0.dim() != h.dim())
		throw DimensionError("comoving_frame: state and Hamiltonian dimensions differ");
	const TensorSplit s = split.value_or(TensorSplit({h.dim()}));
	const State first[] = {psi0};
	const CMatrix initial = gram_schmidt_complete(first).matrix();
	const double origin = h.segments().empty() ? times.front() : std::min(times.front(), h.segments().front().t_start);

	std::vector<Factorization> frames;
	frames.reserve(times.size());
	for(double t : times)
	{
		const CMatrix moved = h.propagator(origin, t) * initial;
		frames.push_back(Factorization::row_major(OrthonormalBasis(moved), s));
	}
	return BasisTrajectory(times, std::move(frames));
}

CMatrix apparent_generator(const PiecewiseHamiltonian& h, const Factorization& frame_now,
                           const Factorization& frame_later, double t, double dt)
{
	// coordinate transition T with c(t + dt) = T c(t); T = exp(-i K dt)
	const CMatrix transition =
	    frame_later.lattice_basis().adjoint() * h.propagator(t, t + dt) * frame_now.lattice_basis();
	const CMatrix sine = (transition - transition.adjoint()) / cplx(0.0, -2.0);
	Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (sine + sine.adjoint()));
	RVector angles = solver.eigenvalues();
	for(Eigen::Index k = 0; k < angles.size(); ++k)
		angles(k) = std::asin(std::clamp(angles(k), -1.0, 1.0)) / dt;
	const CMatrix& v = solver.eigenvectors();
	return v * angles.cast<cplx>().asDiagonal() * v.adjoint();
}

void add_drift_diagnostics(EvolutionTrace& trace)
{
	if(trace.components.empty())
		throw Error("drift diagnostics need frame components");
	const CVector& c0 = trace.components.front();
	auto& drift = trace.diagnostics["component_drift"];
	auto& modulus = trace.diagnostics["modulus_drift"];
	drift.clear();
	modulus.clear();
	for(const auto& c : trace.components)
	{
		drift.push_back((c - c0).norm());
		modulus.push_back((c.cwiseAbs() - c0.cwiseAbs()).cwiseAbs().maxCoeff());
	}
}

void add_entropy_diagnostic(EvolutionTrace& trace, std::size_t cut, const std::string& name)
{
	if(!trace.frame || trace.components.empty())
		throw Error("entropy diagnostic needs a frame and components");
	const TensorSplit& split = trace.frame->split();
	auto& out = trace.diagnostics[name];
	out.clear();
	if(split.factors() == 1)
	{
		out.assign(trace.components.size(), 0.0);
		return;
	}
	const TensorSplit bi = split.factors() == 2 && cut == 1 ? split : split.bipartition(cut);
	for(const auto& c : trace.components)
		out.push_back(entanglement_entropy(c, bi));
}

std::string to_csv(const EvolutionTrace& trace)
{
	std::ostringstream os;
	os << "time";
	const std::size_t width = trace.components.empty() ? 0 : static_cast<std::size_t>(trace.components.front().size());
	for(std::size_t k = 1; k <= width; ++k)
		os << ",re(c" << k << "),im(c" << k << ")";
	for(const auto& [name, values] : trace.diagnostics)
		os << ',' << name;
	os << '\n';
	for(std::size_t s = 0; s < trace.size(); ++s)
	{
		os << format_number(trace.times[s]);
		for(std::size_t k = 0; k < width; ++k)
		{
			const cplx c = trace.components[s](static_cast<Eigen::Index>(k));
			os << ',' << format_number(c.real()) << ',' << format_number(c.imag());
		}
		for(const auto& [name, values] : trace.diagnostics)
			os << ',' << format_number(values.at(s));
		os << '\n';
	}
	return os.str();
}

} // namespace nirvana
