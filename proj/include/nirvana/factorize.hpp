#pragma once

#include "nirvana/dynamics.hpp"
#include "nirvana/hilbert.hpp"
#include "nirvana/sumset.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nirvana
{

/// Builds a factorization from a basis and an explicit labeling
/// (labels[k] = multi-index of basis vector k).
Factorization factorization_from_labeling(OrthonormalBasis basis, TensorSplit split, std::vector<MultiIndex> labels);

/// H = H1 (x) I + I (x) H2 - c I + Hint, with (H1, H2, c) the Hilbert-Schmidt
/// projection of H onto the local operators. All matrices are expressed in
/// the factorization's tensor-layout basis.
struct LocalDecomposition
{
	CMatrix h1;
	CMatrix h2;
	double c = 0.0;
	CMatrix hint;
	TensorSplit split;

	double interaction_norm() const { return hint.norm(); }
	CMatrix reconstruct() const;
};

/// Projection of a matrix already written in tensor layout (bipartite split).
LocalDecomposition local_projection(const CMatrix& h, const TensorSplit& split);

/// Writes H in f's basis, then projects. H1 = Tr_2(H) / q, H2 = Tr_1(H) / p,
/// c = Tr(H) / (p q). Throws unless f is bipartite and H hermitian.
LocalDecomposition nearest_local_decomposition(const Operator& h, const Factorization& f);

/// ||Hint psi|| for the decomposition of H under f (psi in the ambient basis).
double interaction_action(const Operator& h, const Factorization& f, const State& psi);

enum class FactorizationKind
{
	static_nirvana,
	samsara_branches,
	dynamic_nirvana,
	optimized,
};

std::string_view to_string(FactorizationKind kind);

/// Result of a factorization construction together with the trajectory
/// "story" it tells.
struct FactorizationReport
{
	std::variant<std::monostate, Factorization, BasisTrajectory> factorization;
	FactorizationKind kind = FactorizationKind::optimized;
	/// static kinds: ||Hint||_F; dynamic-nirvana: max_t ||c(t) - c(0)||;
	/// optimized: the selected objective.
	double objective_value = 0.0;
	std::optional<SpectrumDecomposition> sumset;
	/// Per-time diagnostics; filled when a trajectory was supplied.
	std::vector<double> times;
	std::map<std::string, std::vector<double>> story;
	std::vector<CVector> components;
	std::vector<std::string> notes;
	/// Named pass/fail checks performed while building the report.
	std::map<std::string, bool> checks;

	// Optimizer bookkeeping.
	std::vector<double> objective_trace;
	std::size_t iterations = 0;
	bool converged = true;

	bool all_checks_pass() const;
	const Factorization& static_factorization() const;
};

/// Diagonalizes H and looks for an additive split of its spectrum into p and
/// q levels. On success the eigenvectors are labeled (i, j) so that
/// E_n = E1_i + E2_j and the report is static-nirvana with Hint = 0. Otherwise
/// eigenvectors are labeled row-major in ascending energy and the report is
/// samsara-branches. Throws DimensionError unless dim(H) = p q with p, q >= 2.
FactorizationReport static_nirvana_factorization(const Operator& h, std::size_t p, std::size_t q, double tol);

/// Adds per-time diagnostics for a static factorization: entropy, interaction
/// norm and interaction action of the segment generator active at t,
/// apparent interaction action, component and modulus drift.
void tell_story(FactorizationReport& report, const PiecewiseHamiltonian& h, const State& psi0,
                const std::vector<double>& times);

/// Comoving (Heisenberg-like) frame labeled so that the evolving state is
/// always the multi-index (0, 0, ...). Certifies constant coordinates,
/// zero entanglement entropy, and a vanishing apparent generator.
FactorizationReport dynamic_nirvana_factorization(const PiecewiseHamiltonian& h, const State& psi0,
                                                  const TensorSplit& split, const std::vector<double>& times);

/// Apparent-generator step used by the dynamic story.
inline constexpr double kApparentStep = 1e-4;

// ---------------------------------------------------------------------------
// Numerical factorization search

enum class Objective
{
	interaction_norm, // ||Hint||_F of H in the candidate basis
	mean_entropy,     // mean entanglement entropy of the trajectory samples
};

std::optional<Objective> parse_objective(std::string_view name);
std::string_view to_string(Objective objective);

enum class DescentMethod
{
	automatic,        // Gauss-Newton for interaction-norm, gradient descent otherwise
	gradient_descent, // steepest descent along the finite-difference gradient
	gauss_newton,     // interaction-norm only: least-squares step on the Hint entries
};

struct OptimizerOptions
{
	DescentMethod method = DescentMethod::automatic;
	/// First trial step; after an accepted step the next trial doubles the
	/// accepted one, capped at max_learning_rate, and halves on failure.
	double learning_rate = 0.1;
	double max_learning_rate = 10.0;
	/// Objective value treated as an exact zero.
	double objective_floor = 1e-10;
	double fd_step = 1e-5;
	double gradient_tol = 1e-7;
	std::size_t max_iterations = 5000;
	/// Backtracking halvings tried before a step is declared unproductive.
	std::size_t max_halvings = 40;
	std::uint64_t seed = 0;
	/// Random restarts after the start at theta = 0 (0 = none).
	std::size_t restarts = 0;
	/// Trajectory grid for the mean-entropy objective.
	std::vector<double> times = {0.0, 0.25, 0.5, 0.75, 1.0};
};

/// Hermitian generators G_a, orthonormal under the Hilbert-Schmidt inner
/// product (dim^2 of them).
std::vector<CMatrix> hermitian_generators(std::size_t dim);

/// Evaluates the objective for the basis V (columns) labeled row-major.
double evaluate_objective(Objective objective, const Operator& h, const State& psi0, const TensorSplit& split,
                          const CMatrix& basis, const std::vector<double>& times);

/// Descent over V(theta) = V0 exp(i sum theta_a G_a) with central
/// finite-difference derivatives and backtracking halving of the step. After
/// every accepted step V0 absorbs the step and theta restarts at zero. For
/// interaction-norm the step direction is Gauss-Newton preconditioned (the
/// objective is the norm of the Hint entries); mean-entropy uses the plain
/// gradient. The objective trace never increases.
FactorizationReport optimize_factorization(const Operator& h, const State& psi0, const TensorSplit& split,
                                           Objective objective, const OptimizerOptions& options = {});

} // namespace nirvana
