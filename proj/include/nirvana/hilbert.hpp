#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nirvana
{

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Construction and certification tolerance (relative where a norm is available).
inline constexpr double kTol = 1e-10;
/// Residual tolerance of the eigensolver, scaled by the Frobenius norm of the input.
inline constexpr double kEigTol = 1e-9;
/// Schmidt weights below this are clamped to zero.
inline constexpr double kSchmidtFloor = 1e-12;
/// Smallest admissible singular value when completing a basis.
inline constexpr double kIndependenceFloor = 1e-8;

class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
	using Error::Error;
};

class NotHermitianError : public Error
{
public:
	using Error::Error;
};

// ---------------------------------------------------------------------------
// Values

/// Unit-norm amplitude vector.
class State
{
public:
	/// Throws if the norm deviates from one by more than `tol`.
	explicit State(CVector amplitudes, double tol = kTol);

	/// Rescales a nonzero vector to unit norm.
	static State normalized(const CVector& v);
	/// Standard basis vector |k> of a dim-dimensional space.
	static State basis(std::size_t dim, std::size_t k);

	std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
	const CVector& amplitudes() const { return amplitudes_; }
	cplx operator[](std::size_t k) const { return amplitudes_(static_cast<Eigen::Index>(k)); }

private:
	CVector amplitudes_;
};

/// Square complex matrix, certified hermitian and/or unitary at construction.
class Operator
{
public:
	explicit Operator(CMatrix entries);

	/// Throws NotHermitianError unless ||A - A^dagger||_F <= tol (1 + ||A||_F).
	static Operator hermitian(CMatrix entries);
	static Operator identity(std::size_t dim);
	static Operator zero(std::size_t dim);

	std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
	const CMatrix& matrix() const { return entries_; }
	bool is_hermitian() const { return hermitian_; }
	bool is_unitary() const { return unitary_; }
	double frobenius_norm() const { return entries_.norm(); }

	CVector apply(const CVector& v) const;
	State apply(const State& psi) const;

private:
	CMatrix entries_;
	bool hermitian_ = false;
	bool unitary_ = false;
};

/// Orthonormal basis stored as the columns of a unitary matrix.
class OrthonormalBasis
{
public:
	explicit OrthonormalBasis(CMatrix columns);
	static OrthonormalBasis standard(std::size_t dim);
	static OrthonormalBasis from_states(std::span<const State> vectors);

	std::size_t dim() const { return static_cast<std::size_t>(columns_.rows()); }
	const CMatrix& matrix() const { return columns_; }
	State vector(std::size_t k) const;

	/// Coordinates <v_k|psi> of a state in this basis.
	CVector coordinates(const CVector& psi) const { return columns_.adjoint() * psi; }
	CVector reconstruct(const CVector& coords) const { return columns_ * coords; }

private:
	CMatrix columns_;
};

/// Factor dimensions of a tensor-product presentation. Multi-indices are
/// flattened row-major: the last factor varies fastest.
class TensorSplit
{
public:
	explicit TensorSplit(std::vector<std::size_t> factor_dims);

	const std::vector<std::size_t>& factor_dims() const { return dims_; }
	std::size_t factors() const { return dims_.size(); }
	std::size_t factor_dim(std::size_t k) const { return dims_.at(k); }
	std::size_t total() const { return total_; }
	bool bipartite() const { return dims_.size() == 2; }

	std::size_t flat_index(std::span<const std::size_t> multi) const;
	std::vector<std::size_t> multi_index(std::size_t flat) const;

	/// Groups factors [0, cut) and [cut, n) into a two-factor split.
	TensorSplit bipartition(std::size_t cut) const;

	bool operator==(const TensorSplit&) const = default;

private:
	std::vector<std::size_t> dims_;
	std::size_t total_ = 1;
};

using MultiIndex = std::vector<std::size_t>;

/// An orthonormal basis together with a labeling that assigns every basis
/// vector a multi-index of the split. The labeling defines the subsystems.
class Factorization
{
public:
	/// `labels[k]` is the multi-index of basis vector k. Throws unless the
	/// labeling is a bijection onto the split's index lattice.
	Factorization(OrthonormalBasis basis, TensorSplit split, std::vector<MultiIndex> labels);

	/// Basis vector k gets the multi-index whose row-major flat index is k.
	static Factorization row_major(OrthonormalBasis basis, TensorSplit split);
	static Factorization standard(TensorSplit split);

	const OrthonormalBasis& basis() const { return basis_; }
	const TensorSplit& split() const { return split_; }
	const std::vector<MultiIndex>& labels() const { return labels_; }
	std::size_t dim() const { return basis_.dim(); }

	/// Basis columns reordered so that column r carries lattice index r.
	const CMatrix& lattice_basis() const { return lattice_; }

	/// Tensor-layout coordinates of psi (component r belongs to lattice index r).
	CVector coordinates(const CVector& psi) const { return lattice_.adjoint() * psi; }
	/// H expressed in the tensor-layout basis.
	CMatrix express(const CMatrix& op) const { return lattice_.adjoint() * op * lattice_; }

private:
	OrthonormalBasis basis_;
	TensorSplit split_;
	std::vector<MultiIndex> labels_;
	CMatrix lattice_;
};

/// Time-sampled sequence of factorizations sharing one split.
class BasisTrajectory
{
public:
	BasisTrajectory(std::vector<double> times, std::vector<Factorization> frames);

	const std::vector<double>& times() const { return times_; }
	const std::vector<Factorization>& frames() const { return frames_; }
	const Factorization& frame(std::size_t k) const { return frames_.at(k); }
	std::size_t size() const { return times_.size(); }
	const TensorSplit& split() const { return frames_.front().split(); }

private:
	std::vector<double> times_;
	std::vector<Factorization> frames_;
};

// ---------------------------------------------------------------------------
// Operations

cplx inner(const State& a, const State& b);

/// Modulus of the overlap; 1 means equal up to global phase.
double overlap_modulus(const CVector& a, const CVector& b);
bool same_up_to_phase(const CVector& a, const CVector& b, double tol = kTol);

State tensor(std::span<const State> states);
Operator kron(std::span<const Operator> ops);
CMatrix kron(const CMatrix& a, const CMatrix& b);

struct Eigensystem
{
	RVector values; // ascending
	OrthonormalBasis basis;
};

Eigensystem eigh(const Operator& h);

/// Reduced operator on factor `keep`, tracing out every other factor.
CMatrix partial_trace(const CMatrix& rho, const TensorSplit& split, std::size_t keep);
Operator partial_trace(const Operator& rho, const TensorSplit& split, std::size_t keep);

CMatrix density(const CVector& psi);

struct SchmidtDecomposition
{
	RVector coefficients; // descending, sum of squares one
	CMatrix left;         // columns a_k on factor 0
	CMatrix right;        // columns b_k on factor 1

	CVector reconstruct() const;
};

SchmidtDecomposition schmidt(const CVector& psi, const TensorSplit& split);
SchmidtDecomposition schmidt(const State& psi, const TensorSplit& split);

/// Von Neumann entropy of either reduced state, in nats.
double entanglement_entropy(const CVector& psi, const TensorSplit& split);
double entanglement_entropy(const State& psi, const TensorSplit& split);
/// Entropy of a probability vector with 0 ln 0 = 0.
double shannon_entropy(const RVector& weights);

/// Involutive unitary exchanging two orthonormal vectors and fixing their
/// orthogonal complement.
Operator swap_basis_unitary(const State& e1, const State& e2);

/// Extends linearly independent vectors to a full orthonormal basis. The
/// first k output vectors span the input; an orthonormal input is kept as is.
/// The completion runs Gram-Schmidt over the standard basis in order.
OrthonormalBasis gram_schmidt_complete(std::span<const State> partial);
OrthonormalBasis gram_schmidt_complete(std::span<const State> partial, std::size_t dim);

} // namespace nirvana
