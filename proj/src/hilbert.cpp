#include "nirvana/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nirvana
{

namespace
{

bool check_hermitian(const CMatrix& m)
{
	return (m - m.adjoint()).norm() <= kTol * (1.0 + m.norm());
}

bool check_unitary(const CMatrix& m)
{
	const auto n = m.rows();
	return (m.adjoint() * m - CMatrix::Identity(n, n)).norm() <= kTol;
}

void require_square(const CMatrix& m)
{
	if(m.rows() != m.cols() || m.rows() == 0)
		throw DimensionError("operator must be a nonempty square matrix");
}

void require_same_dim(std::size_t a, std::size_t b, const char* what)
{
	if(a != b)
		throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
		                     std::to_string(b) + ")");
}

} // namespace

// ---------------------------------------------------------------------------
// State

State::State(CVector amplitudes, double tol) : amplitudes_(std::move(amplitudes))
{
	if(amplitudes_.size() == 0)
		throw DimensionError("state dimension must be positive");
	if(std::abs(amplitudes_.norm() - 1.0) > tol)
		throw Error("state is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
}

State State::normalized(const CVector& v)
{
	const double n = v.norm();
	if(v.size() == 0 || n == 0.0)
		throw Error("cannot normalize the zero vector");
	return State(v / n);
}

State State::basis(std::size_t dim, std::size_t k)
{
	if(k >= dim)
		throw DimensionError("basis index out of range");
	CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
	v(static_cast<Eigen::Index>(k)) = 1.0;
	return State(std::move(v));
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(CMatrix entries) : entries_(std::move(entries))
{
	require_square(entries_);
	hermitian_ = check_hermitian(entries_);
	unitary_ = check_unitary(entries_);
}

Operator Operator::hermitian(CMatrix entries)
{
	Operator op(std::move(entries));
	if(!op.is_hermitian())
		throw NotHermitianError("operator is not hermitian within tolerance");
	return op;
}

Operator Operator::identity(std::size_t dim)
{
	const auto n = static_cast<Eigen::Index>(dim);
	return Operator(CMatrix::Identity(n, n));
}

Operator Operator::zero(std::size_t dim)
{
	const auto n = static_cast<Eigen::Index>(dim);
	return Operator(CMatrix::Zero(n, n));
}

CVector Operator::apply(const CVector& v) const
{
	require_same_dim(dim(), static_cast<std::size_t>(v.size()), "apply");
	return entries_ * v;
}

State Operator::apply(const State& psi) const
{
	if(!unitary_)
		throw Error("only unitary operators map states to states");
	return State::normalized(apply(psi.amplitudes()));
}

// ---------------------------------------------------------------------------
// OrthonormalBasis

OrthonormalBasis::OrthonormalBasis(CMatrix columns) : columns_(std::move(columns))
{
	require_square(columns_);
	const auto n = columns_.rows();
	const CMatrix gram = columns_.adjoint() * columns_;
	if((gram - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > kTol)
		throw Error("basis vectors are not orthonormal");
}

OrthonormalBasis OrthonormalBasis::standard(std::size_t dim)
{
	const auto n = static_cast<Eigen::Index>(dim);
	return OrthonormalBasis(CMatrix::Identity(n, n));
}

OrthonormalBasis OrthonormalBasis::from_states(std::span<const State> vectors)
{
	if(vectors.empty())
		throw DimensionError("empty basis");
	const auto n = static_cast<Eigen::Index>(vectors.front().dim());
	if(static_cast<Eigen::Index>(vectors.size()) != n)
		throw DimensionError("basis needs exactly dim vectors");
	CMatrix m(n, n);
	for(Eigen::Index k = 0; k < n; ++k)
	{
		require_same_dim(vectors[k].dim(), vectors.front().dim(), "basis");
		m.col(k) = vectors[k].amplitudes();
	}
	return OrthonormalBasis(std::move(m));
}

State OrthonormalBasis::vector(std::size_t k) const
{
	return State(columns_.col(static_cast<Eigen::Index>(k)), 1e-8);
}

// ---------------------------------------------------------------------------
// TensorSplit

TensorSplit::TensorSplit(std::vector<std::size_t> factor_dims) : dims_(std::move(factor_dims))
{
	if(dims_.empty())
		throw DimensionError("tensor split needs at least one factor");
	for(auto d : dims_)
	{
		if(d < 2)
			throw DimensionError("tensor factors must have dimension >= 2");
		total_ *= d;
	}
}

std::size_t TensorSplit::flat_index(std::span<const std::size_t> multi) const
{
	if(multi.size() != dims_.size())
		throw DimensionError("multi-index has wrong arity");
	std::size_t flat = 0;
	for(std::size_t k = 0; k < dims_.size(); ++k)
	{
		if(multi[k] >= dims_[k])
			throw DimensionError("multi-index component out of range");
		flat = flat * dims_[k] + multi[k];
	}
	return flat;
}

std::vector<std::size_t> TensorSplit::multi_index(std::size_t flat) const
{
	if(flat >= total_)
		throw DimensionError("flat index out of range");
	std::vector<std::size_t> multi(dims_.size());
	for(std::size_t k = dims_.size(); k-- > 0;)
	{
		multi[k] = flat % dims_[k];
		flat /= dims_[k];
	}
	return multi;
}

TensorSplit TensorSplit::bipartition(std::size_t cut) const
{
	if(cut == 0 || cut >= dims_.size())
		throw DimensionError("bipartition cut must separate two nonempty groups");
	const auto left = std::accumulate(dims_.begin(), dims_.begin() + static_cast<std::ptrdiff_t>(cut),
	                                  std::size_t{1}, std::multiplies<>());
	return TensorSplit({left, total_ / left});
}

// ---------------------------------------------------------------------------
// Factorization

Factorization::Factorization(OrthonormalBasis basis, TensorSplit split, std::vector<MultiIndex> labels)
    : basis_(std::move(basis)), split_(std::move(split)), labels_(std::move(labels))
{
	const auto n = basis_.dim();
	require_same_dim(n, split_.total(), "factorization");
	if(labels_.size() != n)
		throw Error("labeling must assign a multi-index to every basis vector");

	lattice_ = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
	std::vector<bool> hit(n, false);
	for(std::size_t k = 0; k < n; ++k)
	{
		const auto r = split_.flat_index(labels_[k]);
		if(hit[r])
			throw Error("labeling is not a bijection: repeated multi-index");
		hit[r] = true;
		lattice_.col(static_cast<Eigen::Index>(r)) = basis_.matrix().col(static_cast<Eigen::Index>(k));
	}
}

Factorization Factorization::row_major(OrthonormalBasis basis, TensorSplit split)
{
	std::vector<MultiIndex> labels;
	labels.reserve(basis.dim());
	for(std::size_t k = 0; k < basis.dim(); ++k)
		labels.push_back(split.multi_index(k));
	return Factorization(std::move(basis), std::move(split), std::move(labels));
}

Factorization Factorization::standard(TensorSplit split)
{
	auto basis = OrthonormalBasis::standard(split.total());
	return row_major(std::move(basis), std::move(split));
}

// ---------------------------------------------------------------------------
// BasisTrajectory

BasisTrajectory::BasisTrajectory(std::vector<double> times, std::vector<Factorization> frames)
    : times_(std::move(times)), frames_(std::move(frames))
{
	if(times_.empty() || times_.size() != frames_.size())
		throw Error("basis trajectory needs one frame per time sample");
	for(std::size_t k = 1; k < times_.size(); ++k)
	{
		if(!(times_[k] > times_[k - 1]))
			throw Error("basis trajectory times must be strictly increasing");
		if(!(frames_[k].split() == frames_.front().split()))
			throw DimensionError("basis trajectory frames must share one split");
	}
}

// ---------------------------------------------------------------------------
// Operations

cplx inner(const State& a, const State& b)
{
	require_same_dim(a.dim(), b.dim(), "inner");
	return a.amplitudes().dot(b.amplitudes()); // conjugates the first argument
}

double overlap_modulus(const CVector& a, const CVector& b)
{
	require_same_dim(static_cast<std::size_t>(a.size()), static_cast<std::size_t>(b.size()), "overlap");
	return std::abs(a.dot(b));
}

bool same_up_to_phase(const CVector& a, const CVector& b, double tol)
{
	return overlap_modulus(a, b) >= 1.0 - tol;
}

CMatrix kron(const CMatrix& a, const CMatrix& b)
{
	CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
	for(Eigen::Index i = 0; i < a.rows(); ++i)
		for(Eigen::Index j = 0; j < a.cols(); ++j)
			out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
	return out;
}

State tensor(std::span<const State> states)
{
	if(states.empty())
		throw Error("tensor product of an empty sequence");
	CMatrix acc = states.front().amplitudes();
	for(std::size_t k = 1; k < states.size(); ++k)
		acc = kron(acc, CMatrix(states[k].amplitudes()));
	return State(acc.col(0), 1e-9);
}

Operator kron(std::span<const Operator> ops)
{
	if(ops.empty())
		throw Error("Kronecker product of an empty sequence");
	CMatrix acc = ops.front().matrix();
	for(std::size_t k = 1; k < ops.size(); ++k)
		acc = kron(acc, ops[k].matrix());
	return Operator(std::move(acc));
}

Eigensystem eigh(const Operator& h)
{
	if(!h.is_hermitian())
		throw NotHermitianError("eigh requires a hermitian operator");
	// symmetrize away the certified round-off before solving
	const CMatrix sym = 0.5 * (h.matrix() + h.matrix().adjoint());
	Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
	if(solver.info() != Eigen::Success)
		throw Error("eigensolver failed to converge");
	return {solver.eigenvalues(), OrthonormalBasis(solver.eigenvectors())};
}

CMatrix partial_trace(const CMatrix& rho, const TensorSplit& split, std::size_t keep)
{
	if(keep >= split.factors())
		throw DimensionError("partial trace: factor index out of range");
	require_square(rho);
	require_same_dim(static_cast<std::size_t>(rho.rows()), split.total(), "partial trace");

	const auto& dims = split.factor_dims();
	Eigen::Index outer = 1, inner_dim = 1;
	for(std::size_t k = 0; k < keep; ++k)
		outer *= static_cast<Eigen::Index>(dims[k]);
	for(std::size_t k = keep + 1; k < dims.size(); ++k)
		inner_dim *= static_cast<Eigen::Index>(dims[k]);
	const auto d = static_cast<Eigen::Index>(dims[keep]);

	CMatrix out = CMatrix::Zero(d, d);
	for(Eigen::Index l = 0; l < outer; ++l)
		for(Eigen::Index r = 0; r < inner_dim; ++r)
			for(Eigen::Index a = 0; a < d; ++a)
				for(Eigen::Index b = 0; b < d; ++b)
					out(a, b) += rho((l * d + a) * inner_dim + r, (l * d + b) * inner_dim + r);
	return out;
}

Operator partial_trace(const Operator& rho, const TensorSplit& split, std::size_t keep)
{
	return Operator(partial_trace(rho.matrix(), split, keep));
}

CMatrix density(const CVector& psi)
{
	return psi * psi.adjoint();
}

CVector SchmidtDecomposition::reconstruct() const
{
	CVector out = CVector::Zero(left.rows() * right.rows());
	for(Eigen::Index k = 0; k < coefficients.size(); ++k)
		out += coefficients(k) * kron(CMatrix(left.col(k)), CMatrix(right.col(k))).col(0);
	return out;
}

SchmidtDecomposition schmidt(const CVector& psi, const TensorSplit& split)
{
	if(!split.bipartite())
		throw DimensionError("Schmidt decomposition requires a bipartite split");
	require_same_dim(static_cast<std::size_t>(psi.size()), split.total(), "schmidt");

	const auto p = static_cast<Eigen::Index>(split.factor_dim(0));
	const auto q = static_cast<Eigen::Index>(split.factor_dim(1));
	// row-major reshape: M(i, j) = psi[i q + j]
	CMatrix m(p, q);
	for(Eigen::Index i = 0; i < p; ++i)
		for(Eigen::Index j = 0; j < q; ++j)
			m(i, j) = psi(i * q + j);

	Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
	RVector s = svd.singularValues();
	for(Eigen::Index k = 0; k < s.size(); ++k)
		if(s(k) * s(k) < kSchmidtFloor)
			s(k) = 0.0;
	// M = U S V^dagger, so psi = sum_k s_k u_k (x) conj(v_k)
	return {s, svd.matrixU(), svd.matrixV().conjugate()};
}

SchmidtDecomposition schmidt(const State& psi, const TensorSplit& split)
{
	return schmidt(psi.amplitudes(), split);
}

double shannon_entropy(const RVector& weights)
{
	double s = 0.0;
	for(Eigen::Index k = 0; k < weights.size(); ++k)
		if(weights(k) > 0.0)
			s -= weights(k) * std::log(weights(k));
	return std::max(s, 0.0);
}

double entanglement_entropy(const CVector& psi, const TensorSplit& split)
{
	const auto sd = schmidt(psi, split);
	return shannon_entropy(sd.coefficients.array().square().matrix());
}

double entanglement_entropy(const State& psi, const TensorSplit& split)
{
	return entanglement_entropy(psi.amplitudes(), split);
}

Operator swap_basis_unitary(const State& e1, const State& e2)
{
	require_same_dim(e1.dim(), e2.dim(), "swap_basis_unitary");
	if(std::abs(inner(e1, e2)) > kTol)
		throw Error("swap_basis_unitary requires orthogonal vectors");
	const auto& a = e1.amplitudes();
	const auto& b = e2.amplitudes();
	const auto n = static_cast<Eigen::Index>(e1.dim());
	// identity on the complement, exchange inside span{a, b}
	CMatrix u = CMatrix::Identity(n, n) - a * a.adjoint() - b * b.adjoint() + b * a.adjoint() + a * b.adjoint();
	return Operator(std::move(u));
}

OrthonormalBasis gram_schmidt_complete(std::span<const State> partial, std::size_t dim)
{
	const auto n = static_cast<Eigen::Index>(dim);
	const auto k = static_cast<Eigen::Index>(partial.size());
	if(n == 0 || k > n)
		throw DimensionError("cannot complete: too many vectors for the dimension");

	CMatrix q = CMatrix::Zero(n, n);
	if(k > 0)
	{
		CMatrix input(n, k);
		for(Eigen::Index c = 0; c < k; ++c)
		{
			require_same_dim(partial[c].dim(), dim, "gram_schmidt_complete");
			input.col(c) = partial[c].amplitudes();
		}
		Eigen::JacobiSVD<CMatrix> svd(input);
		if(svd.singularValues().minCoeff() < kIndependenceFloor)
			throw Error("cannot complete a linearly dependent set");
	}

	Eigen::Index filled = 0;
	auto push = [&](CVector v) {
		// modified Gram-Schmidt, applied twice for stability
		for(int pass = 0; pass < 2; ++pass)
			for(Eigen::Index c = 0; c < filled; ++c)
				v -= q.col(c).dot(v) * q.col(c);
		const double norm = v.norm();
		if(norm < kIndependenceFloor)
			return false;
		q.col(filled++) = v / norm;
		return true;
	};

	for(Eigen::Index c = 0; c < k; ++c)
		push(partial[c].amplitudes());
	for(Eigen::Index c = 0; c < n && filled < n; ++c)
	{
		CVector e = CVector::Zero(n);
		e(c) = 1.0;
		// standard vectors already nearly spanned are skipped
		CVector r = e;
		for(Eigen::Index j = 0; j < filled; ++j)
			r -= q.col(j).dot(r) * q.col(j);
		if(r.norm() > 1e-6)
			push(std::move(e));
	}
	return OrthonormalBasis(std::move(q));
}

OrthonormalBasis gram_schmidt_complete(std::span<const State> partial)
{
	if(partial.empty())
		throw DimensionError("cannot infer the dimension of an empty set");
	return gram_schmidt_complete(partial, partial.front().dim());
}

} // namespace nirvana
