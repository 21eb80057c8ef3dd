#include "nirvana/random.hpp"

namespace nirvana
{

CMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng)
{
	std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
	CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
	for(Eigen::Index j = 0; j < m.cols(); ++j)
		for(Eigen::Index i = 0; i < m.rows(); ++i)
		{
			const double re = gauss(rng);
			const double im = gauss(rng);
			m(i, j) = cplx(re, im);
		}
	return m;
}

Operator random_hermitian(std::size_t dim, Rng& rng)
{
	const CMatrix g = random_ginibre(dim, dim, rng);
	return Operator::hermitian(0.5 * (g + g.adjoint()));
}

Operator random_unitary(std::size_t dim, Rng& rng)
{
	const CMatrix g = random_ginibre(dim, dim, rng);
	Eigen::HouseholderQR<CMatrix> qr(g);
	CMatrix q = qr.householderQ();
	const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
	for(Eigen::Index k = 0; k < q.cols(); ++k)
	{
		const cplx d = r(k, k);
		if(std::abs(d) > 0.0)
			q.col(k) *= d / std::abs(d);
	}
	return Operator(std::move(q));
}

State random_state(std::size_t dim, Rng& rng)
{
	return State::normalized(random_ginibre(dim, 1, rng).col(0));
}

} // namespace nirvana
