#pragma once

#include "nirvana/hilbert.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>

namespace support
{

using nirvana::CMatrix;
using nirvana::CVector;
using nirvana::cplx;

inline const double kRoot2 = 1.0 / std::sqrt(2.0);

inline CVector vec(std::initializer_list<cplx> xs)
{
	CVector v(static_cast<Eigen::Index>(xs.size()));
	Eigen::Index k = 0;
	for(auto x : xs)
		v(k++) = x;
	return v;
}

/// Max-norm distance after removing the best global phase.
inline double phase_free_distance(const CVector& c, const CVector& target)
{
	const cplx ov = target.dot(c);
	const cplx phase = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
	return (c / phase - target).cwiseAbs().maxCoeff();
}

inline double max_abs(const CMatrix& m)
{
	return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

} // namespace support
