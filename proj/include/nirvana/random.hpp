#pragma once

#include "nirvana/hilbert.hpp"

#include <cstdint>
#include <random>

namespace nirvana
{

using Rng = std::mt19937_64;

/// Complex matrix with i.i.d. standard complex Gaussian entries.
CMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
/// Hermitian (G + G^dagger) / 2 with G Ginibre; spectrum of order sqrt(dim).
Operator random_hermitian(std::size_t dim, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Operator random_unitary(std::size_t dim, Rng& rng);
/// Haar-random pure state.
State random_state(std::size_t dim, Rng& rng);

} // namespace nirvana
