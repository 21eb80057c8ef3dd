#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nirvana
{

/// Per-factor eigenvalue multisets whose full pairwise (Minkowski) sum
/// reproduces a target spectrum including degeneracies. Every factor after
/// the first has minimum 0; the first carries the overall offset.
struct SpectrumDecomposition
{
	std::vector<std::vector<double>> factors; // each ascending
	double residual = 0.0;                    // max |matched sum - target|
};

/// All sums e_1 + e_2 + ... over one element per factor, ascending.
std::vector<double> minkowski_sum(const std::vector<std::vector<double>>& factors);

/// Bottleneck distance between equal-size multisets (sorted matching).
double multiset_distance(std::vector<double> a, std::vector<double> b);

/// Finds multisets A (size p) and B (size q) with A + B equal to `spectrum`
/// within `tol`, or proves that none exists.
///
/// Branch-and-prune over the sorted spectrum: the smallest unexplained value
/// is always either (new element of A) + min(B) or min(A) + (new element of
/// B). The B-extension is tried first, so among several answers the one
/// whose second factor grows earliest is returned.
///
/// Throws Error when |spectrum| != p q or p, q < 1.
std::optional<SpectrumDecomposition> sumset_decompose(std::span<const double> spectrum, std::size_t p,
                                                      std::size_t q, double tol);

/// Multi-factor form by repeated bipartition: dims[0] against the product of
/// the rest, recursing into the remainder. Backtracks across levels.
std::optional<SpectrumDecomposition> sumset_decompose(std::span<const double> spectrum,
                                                      std::span<const std::size_t> dims, double tol);

} // namespace nirvana
