#include "nirvana/sumset.hpp"

#include "nirvana/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace nirvana
{

namespace
{

using Accept = std::function<bool(const std::vector<double>&, const std::vector<double>&)>;

class SumsetSearch
{
public:
	SumsetSearch(std::vector<double> sorted, std::size_t p, std::size_t q, double tol, Accept accept)
	    : s_(std::move(sorted)), used_(s_.size(), false), p_(p), q_(q), tol_(tol), accept_(std::move(accept))
	{
	}

	bool run()
	{
		a_ = {s_.front()};
		b_ = {0.0};
		used_[0] = true;
		return descend();
	}

	const std::vector<double>& a() const { return a_; }
	const std::vector<double>& b() const { return b_; }

private:
	// Index of the unused element closest to target within tol, or npos.
	std::size_t take(double target)
	{
		auto it = std::lower_bound(s_.begin(), s_.end(), target - tol_);
		std::size_t best = npos;
		double best_err = tol_;
		for(auto k = static_cast<std::size_t>(it - s_.begin()); k < s_.size() && s_[k] <= target + tol_; ++k)
		{
			const double err = std::abs(s_[k] - target);
			if(!used_[k] && err <= best_err)
			{
				// ties keep the earliest index
				if(best == npos || err < best_err)
				{
					best = k;
					best_err = err;
				}
			}
		}
		if(best != npos)
			used_[best] = true;
		return best;
	}

	void release(const std::vector<std::size_t>& taken)
	{
		for(auto k : taken)
			used_[k] = false;
	}

	// Removes x + others[i] for every i; on failure nothing stays taken.
	bool take_row(double x, const std::vector<double>& others, std::vector<std::size_t>& taken)
	{
		for(double y : others)
		{
			const auto k = take(x + y);
			if(k == npos)
			{
				release(taken);
				taken.clear();
				return false;
			}
			taken.push_back(k);
		}
		return true;
	}

	bool descend()
	{
		const auto first = std::find(used_.begin(), used_.end(), false);
		if(first == used_.end())
			return a_.size() == p_ && b_.size() == q_ && accept_(a_, b_);
		const double r = s_[static_cast<std::size_t>(first - used_.begin())];

		if(b_.size() < q_)
		{
			const double b = r - a_.front();
			std::vector<std::size_t> taken;
			if(take_row(b, a_, taken))
			{
				b_.push_back(b);
				if(descend())
					return true;
				b_.pop_back();
				release(taken);
			}
		}
		if(a_.size() < p_)
		{
			const double a = r - b_.front();
			std::vector<std::size_t> taken;
			if(take_row(a, b_, taken))
			{
				a_.push_back(a);
				if(descend())
					return true;
				a_.pop_back();
				release(taken);
			}
		}
		return false;
	}

	static constexpr std::size_t npos = static_cast<std::size_t>(-1);

	std::vector<double> s_;
	std::vector<bool> used_;
	std::size_t p_, q_;
	double tol_;
	Accept accept_;
	std::vector<double> a_, b_;
};

std::vector<double> sorted_copy(std::span<const double> v)
{
	std::vector<double> out(v.begin(), v.end());
	std::sort(out.begin(), out.end());
	return out;
}

std::optional<SpectrumDecomposition> search(std::span<const double> spectrum, std::span<const std::size_t> dims,
                                            double tol)
{
	const auto total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
	if(dims.empty() || total != spectrum.size())
		throw Error("sumset_decompose: spectrum size does not match the factor dimensions");
	if(dims.size() == 1)
		return SpectrumDecomposition{{sorted_copy(spectrum)}, 0.0};

	const std::size_t p = dims.front();
	const std::size_t q = total / p;
	const auto rest = dims.subspan(1);

	std::optional<SpectrumDecomposition> found;
	auto accept = [&](const std::vector<double>& a, const std::vector<double>& b) {
		auto inner_result = search(b, rest, tol);
		if(!inner_result)
			return false;
		SpectrumDecomposition d;
		d.factors.push_back(a);
		for(auto& f : inner_result->factors)
			d.factors.push_back(std::move(f));
		found = std::move(d);
		return true;
	};

	SumsetSearch s(sorted_copy(spectrum), p, q, tol, accept);
	if(!s.run())
		return std::nullopt;
	found->residual = multiset_distance(minkowski_sum(found->factors), sorted_copy(spectrum));
	return found;
}

} // namespace

std::vector<double> minkowski_sum(const std::vector<std::vector<double>>& factors)
{
	std::vector<double> acc{0.0};
	for(const auto& f : factors)
	{
		std::vector<double> next;
		next.reserve(acc.size() * f.size());
		for(double x : acc)
			for(double y : f)
				next.push_back(x + y);
		acc = std::move(next);
	}
	std::sort(acc.begin(), acc.end());
	return acc;
}

double multiset_distance(std::vector<double> a, std::vector<double> b)
{
	if(a.size() != b.size())
		throw Error("multiset_distance: sizes differ");
	std::sort(a.begin(), a.end());
	std::sort(b.begin(), b.end());
	double d = 0.0;
	for(std::size_t k = 0; k < a.size(); ++k)
		d = std::max(d, std::abs(a[k] - b[k]));
	return d;
}

std::optional<SpectrumDecomposition> sumset_decompose(std::span<const double> spectrum, std::size_t p,
                                                      std::size_t q, double tol)
{
	if(p == 0 || q == 0 || spectrum.size() != p * q)
		throw Error("sumset_decompose: |spectrum| must equal p * q");
	const std::size_t dims[] = {p, q};
	return search(spectrum, dims, tol);
}

std::optional<SpectrumDecomposition> sumset_decompose(std::span<const double> spectrum,
                                                      std::span<const std::size_t> dims, double tol)
{
	for(auto d : dims)
		if(d == 0)
			throw Error("sumset_decompose: factor dimensions must be positive");
	return search(spectrum, dims, tol);
}

} // namespace nirvana
