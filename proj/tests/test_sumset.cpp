#include "nirvana/random.hpp"
#include "nirvana/sumset.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace nirvana;

namespace
{

bool reexpands(const SpectrumDecomposition& d, const std::vector<double>& spectrum, double tol)
{
	return oracle::same_multiset(minkowski_sum(d.factors), spectrum, tol);
}

} // namespace

TEST_CASE("hand examples")
{
	const std::vector<double> s{0, 1, 2, 3};
	const auto d = sumset_decompose(s, 2, 2, 1e-9);
	REQUIRE(d);
	CHECK(d->factors[0] == std::vector<double>{0, 2});
	CHECK(d->factors[1] == std::vector<double>{0, 1});
	CHECK(d->residual == 0.0);

	const std::vector<double> ones{1, 1, 1, 1};
	const auto c = sumset_decompose(ones, 2, 2, 1e-9);
	REQUIRE(c);
	CHECK(c->factors[0] == std::vector<double>{1, 1});
	CHECK(c->factors[1] == std::vector<double>{0, 0});

	const std::vector<double> none{0, 1, std::numbers::pi, 10, 11, 12};
	CHECK_FALSE(sumset_decompose(none, 2, 3, 1e-9));
	CHECK_FALSE(oracle::sumset_feasible(none, 2, 3, 1e-9));
}

TEST_CASE("order of the input does not matter")
{
	const std::vector<double> s{3, 0, 2, 1};
	const auto d = sumset_decompose(s, 2, 2, 1e-9);
	REQUIRE(d);
	CHECK(d->factors[0] == std::vector<double>{0, 2});
}

TEST_CASE("errors")
{
	const std::vector<double> s{0, 1, 2};
	CHECK_THROWS_AS(sumset_decompose(s, 2, 2, 1e-9), Error);
	CHECK_THROWS_AS(sumset_decompose(s, 0, 3, 1e-9), Error);
}

TEST_CASE("trivial factor sizes")
{
	const std::vector<double> s{0.5, -1.0, 2.0};
	const auto d = sumset_decompose(s, 3, 1, 1e-9);
	REQUIRE(d);
	CHECK(d->factors[0] == std::vector<double>{-1.0, 0.5, 2.0});
	CHECK(d->factors[1] == std::vector<double>{0.0});
	const auto e = sumset_decompose(s, 1, 3, 1e-9);
	REQUIRE(e);
	CHECK(e->factors[0] == std::vector<double>{-1.0});
	CHECK(reexpands(*e, s, 1e-12));
}

TEST_CASE("recovers local spectra up to the gauge")
{
	std::mt19937_64 rng(1);
	std::normal_distribution<double> n;
	for(int trial = 0; trial < 30; ++trial)
	{
		const std::size_t p = 2 + trial % 3, q = 2 + (trial / 3) % 3;
		std::vector<double> a(p), b(q);
		for(auto& x : a)
			x = n(rng);
		for(auto& x : b)
			x = n(rng);
		const auto s = minkowski_sum({a, b});
		const auto d = sumset_decompose(s, p, q, 1e-9);
		REQUIRE(d);
		CHECK(reexpands(*d, s, 1e-9));
		CHECK(d->residual <= 1e-9);
		CHECK(d->factors[1].front() == 0.0);
		// each factor's gaps are those of a or b (the roles may swap when p = q)
		std::sort(a.begin(), a.end());
		std::sort(b.begin(), b.end());
		std::vector<double> ga, gb;
		for(double x : a)
			ga.push_back(x - a.front());
		for(double x : b)
			gb.push_back(x - b.front());
		std::vector<double> g0;
		for(double x : d->factors[0])
			g0.push_back(x - d->factors[0].front());
		const bool matches = (p == q) ? oracle::same_multiset(g0, ga, 1e-8) || oracle::same_multiset(g0, gb, 1e-8)
		                              : oracle::same_multiset(g0, ga, 1e-8);
		CHECK(matches);
	}
}

TEST_CASE("agrees with the exhaustive oracle")
{
	std::mt19937_64 rng(99);
	std::normal_distribution<double> n;
	std::uniform_int_distribution<int> pick(0, 3);
	const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {4, 2},
	                                                                {3, 3}, {2, 5}, {2, 6}, {3, 4}, {4, 3}};
	int feasible = 0, infeasible = 0;
	for(int trial = 0; trial < 120; ++trial)
	{
		const auto [p, q] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
		std::vector<double> a(p), b(q);
		// small integers make accidental degeneracies common
		for(auto& x : a)
			x = trial % 2 ? n(rng) : static_cast<double>(pick(rng));
		for(auto& x : b)
			x = trial % 2 ? n(rng) : static_cast<double>(pick(rng));
		auto s = minkowski_sum({a, b});
		if(trial % 3 == 0)
			s[static_cast<std::size_t>(trial) % s.size()] += 0.3 + 0.01 * trial;
		const bool expected = oracle::sumset_feasible(s, p, q, 1e-9);
		const auto d = sumset_decompose(s, p, q, 1e-9);
		CHECK(expected == d.has_value());
		if(d)
		{
			CHECK(reexpands(*d, s, 1e-9));
			++feasible;
		}
		else
			++infeasible;
	}
	CHECK(feasible > 0);
	CHECK(infeasible > 0);
}

TEST_CASE("tolerance-aware matching")
{
	const std::vector<double> s{0, 1 + 1e-11, 2 - 1e-11, 3};
	CHECK(sumset_decompose(s, 2, 2, 1e-9));
	const std::vector<double> off{0, 1.001, 2, 3};
	CHECK_FALSE(sumset_decompose(off, 2, 2, 1e-9));
	CHECK(sumset_decompose(off, 2, 2, 1e-2));
}

TEST_CASE("multi-factor decomposition")
{
	const std::vector<double> s = minkowski_sum({{0, 1}, {0, 10}, {0, 100}});
	const std::vector<std::size_t> dims{2, 2, 2};
	const auto d = sumset_decompose(s, dims, 1e-9);
	REQUIRE(d);
	REQUIRE(d->factors.size() == 3);
	CHECK(reexpands(*d, s, 1e-9));
	for(std::size_t k = 1; k < 3; ++k)
		CHECK(d->factors[k].front() == 0.0);

	const std::vector<double> bad{0, 1, 2, 4, 8, 16, 32, 64};
	CHECK_FALSE(sumset_decompose(bad, dims, 1e-9));
}

TEST_CASE("multiset helpers")
{
	CHECK(minkowski_sum({{0, 2}, {0, 1}}) == std::vector<double>{0, 1, 2, 3});
	CHECK(multiset_distance({3, 1}, {1, 3.5}) == doctest::Approx(0.5));
	CHECK_THROWS_AS(multiset_distance({1}, {1, 2}), Error);
}
