#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "stratum/medium.hpp"
#include "stratum/stack_io.hpp"

namespace testutil {

using namespace stratum;

inline const std::string fixtures = STRATUM_FIXTURES;

inline LayerStack lossy3() { return load_stack(fixtures + "/lossy3.json"); }
inline LayerStack contrast5() { return load_stack(fixtures + "/contrast5.json"); }
inline LayerStack uniform3() { return load_stack(fixtures + "/uniform3.json"); }

inline double maxabs(const Mat3 &m) { return m.cwiseAbs().maxCoeff(); }
inline double rel(const Mat3 &a, const Mat3 &ref) { return maxabs(a - ref) / std::max(maxabs(ref), 1e-300); }
inline double rel(cplx a, cplx ref) { return std::abs(a - ref) / std::max(std::abs(ref), 1e-300); }

struct Rng
{
	std::mt19937_64 gen;
	explicit Rng(std::uint64_t seed) : gen(seed) {}
	double operator()(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
	int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen); }
};

/*! \brief Depth inside the stack's sampled window, at least gap away from interfaces and `avoid`. */
inline double depth(Rng &rng, const LayerStack &s, double gap, std::vector<double> avoid = {})
{
	const auto &d = s.interfaces();
	const double hi = d.empty() ? 1.0 : d.front() + 1.0;
	const double lo = d.empty() ? -1.0 : d.back() - 1.0;
	avoid.insert(avoid.end(), d.begin(), d.end());
	for (;;)
	{
		const double z = rng(lo, hi);
		if (std::all_of(avoid.begin(), avoid.end(), [&](double x) { return std::abs(z - x) > gap; }))
			return z;
	}
}

/*! \brief Depth strictly inside layer l (the half-spaces are cut to unit thickness). */
inline double depth_in(Rng &rng, const LayerStack &s, int l, double margin = 0.05)
{
	const double top = l == 0 ? (s.L() ? s.d(0) + 1.0 : 1.0) : s.d(l - 1);
	const double bot = l == s.L() ? (s.L() ? s.d(s.L() - 1) - 1.0 : -1.0) : s.d(l);
	return bot + rng(margin, 1.0 - margin) * (top - bot);
}

} // namespace testutil
