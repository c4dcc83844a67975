#include <doctest.h>

#include "helpers.hpp"
#include "stratum/freespace.hpp"
#include "stratum/transmission.hpp"

using namespace stratum;
using namespace testutil;

namespace {

LayerStack sandwich() { return LayerStack(1.5, {1.0, {3.0, 0.2}, {2.0, 0.05}}, {1.0, {1.1, 0.01}, 1.0}, {0.4, -0.3}); }

// Total field of the oracle in layer l: reaction plus the free wave when l is the source layer.
cplx total(const OracleSolution &o, const LayerStack &s, double z, int l)
{
	cplx u = o.reaction(z, l);
	if (l == o.src)
		u += spectral_gf(o.krho, z, o.zp, s.k(l));
	return u;
}

cplx total_dz(const OracleSolution &o, const LayerStack &s, double z, int l)
{
	cplx u = o.reaction_dz(z, l);
	if (l == o.src)
		u += spectral_gf_dz(o.krho, z, o.zp, s.k(l));
	return u;
}

} // namespace

TEST_CASE("fresnel examples")
{
	const LayerStack same(1.0, {2.0, 2.0}, {1.0, 1.0}, {0.0});
	const Fresnel f0 = fresnel(same, JumpWeight::mu(same), 0, 1, 0.7);
	CHECK(std::abs(f0.R) == 0.0);
	CHECK(std::abs(f0.T - 1.0) == 0.0);

	// equal wavenumbers, weights 1 -> 2 and 2 -> 1
	const LayerStack s(1.0, {2.0, 1.0}, {1.0, 2.0}, {0.0});
	const double kr = 0.5;
	const Fresnel a = fresnel(s, JumpWeight::mu(s), 0, 1, kr);
	CHECK(std::abs(a.R - 1.0 / 3.0) < 1e-15);
	CHECK(std::abs(a.T - 4.0 / 3.0) < 1e-15);
	const Fresnel b = fresnel(s, JumpWeight::mu(s), 1, 0, kr);
	CHECK(std::abs(b.R + 1.0 / 3.0) < 1e-15);
	CHECK(std::abs(b.T - 2.0 / 3.0) < 1e-15);
}

TEST_CASE("fresnel: T = 1 + R")
{
	const LayerStack s = contrast5();
	Rng rng(31);
	for (int i = 0; i < 200; i++)
	{
		const int from = rng.index(s.L());
		const int to = rng(0, 1) < 0.5 ? from + 1 : from;
		const int f = to == from ? from + 1 : from;
		const Fresnel c = fresnel(s, i % 2 ? JumpWeight::eps(s) : JumpWeight::mu(s), f, to, rng(0.01, 8.0));
		CHECK(c.T == 1.0 + c.R);
	}
}

TEST_CASE("generalized reflection: anchors, homogeneous, two media")
{
	const LayerStack u = uniform3();
	const Reflections h = generalized_reflection(u, JumpWeight::mu(u), 0.8);
	for (int l = 0; l <= u.L(); l++)
	{
		CHECK(std::abs(h.up[l]) == 0.0);
		CHECK(std::abs(h.down[l]) == 0.0);
	}

	const LayerStack two(1.0, {1.0, {2.0, 0.1}}, {1.0, 1.5}, {0.0});
	for (const JumpWeight &w : {JumpWeight::mu(two), JumpWeight::eps(two)})
	{
		const Reflections r = generalized_reflection(two, w, 0.6);
		CHECK(std::abs(r.up[0]) == 0.0);
		CHECK(std::abs(r.down[1]) == 0.0);
		CHECK(std::abs(r.up[1] - fresnel(two, w, 1, 0, 0.6).R) < 1e-15);
		CHECK(std::abs(r.down[0] - fresnel(two, w, 0, 1, 0.6).R) < 1e-15);
	}

	const LayerStack s = contrast5();
	const Reflections r = generalized_reflection(s, JumpWeight::eps(s), 1.1);
	CHECK(std::abs(r.up[0]) == 0.0);
	CHECK(std::abs(r.down[s.L()]) == 0.0);
}

TEST_CASE("generalized reflection matches the dense solve")
{
	// With the source in layer l, the reaction amplitudes in l satisfy
	// down[l] = Rup[l] * (free + reaction upgoing at d_{l-1}) and the mirror relation at d_l.
	const LayerStack s = sandwich();
	const double kr = 0.5;
	for (const JumpWeight &w : {JumpWeight::mu(s), JumpWeight::eps(s)})
	{
		const Reflections r = generalized_reflection(s, w, kr);
		const int l = 1;
		const double zp = 0.1;
		const OracleSolution o = coefficients_oracle(s, w, kr, zp);
		const cplx kz = vertical_wavenumber(s, l, kr);
		const double top = s.d(0), bot = s.d(1);
		// upgoing wave arriving at the top interface, downgoing arriving at the bottom one
		const cplx up_at_top = o.up[l] * std::exp(kI * kz * (top - bot)) + kI / (2.0 * kz) * std::exp(kI * kz * (top - zp));
		const cplx down_at_bot = o.down[l] * std::exp(kI * kz * (top - bot)) + kI / (2.0 * kz) * std::exp(kI * kz * (zp - bot));
		CHECK(rel(o.down[l], r.up[l] * up_at_top) < 1e-12);
		CHECK(rel(o.up[l], r.down[l] * down_at_bot) < 1e-12);
	}
}

TEST_CASE("generalized transmission: trivial cases and the dense solve")
{
	const LayerStack u = uniform3();
	for (int src = 0; src <= u.L(); src++)
	{
		const auto T = generalized_transmission(u, JumpWeight::mu(u), 0.9, src);
		for (int l = 0; l <= u.L(); l++)
			CHECK(std::abs(T[l] - 1.0) < 1e-15);
	}

	const LayerStack s = sandwich();
	const double kr = 0.5, zp = 0.1;
	for (const JumpWeight &w : {JumpWeight::mu(s), JumpWeight::eps(s)})
	{
		const auto T = generalized_transmission(s, w, kr, 1);
		CHECK(T[1] == 1.0);
		const OracleSolution o = coefficients_oracle(s, w, kr, zp);
		const cplx kz = vertical_wavenumber(s, 1, kr);
		// absolute coefficients of e^{+ikz} and e^{-ikz} of the full upgoing / downgoing waves in the source layer
		const cplx up_src = o.A(1) + kI / (2.0 * kz) * std::exp(-kI * kz * zp);
		const cplx down_src = o.B(1) + kI / (2.0 * kz) * std::exp(kI * kz * zp);
		CHECK(rel(o.A(0), T[0] * up_src) < 1e-12);
		CHECK(rel(o.B(2), T[2] * down_src) < 1e-12);
	}
}

TEST_CASE("q_factor")
{
	const LayerStack u = uniform3();
	for (int l = 0; l <= u.L(); l++)
		CHECK(std::abs(q_factor(u, JumpWeight::eps(u), 1.3, l) - 1.0) < 1e-15);

	const LayerStack s = contrast5();
	for (const JumpWeight &w : {JumpWeight::mu(s), JumpWeight::eps(s)})
	{
		CHECK(std::abs(q_factor(s, w, 0.7, 0) - 1.0) < 1e-15);
		CHECK(std::abs(q_factor(s, w, 0.7, s.L()) - 1.0) < 1e-15);
		const Reflections r = generalized_reflection(s, w, 0.7);
		for (int l = 1; l < s.L(); l++)
		{
			const cplx kz = vertical_wavenumber(s, l, 0.7);
			const cplx expect = 1.0 / (1.0 - r.up[l] * r.down[l] * std::exp(2.0 * kI * kz * s.thickness(l)));
			CHECK(rel(q_factor(s, w, 0.7, l), expect) < 1e-14);
		}
	}
}

TEST_CASE("densities: vanishing branches and homogeneous stack")
{
	const LayerStack s = contrast5();
	for (int src = 0; src <= s.L(); src++)
	{
		const DensitySet d = densities(s, JumpWeight::mu(s), 1.2, src);
		if (src == 0)
		{
			CHECK(std::abs(d.sigma[0][branch_index(Dir::Down, Dir::Down)]) == 0.0);
			CHECK(std::abs(d.sigma[0][branch_index(Dir::Down, Dir::Up)]) == 0.0);
		}
		if (src == s.L())
		{
			CHECK(std::abs(d.sigma[s.L()][branch_index(Dir::Up, Dir::Down)]) == 0.0);
			CHECK(std::abs(d.sigma[s.L()][branch_index(Dir::Up, Dir::Up)]) == 0.0);
		}
		for (int l = 0; l <= s.L(); l++)
			for (int b = 0; b < 4; b++)
				if (!branch_active(s, l, src, b))
					CHECK(std::abs(d.sigma[l][b]) == 0.0);
	}

	const LayerStack u = uniform3();
	for (int src = 0; src <= u.L(); src++)
	{
		const DensitySet d = densities(u, JumpWeight::eps(u), 0.4, src);
		for (int l = 0; l <= u.L(); l++)
		{
			if (l == src)
				for (int b = 0; b < 4; b++)
					CHECK(std::abs(d.sigma[l][b]) == 0.0);
			CHECK(std::abs(d.T_to[l] - 1.0) < 1e-15);
			CHECK(std::abs(d.Q[l] - 1.0) < 1e-15);
		}
	}
}

TEST_CASE("updown_sign examples")
{
	CHECK(updown_sign(2, 2, Dir::Down) == 1);
	CHECK(updown_sign(2, 2, Dir::Up) == -1);
	CHECK(updown_sign(3, 2, Dir::Down) == -1);
	CHECK(updown_sign(1, 2, Dir::Up) == 1);
	CHECK(updown_sign(1, 2, Dir::Down) == 1);
	CHECK(updown_sign(3, 2, Dir::Up) == -1);
}

TEST_CASE("dense oracle satisfies the interface conditions")
{
	Rng rng(32);
	for (const LayerStack &s : {lossy3(), contrast5(), sandwich()})
		for (int trial = 0; trial < 10; trial++)
		{
			const int src = rng.index(s.num_layers());
			const double zp = depth_in(rng, s, src, 0.1);
			const double kr = rng(0.05, 3.0) * s.max_abs_k();
			const bool mu = trial % 2 == 0;
			const JumpWeight w = mu ? JumpWeight::mu(s) : JumpWeight::eps(s);
			const OracleSolution o = coefficients_oracle(s, w, kr, zp);
			for (int j = 0; j < s.L(); j++)
			{
				const double d = s.d(j);
				const cplx ua = total(o, s, d, j), ub = total(o, s, d, j + 1);
				const cplx fa = total_dz(o, s, d, j) / w.w[j], fb = total_dz(o, s, d, j + 1) / w.w[j + 1];
				CHECK(std::abs(ua - ub) <= 1e-12 * std::max(std::abs(ua), std::abs(ub)));
				CHECK(std::abs(fa - fb) <= 1e-12 * std::max(std::abs(fa), std::abs(fb)));
			}
		}
}

TEST_CASE("dense oracle: homogeneous and single interface")
{
	const LayerStack u = uniform3();
	const OracleSolution h = coefficients_oracle(u, JumpWeight::mu(u), 0.6, 0.1);
	REQUIRE(h.src == 1);
	CHECK(std::abs(h.A(1)) < 1e-15);
	CHECK(std::abs(h.B(1)) < 1e-15);
	// outside the source layer the solution is the transmitted free wave itself
	for (double z : {1.3, 0.7, -0.8, -2.0})
	{
		const int l = layer_of(u, z);
		if (l != h.src)
			CHECK(rel(h.reaction(z, l), spectral_gf(0.6, z, 0.1, u.k(0))) < 1e-14);
	}

	const LayerStack two(1.0, {1.0, {2.0, 0.1}}, {1.0, 1.5}, {0.0});
	const double zp = 0.7, kr = 0.6;
	for (const JumpWeight &w : {JumpWeight::mu(two), JumpWeight::eps(two)})
	{
		const OracleSolution o = coefficients_oracle(two, w, kr, zp);
		const cplx k0 = vertical_wavenumber(two, 0, kr);
		const cplx incident = kI / (2.0 * k0) * std::exp(kI * k0 * zp);
		CHECK(rel(o.up[0], fresnel(two, w, 0, 1, kr).R * incident) < 1e-13);
	}
}

TEST_CASE("densities reproduce the dense solve for every layer pair")
{
	Rng rng(33);
	for (const LayerStack &s : {lossy3(), contrast5(), sandwich()})
		for (int src = 0; src <= s.L(); src++)
			for (int trial = 0; trial < 6; trial++)
			{
				const double kr = rng(0.05, 3.0) * s.max_abs_k();
				const double zp = depth_in(rng, s, src);
				const JumpWeight w = trial % 2 ? JumpWeight::eps(s) : JumpWeight::mu(s);
				const OracleSolution o = coefficients_oracle(s, w, kr, zp);
				const DensitySet d = densities(s, w, kr, src);
				CHECK(d.src == src);
				// the sum over branches is checked in the spectral module; here compare R~ against the solve
				// through the ratio of the two waves in the source layer
				const cplx kz = vertical_wavenumber(s, src, kr);
				if (src > 0 && src < s.L())
				{
					const double D = s.thickness(src);
					const cplx up_at_top = o.up[src] * std::exp(kI * kz * D)
						+ kI / (2.0 * kz) * std::exp(kI * kz * (s.d(src - 1) - zp));
					CHECK(rel(o.down[src], d.R_up[src] * up_at_top) < 1e-12);
				}
			}
}
