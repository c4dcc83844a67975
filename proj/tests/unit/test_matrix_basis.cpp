#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "stratum/matrix_basis.hpp"
#include "stratum/spectral_tetm.hpp"

using namespace stratum;
using namespace testutil;

TEST_CASE("basis examples")
{
	Mat3 J9 = Mat3::Zero();
	J9(0, 1) = 1.0;
	J9(1, 0) = -1.0;
	CHECK(maxabs(basis(9, 0.3, -2.0) - J9) == 0.0);

	Mat3 J5 = Mat3::Zero();
	J5(0, 0) = -1.0;
	CHECK(maxabs(basis(5, 1.0, 0.0) - J5) == 0.0);

	const auto u = u_hat(3, 4);
	CHECK(maxabs(dyad(u, u) + basis(5, 3, 4) / 25.0) < 1e-15);
	CHECK_THROWS_AS(basis(10, 1, 1), ConfigError);
}

TEST_CASE("product table examples")
{
	auto single = [](int i, int j) { return basis_product(i, j); };
	{
		const auto e = single(3, 4);
		REQUIRE(e.size() == 1);
		CHECK(e[0].index == 5);
		CHECK(e[0].coef == 1.0);
		CHECK(e[0].krho2_power == 0);
	}
	{
		const auto e = single(9, 9);
		REQUIRE(e.size() == 1);
		CHECK(e[0].index == 1);
		CHECK(e[0].coef == -1.0);
	}
	{
		const auto e = single(4, 3);
		REQUIRE(e.size() == 1);
		CHECK(e[0].index == 2);
		CHECK(e[0].coef == -1.0);
		CHECK(e[0].krho2_power == 1);
	}
}

TEST_CASE("product table: all 81 entries at random points and exact at dyadic points")
{
	Rng rng(51);
	for (int p = 0; p < 50; p++)
	{
		const double kx = rng(-3, 3), ky = rng(-3, 3);
		const double qx = std::round(rng(-3, 3) * 16) / 16, qy = std::round(rng(-3, 3) * 16) / 16;
		for (int i = 1; i <= 9; i++)
			for (int j = 1; j <= 9; j++)
			{
				const Mat3 a = basis(i, kx, ky), b = basis(j, kx, ky);
				const double bound = std::max(1.0, (a.cwiseAbs() * b.cwiseAbs()).maxCoeff());
				CHECK(maxabs(a * b - evaluate(basis_product(i, j), kx, ky)) <= 1e-14 * bound);
				const Mat3 exact = basis(i, qx, qy) * basis(j, qx, qy) - evaluate(basis_product(i, j), qx, qy);
				CHECK(maxabs(exact) == 0.0);
			}
	}
}

TEST_CASE("products within span{J1..J5} stay there; J6..J9 act as a complement")
{
	for (int i = 1; i <= 5; i++)
		for (int j = 1; j <= 5; j++)
			for (const ProductTerm &t : basis_product(i, j))
				CHECK(t.index <= 5);
	// mixed products land in J6..J9
	for (int i = 1; i <= 5; i++)
		for (int j = 6; j <= 9; j++)
		{
			for (const ProductTerm &t : basis_product(i, j))
				CHECK(t.index >= 6);
			for (const ProductTerm &t : basis_product(j, i))
				CHECK(t.index >= 6);
		}
}

TEST_CASE("angular decomposition identities")
{
	for (double a : {0.0, kPi / 3, 1.7, -2.2})
	{
		const double kr = 1.9, kx = kr * std::cos(a), ky = kr * std::sin(a);
		const cplx e1 = std::exp(kI * a), e2 = e1 * e1;
		const Mat3 lhs = basis(1, kx, ky) + basis(5, kx, ky) / (kr * kr);
		const Mat3 rhs = assembly_matrix(1) + e2 * assembly_matrix(2) + assembly_matrix(3) / e2;
		CHECK(maxabs(lhs - rhs) < 1e-14);
		const Mat3 j3 = basis(3, kx, ky) / (kI * kr);
		CHECK(maxabs(j3 - (e1 * assembly_matrix(4) + assembly_matrix(5) / e1)) < 1e-14);
		const Mat3 j4 = basis(4, kx, ky) / (kI * kr);
		CHECK(maxabs(j4 - (e1 * assembly_matrix(4).transpose() + assembly_matrix(5).transpose() / e1)) < 1e-14);
		CHECK(maxabs(basis(2, kx, ky) - assembly_matrix(6)) == 0.0);
	}
	CHECK_THROWS_AS(assembly_matrix(7), ConfigError);
}

TEST_CASE("b coefficients: homogeneous values, interface conditions, z' derivative")
{
	const LayerStack u = uniform3();
	Rng rng(52);
	for (int i = 0; i < 30; i++)
	{
		const double kr = rng(0.05, 4.0);
		const double z = depth(rng, u, 1e-3), zp = depth(rng, u, 1e-3, {z});
		const BCoefficients b = b_kernels(u, kr, z, zp);
		const cplx g = spectral_gf(kr, z, zp, u.k(0));
		CHECK(rel(b.b1, -g / (kI * u.omega())) < 1e-13);
		CHECK(rel(b.b2, -g / (kI * u.omega() * u.mu(0))) < 1e-13);
	}

	auto side = [](auto f, double d, double dir) {
		const double h = 1e-7 * std::max(1.0, std::abs(d));
		return 2.0 * f(d + dir * h) - f(d + 2.0 * dir * h);
	};
	for (const LayerStack &s : {lossy3(), contrast5()})
		for (int i = 0; i < 20; i++)
		{
			const double kr = rng(0.05, 3.0) * s.max_abs_k();
			const double zp = depth(rng, s, 0.05);
			for (int j = 0; j < s.L(); j++)
			{
				const double d = s.d(j);
				auto b2 = [&](double z) { return b_kernels(s, kr, z, zp).b2; };
				auto f2 = [&](double z) { return b_kernels(s, kr, z, zp).b2_dz / s.eps(layer_of(s, z)); };
				const cplx a = side(b2, d, 1.0), c = side(b2, d, -1.0);
				CHECK(std::abs(a - c) <= 1e-8 * std::max(std::abs(a), std::abs(c)));
				const cplx fa = side(f2, d, 1.0), fc = side(f2, d, -1.0);
				CHECK(std::abs(fa - fc) <= 1e-8 * std::max(std::abs(fa), std::abs(fc)));
			}

			const double h = 1e-4;
			const double z = depth(rng, s, 0.01, {zp});
			const cplx fd = -(b_kernels(s, kr, z, zp + h).b2 - b_kernels(s, kr, z, zp - h).b2) / (2 * h);
			const cplx b3 = b_kernels(s, kr, z, zp).b3;
			CHECK(std::abs(fd - b3) <= 1e-6 * std::max(std::abs(fd), std::abs(b3)));
		}
}

TEST_CASE("basis assembly: homogeneous limit, H zz entry, equivalence with TE/TM")
{
	const LayerStack u = uniform3();
	const FreeSpaceContext ctx{u.k(0), u.mu(0), u.omega()};
	Rng rng(53);
	for (int i = 0; i < 50; i++)
	{
		const double kx = rng(-4, 4), ky = rng(-4, 4);
		const double z = depth(rng, u, 1e-3), zp = depth(rng, u, 1e-3, {z});
		CHECK(rel(spectral_dyadic_e_basis(u, kx, ky, z, zp).value, spectral_dyadic_e_free(kx, ky, z, zp, ctx).value) < 1e-13);
		CHECK(rel(spectral_dyadic_h_basis(u, kx, ky, z, zp).value, spectral_dyadic_h_free(kx, ky, z, zp, ctx).value) < 1e-13);
	}
	for (const LayerStack &s : {lossy3(), contrast5()})
		for (int i = 0; i < 100; i++)
		{
			const double kx = rng(-6, 6), ky = rng(-6, 6);
			const double z = depth(rng, s, 1e-3), zp = depth(rng, s, 1e-3);
			const Mat3 h = spectral_dyadic_h_basis(s, kx, ky, z, zp).value;
			CHECK(h(2, 2) == 0.0);
			CHECK(rel(spectral_dyadic_e_basis(s, kx, ky, z, zp).value, spectral_dyadic_e(s, kx, ky, z, zp).value) < 1e-12);
			CHECK(rel(h, spectral_dyadic_h(s, kx, ky, z, zp).value) < 1e-12);
		}
}

TEST_CASE("theta matrices: homogeneous, structure, reaction reassembly")
{
	const LayerStack u = uniform3();
	for (int l = 0; l <= u.L(); l++)
	{
		const ThetaMatrices t = theta_matrices(u, 0.7, l, l);
		for (int b = 0; b < 4; b++)
			CHECK(maxabs(t.theta[b].evaluate(0.7, 0.0)) == 0.0);
	}

	{
		ThetaJ t{cplx(0.3, 0.1), 0.0, 0.0, 0.0, 0.0};
		const double kx = 0.4, ky = -1.2, kr2 = kx * kx + ky * ky;
		CHECK(maxabs(t.evaluate(kx, ky) - t.vv * (basis(1, kx, ky) + basis(5, kx, ky) / kr2)) < 1e-15);
	}

	Rng rng(54);
	for (const LayerStack &s : {lossy3(), contrast5()})
		for (int i = 0; i < 60; i++)
		{
			const double a = rng(0, 2 * kPi), kr = rng(0.05, 3.0) * s.max_abs_k();
			const double kx = kr * std::cos(a), ky = kr * std::sin(a);
			const double z = depth(rng, s, 1e-3), zp = depth(rng, s, 1e-3);
			const int l = layer_of(s, z), src = layer_of(s, zp);
			const ThetaMatrices t = theta_matrices(s, kr, l, src);
			const PropagationFactor pf = propagation_factors(s, kr, l, src, z, zp);
			const auto ang = angular_assembly(t);
			Mat3 sum = Mat3::Zero(), sum_ang = Mat3::Zero();
			for (int b = 0; b < 4; b++)
				if (pf.active[b])
				{
					sum += t.theta[b].evaluate(kx, ky) * pf.Z[b];
					sum_ang += ang[b].combine(a) * pf.Z[b];
				}
			const Mat3 reaction = kI / (2.0 * t.kpz) * sum;
			const Mat3 ref = spectral_reaction_e(s, kx, ky, z, zp);
			CHECK(maxabs(reaction - ref) <= 1e-12 * maxabs(ref) + 1e-300);
			CHECK(maxabs(kI / 2.0 * sum_ang - ref) <= 1e-12 * maxabs(ref) + 1e-300);
		}
}

// Apply -i omega (I + D D^T / k_l^2) to the potential with D = (i kx, i ky, d/dz), using the
// analytic z-derivatives of the b coefficients (each satisfies the Helmholtz ODE away from z').
TEST_CASE("Sommerfeld potential: pattern, homogeneous relation, operator application")
{
	Rng rng(55);
	for (const LayerStack &s : {lossy3(), contrast5()})
		for (int i = 0; i < 60; i++)
		{
			const double kx = rng(-4, 4), ky = rng(-4, 4);
			const double z = depth(rng, s, 1e-3), zp = depth(rng, s, 1e-3, {z});
			const Mat3 A = sommerfeld_potential(s, kx, ky, z, zp);
			const std::set<std::pair<int, int>> zero = {{0, 1}, {1, 0}, {0, 2}, {1, 2}};
			for (auto [r, c] : zero)
				CHECK(A(r, c) == 0.0);

			const BCoefficients b = b_kernels(s, std::hypot(kx, ky), z, zp);
			const int l = b.ell;
			const cplx mu = s.mu(l), kl = s.k(l), kz2 = kl * kl - (kx * kx + ky * ky);
			const double kr2 = kx * kx + ky * ky;
			// J4 coefficient (mu b3 - d_z b1)/krho^2 and its first two z-derivatives
			const cplx c1 = (mu * b.b3_dz + kz2 * b.b1) / kr2;
			const cplx c2 = (-mu * kz2 * b.b3 + kz2 * b.b1_dz) / kr2;
			const Eigen::Vector3cd w(kI * kx * (b.b1 + c1), kI * ky * (b.b1 + c1), mu * b.b2_dz);
			const Eigen::Vector3cd wz(kI * kx * (b.b1_dz + c2), kI * ky * (b.b1_dz + c2), -mu * kz2 * b.b2);
			Mat3 Dw;
			Dw.row(0) = kI * kx * w.transpose();
			Dw.row(1) = kI * ky * w.transpose();
			Dw.row(2) = wz.transpose();
			const Mat3 G = -kI * s.omega() * (A + Dw / (kl * kl));
			CHECK(rel(G, spectral_dyadic_e_basis(s, kx, ky, z, zp).value) < 1e-10);
		}

	const LayerStack u = uniform3();
	for (int i = 0; i < 20; i++)
	{
		const double z = depth(rng, u, 1e-3), zp = depth(rng, u, 1e-3, {z});
		const Mat3 A = sommerfeld_potential(u, rng(-3, 3), rng(-3, 3), z, zp);
		CHECK(std::abs(A(2, 0)) <= 1e-13 * maxabs(A));
		CHECK(std::abs(A(2, 1)) <= 1e-13 * maxabs(A));
	}
}
