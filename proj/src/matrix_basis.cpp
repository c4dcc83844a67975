#include "stratum/matrix_basis.hpp"

#include <cmath>

#include "stratum/freespace.hpp"
#include "stratum/spectral_tetm.hpp"
#include "stratum/transmission.hpp"

namespace stratum {

Mat3 basis(int i, double kx, double ky)
{
	const cplx ikx = kI * kx, iky = kI * ky;
	Mat3 J = Mat3::Zero();
	switch (i)
	{
	case 1:
		J(0, 0) = 1.0, J(1, 1) = 1.0;
		break;
	case 2:
		J(2, 2) = 1.0;
		break;
	case 3:
		J(0, 2) = ikx, J(1, 2) = iky;
		break;
	case 4:
		J(2, 0) = ikx, J(2, 1) = iky;
		break;
	case 5:
		J(0, 0) = -kx * kx, J(0, 1) = -kx * ky;
		J(1, 0) = -kx * ky, J(1, 1) = -ky * ky;
		break;
	case 6:
		J(2, 0) = -iky, J(2, 1) = ikx;
		break;
	case 7:
		J(0, 2) = iky, J(1, 2) = -ikx;
		break;
	case 8:
		J(0, 0) = kx * ky, J(0, 1) = ky * ky;
		J(1, 0) = -kx * kx, J(1, 1) = -kx * ky;
		break;
	case 9:
		J(0, 1) = 1.0, J(1, 0) = -1.0;
		break;
	default:
		throw ConfigError("basis index must be in 1..9", i);
	}
	return J;
}

namespace {

using PE = ProductExpansion;

// Row i, column j: J_i * J_j.
const std::array<std::array<PE, 9>, 9> &product_table()
{
	static const std::array<std::array<PE, 9>, 9> table = {{
		{{{{1, 0, 1}}, {}, {{1, 0, 3}}, {}, {{1, 0, 5}}, {}, {{1, 0, 7}}, {{1, 0, 8}}, {{1, 0, 9}}}},
		{{{}, {{1, 0, 2}}, {}, {{1, 0, 4}}, {}, {{1, 0, 6}}, {}, {}, {}}},
		{{{}, {{1, 0, 3}}, {}, {{1, 0, 5}}, {}, {{1, 0, 8}, {-1, 1, 9}}, {}, {}, {}}},
		{{{{1, 0, 4}}, {}, {{-1, 1, 2}}, {}, {{-1, 1, 4}}, {}, {}, {}, {{1, 0, 6}}}},
		{{{{1, 0, 5}}, {}, {{-1, 1, 3}}, {}, {{-1, 1, 5}}, {}, {}, {}, {{1, 0, 8}, {-1, 1, 9}}}},
		{{{{1, 0, 6}}, {}, {}, {}, {}, {}, {{1, 1, 2}}, {{-1, 1, 4}}, {{-1, 0, 4}}}},
		{{{}, {{1, 0, 7}}, {}, {{-1, 0, 8}}, {}, {{1, 1, 1}, {1, 0, 5}}, {}, {}, {}}},
		{{{{1, 0, 8}}, {}, {{1, 1, 7}}, {}, {{-1, 1, 8}}, {}, {}, {}, {{-1, 1, 1}, {-1, 0, 5}}}},
		{{{{1, 0, 9}}, {}, {{1, 0, 7}}, {}, {{-1, 0, 8}}, {}, {{-1, 0, 3}}, {{1, 0, 5}}, {{-1, 0, 1}}}},
	}};
	return table;
}

} // namespace

const ProductExpansion &basis_product(int i, int j)
{
	if (i < 1 || i > 9)
		throw ConfigError("basis index must be in 1..9", i);
	if (j < 1 || j > 9)
		throw ConfigError("basis index must be in 1..9", j);
	return product_table()[i - 1][j - 1];
}

Mat3 evaluate(const ProductExpansion &e, double kx, double ky)
{
	const double kr2 = kx * kx + ky * ky;
	Mat3 out = Mat3::Zero();
	for (const auto &t : e)
		out += t.coef * std::pow(kr2, t.krho2_power) * basis(t.index, kx, ky);
	return out;
}


BCoefficients b_kernels(const LayerStack &stack, cplx krho, double z, double zp)
{
	BCoefficients out;
	out.ell = layer_of(stack, z);
	out.src = layer_of(stack, zp);
	const int ell = out.ell, src = out.src;
	const cplx kp = vertical_wavenumber(stack, src, krho);
	if (kp == 0.0)
		throw BranchPointError("source-layer k_z vanishes");
	const cplx kl = vertical_wavenumber(stack, ell, krho);
	const cplx w = stack.omega();
	const cplx mup = stack.mu(src);

	const DensitySet d1 = densities(stack, JumpWeight::mu(stack), krho, src);
	const DensitySet d2 = densities(stack, JumpWeight::eps(stack), krho, src);
	const PropagationFactor pf = propagation_factors(stack, krho, ell, src, z, zp);

	cplx s1 = 0.0, s2 = 0.0, s3 = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0;
	for (int b = 0; b < 4; b++)
	{
		out.branch1[b] = d1.sigma[ell][b];
		out.branch2[b] = d2.sigma[ell][b];
		if (!pf.active[b])
			continue;
		// each exponential contributes +-i k_lz to d/dz
		const cplx ddz = branch_target(b) == Dir::Up ? kI * kl : -kI * kl;
		const double sgn = branch_source(b) == Dir::Up ? -1.0 : 1.0;
		const cplx e1 = out.branch1[b] * pf.Z[b];
		const cplx e2 = out.branch2[b] * pf.Z[b];
		s1 += e1;
		s2 += e2;
		s3 += sgn * e2;
		t1 += ddz * e1;
		t2 += ddz * e2;
		t3 += ddz * sgn * e2;
	}

	const cplx c1 = -1.0 / (2.0 * w * kp);
	const cplx c2 = -1.0 / (2.0 * w * mup * kp);
	const cplx c3 = kI / (2.0 * w * mup);
	out.r1 = c1 * s1, out.r1_dz = c1 * t1;
	out.r2 = c2 * s2, out.r2_dz = c2 * t2;
	out.r3 = c3 * s3, out.r3_dz = c3 * t3;

	out.b1 = out.r1, out.b2 = out.r2, out.b3 = out.r3;
	out.b1_dz = out.r1_dz, out.b2_dz = out.r2_dz, out.b3_dz = out.r3_dz;
	if (ell == src)
	{
		const cplx k = stack.k(src);
		const cplx g = spectral_gf(krho, z, zp, k);
		const cplx gz = spectral_gf_dz(krho, z, zp, k);
		const cplx gzz = -kp * kp * g;
		const cplx f1 = -1.0 / (kI * w);
		const cplx f2 = -1.0 / (kI * w * mup);
		out.b1 += f1 * g;
		out.b1_dz += f1 * gz;
		out.b2 += f2 * g;
		out.b2_dz += f2 * gz;
		out.b3 += f2 * gz;
		out.b3_dz += f2 * gzz;
		out.has_delta = (z == zp);
	}
	return out;
}

DyadicSample spectral_dyadic_e_basis(const LayerStack &stack, double kx, double ky, double z, double zp)
{
	const double kr = std::hypot(kx, ky);
	if (kr == 0.0)
		throw DegenerateDirectionError("matrix-basis dyadic requested at k_rho = 0");
	const BCoefficients b = b_kernels(stack, kr, z, zp);
	const int ell = b.ell;
	const cplx k2 = stack.k(ell) * stack.k(ell);
	const cplx mu = stack.mu(ell);
	const double kr2 = kr * kr;

	DyadicSample s;
	s.value = k2 * b.b1 * basis(1, kx, ky) + mu * kr2 * b.b2 * basis(2, kx, ky) + mu * b.b2_dz * basis(3, kx, ky)
		+ mu * b.b3 * basis(4, kx, ky) + (k2 / kr2 * b.b1 + mu / kr2 * b.b3_dz) * basis(5, kx, ky);
	s.value *= -kI * stack.omega() / k2;
	s.has_delta = b.has_delta;
	return s;
}

DyadicSample spectral_dyadic_h_basis(const LayerStack &stack, double kx, double ky, double z, double zp)
{
	const double kr = std::hypot(kx, ky);
	if (kr == 0.0)
		throw DegenerateDirectionError("matrix-basis dyadic requested at k_rho = 0");
	const BCoefficients b = b_kernels(stack, kr, z, zp);
	const cplx mu = stack.mu(b.ell);
	const double kr2 = kr * kr;

	DyadicSample s;
	s.value = b.b1 * basis(6, kx, ky) + mu * b.b2 * basis(7, kx, ky)
		+ (b.b1_dz / kr2 - mu * b.b3 / kr2) * basis(8, kx, ky) - b.b1_dz * basis(9, kx, ky);
	s.value /= mu;
	return s;
}


Mat3 ThetaJ::evaluate(double kx, double ky) const
{
	const double kr2 = kx * kx + ky * ky;
	const Mat3 J5 = basis(5, kx, ky);
	return vv * (basis(1, kx, ky) + J5 / kr2) + j2 * basis(2, kx, ky) + j3 * basis(3, kx, ky)
		+ j4 * basis(4, kx, ky) + j5 * J5;
}

ThetaMatrices theta_matrices(const LayerStack &stack, cplx krho, int ell, int src)
{
	if (krho == 0.0)
		throw DegenerateDirectionError("Theta matrices undefined at k_rho = 0");
	ThetaMatrices out;
	out.ell = ell;
	out.src = src;
	out.krho = krho;
	out.klz = vertical_wavenumber(stack, ell, krho);
	out.kpz = vertical_wavenumber(stack, src, krho);
	const cplx kl = out.klz, kp = out.kpz;
	const cplx gamma = stack.mu(ell) / (stack.mu(src) * stack.k(ell) * stack.k(ell));

	const DensitySet d1 = densities(stack, JumpWeight::mu(stack), krho, src);
	const DensitySet d2 = densities(stack, JumpWeight::eps(stack), krho, src);
	for (int b = 0; b < 4; b++)
	{
		const double t = branch_target(b) == Dir::Up ? 1.0 : -1.0;
		const double s = branch_source(b) == Dir::Up ? -1.0 : 1.0;
		const cplx g2 = gamma * d2.sigma[ell][b];
		ThetaJ &th = out.theta[b];
		th.vv = d1.sigma[ell][b];
		th.j2 = g2 * krho * krho;
		th.j3 = g2 * kI * t * kl;
		th.j4 = -g2 * kI * s * kp;
		th.j5 = g2 * s * t * kl * kp / (krho * krho);
	}
	return out;
}

Mat3 assembly_matrix(int m)
{
	Mat3 M = Mat3::Zero();
	switch (m)
	{
	case 1:
		M(0, 0) = 0.5, M(1, 1) = 0.5;
		break;
	case 2:
		M(0, 0) = -0.25, M(0, 1) = 0.25 * kI, M(1, 0) = 0.25 * kI, M(1, 1) = 0.25;
		break;
	case 3:
		M(0, 0) = -0.25, M(0, 1) = -0.25 * kI, M(1, 0) = -0.25 * kI, M(1, 1) = 0.25;
		break;
	case 4:
		M(0, 2) = 0.5, M(1, 2) = -0.5 * kI;
		break;
	case 5:
		M(0, 2) = 0.5, M(1, 2) = 0.5 * kI;
		break;
	case 6:
		M(2, 2) = 1.0;
		break;
	default:
		throw ConfigError("assembly matrix index must be in 1..6", m);
	}
	return M;
}

Mat3 AngularDensities::combine(double alpha) const
{
	const cplx e1 = std::exp(kI * alpha), e2 = e1 * e1;
	const Mat3 M4 = assembly_matrix(4), M5 = assembly_matrix(5);
	return sigma[0] * assembly_matrix(1) + sigma[2] * (e2 * assembly_matrix(2) + assembly_matrix(3) / e2)
		+ sigma[1] * (e1 * M4 + M5 / e1) + sigma[3] * (e1 * M4.transpose() + M5.transpose() / e1)
		+ sigma[4] * assembly_matrix(6);
}

std::array<AngularDensities, 4> angular_assembly(const ThetaMatrices &th)
{
	// With J1 + J5/krho^2 = vv, -J5/krho^2 = uu, J3 = i krho uz, J4 = i krho zu, J2 = zz:
	// vv -> M1 + e^{2ia}M2 + e^{-2ia}M3, uu -> M1 - e^{2ia}M2 - e^{-2ia}M3,
	// uz -> e^{ia}M4 + e^{-ia}M5, zu -> the transposes, zz -> M6.
	std::array<AngularDensities, 4> out;
	const cplx kr = th.krho, kr2 = kr * kr, kp = th.kpz;
	for (int b = 0; b < 4; b++)
	{
		const ThetaJ &t = th.theta[b];
		const cplx c_vv = t.vv;
		const cplx c_uu = -kr2 * t.j5;
		auto &s = out[b].sigma;
		s[0] = (c_vv + c_uu) / kp;
		s[1] = kI * kr * t.j3 / kp;
		s[2] = (c_vv - c_uu) / kp;
		s[3] = kI * kr * t.j4 / kp;
		s[4] = t.j2 / kp;
	}
	return out;
}

Mat3 sommerfeld_potential(const LayerStack &stack, double kx, double ky, double z, double zp)
{
	const double kr = std::hypot(kx, ky);
	if (kr == 0.0)
		throw DegenerateDirectionError("Sommerfeld potential requested at k_rho = 0");
	const BCoefficients b = b_kernels(stack, kr, z, zp);
	const cplx mu = stack.mu(b.ell);
	const double kr2 = kr * kr;
	// a4 from b3 = (d_z a1 + krho^2 a4) / mu with a3 = a5 = 0
	return b.b1 * basis(1, kx, ky) + mu * b.b2 * basis(2, kx, ky) + ((mu * b.b3 - b.b1_dz) / kr2) * basis(4, kx, ky);
}

} // namespace stratum
