#include "stratum/spectral_tetm.hpp"

#include <cmath>

namespace stratum {

namespace {

double tau(const LayerStack &stack, int j, double z)
{
	return 2.0 * stack.d_clamped(j) - z;
}

cplx source_kz(const LayerStack &stack, int src, cplx krho)
{
	const cplx kz = vertical_wavenumber(stack, src, krho);
	if (kz == 0.0)
		throw BranchPointError("source-layer k_z vanishes");
	return kz;
}

Eigen::Vector3cd u_of(double alpha)
{
	return Eigen::Vector3cd(std::cos(alpha), std::sin(alpha), 0.0);
}

Eigen::Vector3cd v_of(double alpha)
{
	return Eigen::Vector3cd(-std::sin(alpha), std::cos(alpha), 0.0);
}

struct Pair
{
	DensitySet phi; // mu family
	DensitySet psi; // eps family
};

Pair both_families(const LayerStack &stack, cplx krho, int src)
{
	return {densities(stack, JumpWeight::mu(stack), krho, src), densities(stack, JumpWeight::eps(stack), krho, src)};
}

ThetaDensities theta_from(const LayerStack &stack, const Pair &dens, cplx krho, double alpha, int ell, int src)
{
	const cplx kl = vertical_wavenumber(stack, ell, krho);
	const cplx kp = vertical_wavenumber(stack, src, krho);
	const cplx gamma = stack.mu(ell) / (stack.mu(src) * stack.k(ell) * stack.k(ell));
	const cplx ratio_mu = stack.mu(ell) / stack.mu(src);
	const auto u = u_of(alpha), v = v_of(alpha), ez = z_hat();
	const Mat3 uu = dyad(u, u), vv = dyad(v, v), zz = dyad(ez, ez);
	const Mat3 uz = dyad(u, ez), zu = dyad(ez, u), uv = dyad(u, v), vu = dyad(v, u);
	const Mat3 zv = dyad(ez, v), vz = dyad(v, ez);

	ThetaDensities th;
	for (int b = 0; b < 4; b++)
	{
		const cplx phi = dens.phi.sigma[ell][b];
		const cplx psi = dens.psi.sigma[ell][b];
		const double t = target_sign(branch_target(b));
		const double s = source_sign(branch_source(b));

		th.E[b] = phi * vv
			+ gamma * psi * (-s * t * kp * kl * uu - t * krho * kl * uz + s * krho * kp * zu + krho * krho * zz);
		th.H[b] = phi * (kI * t * kl * uv - kI * krho * zv)
			+ ratio_mu * psi * (kI * s * kp * vu + kI * krho * vz);
	}
	return th;
}

struct Frame
{
	int ell, src;
	cplx krho, kp;
	double alpha;
};

Frame frame(const LayerStack &stack, double kx, double ky, double z, double zp)
{
	const double kr = std::hypot(kx, ky);
	if (kr == 0.0)
		throw DegenerateDirectionError("spectral dyadic requested at k_rho = 0");
	Frame f;
	f.ell = layer_of(stack, z);
	f.src = layer_of(stack, zp);
	f.krho = kr;
	f.kp = source_kz(stack, f.src, kr);
	f.alpha = std::atan2(ky, kx);
	return f;
}

} // namespace


PropagationFactor propagation_factors(const LayerStack &stack, cplx krho, int ell, int src, double z, double zp)
{
	PropagationFactor p;
	p.ell = ell;
	p.src = src;

	constexpr int UU = 0, UD = 1, DU = 2, DD = 3;
	if (ell < src)
	{
		p.a[UU] = z, p.b[UU] = -zp;
		p.a[UD] = z, p.b[UD] = -tau(stack, src, zp);
		p.a[DU] = tau(stack, ell - 1, z), p.b[DU] = -zp;
		p.a[DD] = tau(stack, ell - 1, z), p.b[DD] = -tau(stack, src, zp);
	}
	else if (ell == src)
	{
		p.a[UU] = -tau(stack, ell, z), p.b[UU] = tau(stack, src - 1, zp);
		p.a[UD] = z, p.b[UD] = -tau(stack, src, zp);
		p.a[DU] = -z, p.b[DU] = tau(stack, src - 1, zp);
		p.a[DD] = tau(stack, ell - 1, z), p.b[DD] = -tau(stack, src, zp);
	}
	else
	{
		p.a[UU] = -tau(stack, ell, z), p.b[UU] = tau(stack, src - 1, zp);
		p.a[UD] = -tau(stack, ell, z), p.b[UD] = zp;
		p.a[DU] = -z, p.b[DU] = tau(stack, src - 1, zp);
		p.a[DD] = -z, p.b[DD] = zp;
	}

	const cplx kl = vertical_wavenumber(stack, ell, krho);
	const cplx kp = vertical_wavenumber(stack, src, krho);
	for (int b = 0; b < 4; b++)
	{
		p.active[b] = branch_active(stack, ell, src, b);
		p.Z[b] = std::exp(kI * (kl * p.a[b] + kp * p.b[b]));
	}
	return p;
}

ScalarKernelTriple scalar_kernels(const LayerStack &stack, cplx krho, double z, double zp)
{
	ScalarKernelTriple out;
	out.ell = layer_of(stack, z);
	out.src = layer_of(stack, zp);
	const int ell = out.ell, src = out.src;
	const cplx kp = source_kz(stack, src, krho);
	const cplx kl = vertical_wavenumber(stack, ell, krho);
	const Pair dens = both_families(stack, krho, src);
	const PropagationFactor pf = propagation_factors(stack, krho, ell, src, z, zp);

	cplx s1 = 0.0, s2 = 0.0, s3 = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
	for (int b = 0; b < 4; b++)
	{
		if (!pf.active[b])
			continue;
		const cplx phiZ = dens.phi.sigma[ell][b] * pf.Z[b];
		const cplx psiZ = dens.psi.sigma[ell][b] * pf.Z[b];
		const cplx dz = kI * double(target_sign(branch_target(b))) * kl;
		const double s = source_sign(branch_source(b));
		s1 += phiZ;
		s2 += psiZ;
		s3 += s * psiZ;
		d1 += dz * phiZ;
		d2 += dz * psiZ;
		d3 += dz * s * psiZ;
	}
	const cplx c = kI / (2.0 * kp);
	out.r1 = c * s1;
	out.r2 = c * s2;
	out.r3 = 0.5 * s3;
	out.r1_dz = c * d1;
	out.r2_dz = c * d2;
	out.r3_dz = 0.5 * d3;

	out.g1 = out.r1, out.g2 = out.r2, out.g3 = out.r3;
	out.g1_dz = out.r1_dz, out.g2_dz = out.r2_dz, out.g3_dz = out.r3_dz;
	if (ell == src)
	{
		const cplx k = stack.k(src);
		const cplx gf = spectral_gf(krho, z, zp, k);
		const cplx gf_dz = spectral_gf_dz(krho, z, zp, k);
		// smooth part of d_zz G^f; the -delta(z - z') is flagged, not evaluated
		const cplx gf_dzz = -kp * kp * gf;
		out.g1 += gf;
		out.g2 += gf;
		out.g3 += gf_dz;
		out.g1_dz += gf_dz;
		out.g2_dz += gf_dz;
		out.g3_dz += gf_dzz;
		out.has_delta = (z == zp);
	}
	return out;
}

ThetaDensities theta_densities(const LayerStack &stack, cplx krho, double alpha, int ell, int src)
{
	if (krho == 0.0)
		throw DegenerateDirectionError("Theta densities undefined at k_rho = 0");
	if (ell < 0 || ell > stack.L())
		throw ConfigError("layer index out of range", ell);
	return theta_from(stack, both_families(stack, krho, src), krho, alpha, ell, src);
}

Mat3 spectral_reaction_e(const LayerStack &stack, double kx, double ky, double z, double zp)
{
	const Frame f = frame(stack, kx, ky, z, zp);
	const ThetaDensities th = theta_from(stack, both_families(stack, f.krho, f.src), f.krho, f.alpha, f.ell, f.src);
	const PropagationFactor pf = propagation_factors(stack, f.krho, f.ell, f.src, z, zp);
	Mat3 sum = Mat3::Zero();
	for (int b = 0; b < 4; b++)
		if (pf.active[b])
			sum += th.E[b] * pf.Z[b];
	return (kI / (2.0 * f.kp)) * sum;
}

Mat3 spectral_reaction_h(const LayerStack &stack, double kx, double ky, double z, double zp)
{
	const Frame f = frame(stack, kx, ky, z, zp);
	const ThetaDensities th = theta_from(stack, both_families(stack, f.krho, f.src), f.krho, f.alpha, f.ell, f.src);
	const PropagationFactor pf = propagation_factors(stack, f.krho, f.ell, f.src, z, zp);
	Mat3 sum = Mat3::Zero();
	for (int b = 0; b < 4; b++)
		if (pf.active[b])
			sum += th.H[b] * pf.Z[b];
	return sum / (2.0 * stack.omega() * stack.mu(f.ell) * f.kp);
}

DyadicSample spectral_dyadic_e(const LayerStack &stack, double kx, double ky, double z, double zp)
{
	DyadicSample s;
	s.value = spectral_reaction_e(stack, kx, ky, z, zp);
	const int src = layer_of(stack, zp);
	if (layer_of(stack, z) == src)
	{
		const DyadicSample f = spectral_dyadic_e_free(kx, ky, z, zp, {stack.k(src), stack.mu(src), stack.omega()});
		s.value += f.value;
		s.has_delta = f.has_delta;
	}
	return s;
}

DyadicSample spectral_dyadic_h(const LayerStack &stack, double kx, double ky, double z, double zp)
{
	DyadicSample s;
	s.value = spectral_reaction_h(stack, kx, ky, z, zp);
	const int src = layer_of(stack, zp);
	if (layer_of(stack, z) == src)
		s.value += spectral_dyadic_h_free(kx, ky, z, zp, {stack.k(src), stack.mu(src), stack.omega()}).value;
	return s;
}

} // namespace stratum
