#include "stratum/freespace.hpp"

#include <cmath>

#include "stratum/medium.hpp"

namespace stratum {

namespace {

double separation(const Vec3 &r, const Vec3 &rp, Eigen::Vector3d &rhat)
{
	Eigen::Vector3d dr(r[0] - rp[0], r[1] - rp[1], r[2] - rp[2]);
	const double R = dr.norm();
	if (R == 0.0)
		throw DomainError("free-space Green's function evaluated at coincident points");
	rhat = dr / R;
	return R;
}

cplx nonzero_kz(cplx krho, cplx k)
{
	cplx kz = vertical_wavenumber(k, krho);
	if (kz == 0.0)
		throw BranchPointError("k_z = 0 at k_rho = k");
	return kz;
}

} // namespace


cplx scalar_gf(const Vec3 &r, const Vec3 &rp, cplx k)
{
	Eigen::Vector3d rhat;
	const double R = separation(r, rp, rhat);
	return std::exp(kI * k * R) / (4.0 * kPi * R);
}

cplx spectral_gf(cplx krho, double z, double zp, cplx k)
{
	const cplx kz = nonzero_kz(krho, k);
	return kI * std::exp(kI * kz * std::abs(z - zp)) / (2.0 * kz);
}

cplx spectral_gf_dz(cplx krho, double z, double zp, cplx k)
{
	if (z == zp)
		return 0.0;
	const cplx kz = nonzero_kz(krho, k);
	const double sgn = z > zp ? 1.0 : -1.0;
	return -sgn * std::exp(kI * kz * std::abs(z - zp)) / 2.0;
}

Mat3 dyadic_e_free(const Vec3 &r, const Vec3 &rp, const FreeSpaceContext &ctx)
{
	Eigen::Vector3d rhat;
	const double R = separation(r, rp, rhat);
	const cplx g = std::exp(kI * ctx.k * R) / (4.0 * kPi * R);
	const cplx x = ctx.k * R;
	const cplx a = (1.0 + kI / x - 1.0 / (x * x)) * g;
	const cplx b = (-1.0 - 3.0 * kI / x + 3.0 / (x * x)) * g;
	Mat3 out = a * Mat3::Identity();
	out += b * (rhat * rhat.transpose()).cast<cplx>();
	return out;
}

Mat3 dyadic_h_free(const Vec3 &r, const Vec3 &rp, const FreeSpaceContext &ctx)
{
	Eigen::Vector3d rhat;
	const double R = separation(r, rp, rhat);
	const cplx g = std::exp(kI * ctx.k * R) / (4.0 * kPi * R);
	const cplx dg = g * (kI * ctx.k - 1.0 / R);
	const Eigen::Vector3cd grad = dg * rhat.cast<cplx>();

	// (curl(g I))_{ij} = eps_{ikj} d_k g
	Mat3 c = Mat3::Zero();
	c(0, 1) = -grad(2);
	c(0, 2) = grad(1);
	c(1, 0) = grad(2);
	c(1, 2) = -grad(0);
	c(2, 0) = -grad(1);
	c(2, 1) = grad(0);
	return -c / (kI * ctx.omega * ctx.mu);
}


Eigen::Vector3cd u_hat(double kx, double ky)
{
	const double kr = std::hypot(kx, ky);
	if (kr == 0.0)
		throw DegenerateDirectionError("u-hat undefined at k_rho = 0");
	return Eigen::Vector3cd(kx / kr, ky / kr, 0.0);
}

Eigen::Vector3cd v_hat(double kx, double ky)
{
	const double kr = std::hypot(kx, ky);
	if (kr == 0.0)
		throw DegenerateDirectionError("v-hat undefined at k_rho = 0");
	return Eigen::Vector3cd(-ky / kr, kx / kr, 0.0);
}

Eigen::Vector3cd z_hat()
{
	return Eigen::Vector3cd(0.0, 0.0, 1.0);
}

DyadicSample spectral_dyadic_e_free(double kx, double ky, double z, double zp, const FreeSpaceContext &ctx)
{
	const double kr = std::hypot(kx, ky);
	const auto u = u_hat(kx, ky), v = v_hat(kx, ky), ez = z_hat();
	const cplx kz = nonzero_kz(kr, ctx.k);
	const cplx g = spectral_gf(kr, z, zp, ctx.k);
	const cplx dg = spectral_gf_dz(kr, z, zp, ctx.k);
	const cplx k2 = ctx.k * ctx.k;

	DyadicSample s;
	s.value = (kz * kz * g) * dyad(u, u) + (k2 * g) * dyad(v, v) + (kr * kr * g) * dyad(ez, ez)
		+ (kI * kr * dg) * (dyad(u, ez) + dyad(ez, u));
	s.value /= k2;
	s.has_delta = (z == zp);
	return s;
}

DyadicSample spectral_dyadic_h_free(double kx, double ky, double z, double zp, const FreeSpaceContext &ctx)
{
	const double kr = std::hypot(kx, ky);
	const auto u = u_hat(kx, ky), v = v_hat(kx, ky), ez = z_hat();
	const cplx g = spectral_gf(kr, z, zp, ctx.k);
	const cplx dg = spectral_gf_dz(kr, z, zp, ctx.k);

	// curl(g I) in the spectral frame is antisymmetric: (v u^T - u v^T) dg + i krho (z v^T - v z^T) g
	DyadicSample s;
	s.value = (kI * kr * g) * (dyad(v, ez) - dyad(ez, v)) - dg * (dyad(v, u) - dyad(u, v));
	s.value /= kI * ctx.omega * ctx.mu;
	return s;
}

} // namespace stratum
