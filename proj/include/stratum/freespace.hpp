#pragma once

#include "stratum/types.hpp"

namespace stratum {

struct FreeSpaceContext
{
	cplx k;
	cplx mu;
	cplx omega;
};

/*! \brief e^{ikR}/(4 pi R). Throws DomainError for coincident points. */
cplx scalar_gf(const Vec3 &r, const Vec3 &rp, cplx k);

/*! \brief Spectral Helmholtz kernel i e^{i kz |z-zp|}/(2 kz). */
cplx spectral_gf(cplx krho, double z, double zp, cplx k);

/*! \brief d/dz of spectral_gf away from z = zp; the average of both one-sided values (0) at z = zp. */
cplx spectral_gf_dz(cplx krho, double z, double zp, cplx k);

/*! \brief (I + grad grad / k^2) G^f in closed form. */
Mat3 dyadic_e_free(const Vec3 &r, const Vec3 &rp, const FreeSpaceContext &ctx);

/*! \brief -(1/(i omega mu)) curl(G^f I) in closed form. */
Mat3 dyadic_h_free(const Vec3 &r, const Vec3 &rp, const FreeSpaceContext &ctx);

DyadicSample spectral_dyadic_e_free(double kx, double ky, double z, double zp, const FreeSpaceContext &ctx);
DyadicSample spectral_dyadic_h_free(double kx, double ky, double z, double zp, const FreeSpaceContext &ctx);

// Unit vectors of the rotated spectral frame.
Eigen::Vector3cd u_hat(double kx, double ky);
Eigen::Vector3cd v_hat(double kx, double ky);
Eigen::Vector3cd z_hat();

/*! \brief Outer product a b^T (no conjugation). */
inline Mat3 dyad(const Eigen::Vector3cd &a, const Eigen::Vector3cd &b) { return a * b.transpose(); }

} // namespace stratum
