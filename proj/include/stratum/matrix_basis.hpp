#pragma once

#include <array>
#include <vector>

#include "stratum/medium.hpp"

namespace stratum {

/*! \brief J_i(kx, ky) for i = 1..9. */
Mat3 basis(int i, double kx, double ky);

/*! \brief One term coef * krho^(2*krho2_power) * J_index of a formal product expansion. */
struct ProductTerm
{
	double coef;
	int krho2_power;
	int index;
};

using ProductExpansion = std::vector<ProductTerm>;

/*! \brief J_i * J_j as a combination of basis matrices; an empty expansion is the zero matrix. */
const ProductExpansion &basis_product(int i, int j);

Mat3 evaluate(const ProductExpansion &e, double kx, double ky);

/*! \brief b1, b2, b3 and their z-derivatives at (k_rho, z, z').
 *
 * The reaction parts are split out; `branch1` / `branch2` are the per-branch
 * densities b^{*star}_{l l' 1} (mu family) and b^{*star}_{l l' 2} (eps family).
 */
struct BCoefficients
{
	int ell = 0;
	int src = 0;
	cplx b1, b2, b3;
	cplx b1_dz, b2_dz, b3_dz;
	cplx r1, r2, r3;
	cplx r1_dz, r2_dz, r3_dz;
	std::array<cplx, 4> branch1{};
	std::array<cplx, 4> branch2{};
	bool has_delta = false;
};

BCoefficients b_kernels(const LayerStack &stack, cplx krho, double z, double zp);

DyadicSample spectral_dyadic_e_basis(const LayerStack &stack, double kx, double ky, double z, double zp);
DyadicSample spectral_dyadic_h_basis(const LayerStack &stack, double kx, double ky, double z, double zp);

/*! \brief Theta^{*star} over the basis: vv*(J1 + J5/krho^2) + j2*J2 + j3*J3 + j4*J4 + j5*J5. */
struct ThetaJ
{
	cplx vv, j2, j3, j4, j5;

	Mat3 evaluate(double kx, double ky) const;
};

struct ThetaMatrices
{
	int ell = 0;
	int src = 0;
	cplx krho;
	cplx klz;
	cplx kpz;
	std::array<ThetaJ, 4> theta{};
};

ThetaMatrices theta_matrices(const LayerStack &stack, cplx krho, int ell, int src);

/*! \brief M_1..M_6. */
Mat3 assembly_matrix(int m);

/*! \brief The five angular densities sigma_{l l' j}, j = 1..5, of one branch. */
struct AngularDensities
{
	std::array<cplx, 5> sigma{};

	/*! \brief sigma1 M1 + sigma3 (e^{2ia} M2 + e^{-2ia} M3) + sigma2 (e^{ia} M4 + e^{-ia} M5)
	 *  + sigma4 (e^{ia} M4^T + e^{-ia} M5^T) + sigma5 M6. */
	Mat3 combine(double alpha) const;
};

std::array<AngularDensities, 4> angular_assembly(const ThetaMatrices &theta);

/*! \brief Potential b1 J1 + mu_l b2 J2 + ((mu_l b3 - d_z b1)/krho^2) J4 (the a3 = a5 = 0 choice). */
Mat3 sommerfeld_potential(const LayerStack &stack, double kx, double ky, double z, double zp);

} // namespace stratum
