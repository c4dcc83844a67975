#pragma once

#include <array>

#include "stratum/freespace.hpp"
#include "stratum/medium.hpp"
#include "stratum/transmission.hpp"

namespace stratum {

/*! \brief The four exponentials Z^{*star}_{l l'}(k_rho, z, z'), indexed by branch_index(target, source).
 *
 * Each is written as exp(i (k_lz * a + k_l'z * b)) with real lengths a, b taken from the
 * image-coordinate formulas. For large k_rho the product sigma*Z decays like exp(-k_rho (a + b)),
 * so depth = a + b is the vertical travel used for tail estimates.
 */
struct PropagationFactor
{
	int ell = 0;
	int src = 0;
	std::array<cplx, 4> Z{};
	std::array<double, 4> a{};
	std::array<double, 4> b{};
	std::array<bool, 4> active{};

	double depth(int branch) const { return a[branch] + b[branch]; }
};

PropagationFactor propagation_factors(const LayerStack &stack, cplx krho, int ell, int src, double z, double zp);

/*! \brief +1 for an upgoing target branch, -1 for a downgoing one: d/dz Z = i * target_sign * k_lz * Z. */
inline int target_sign(Dir t) { return t == Dir::Up ? 1 : -1; }

/*! \brief Source sign s^{star star}_{l'l'}: -1 for an upgoing source branch, +1 for a downgoing one. */
inline int source_sign(Dir s) { return s == Dir::Up ? -1 : 1; }

/*! \brief Values and z-derivatives of the scalar kernels G1 (mu family), G2 (eps family) and G3 = -d/dz' G2. */
struct ScalarKernelTriple
{
	int ell = 0;
	int src = 0;
	cplx g1, g2, g3;
	cplx g1_dz, g2_dz, g3_dz;

	// Reaction parts only (total minus the source-layer free-space term).
	cplx r1, r2, r3;
	cplx r1_dz, r2_dz, r3_dz;

	/*! \brief z == z': g3 and g2_dz carry a jump, g3_dz a delta; the smooth average is stored. */
	bool has_delta = false;
};

ScalarKernelTriple scalar_kernels(const LayerStack &stack, cplx krho, double z, double zp);

/*! \brief Per-branch dyadic densities Theta_E and Theta_H in Cartesian components. */
struct ThetaDensities
{
	std::array<Mat3, 4> E;
	std::array<Mat3, 4> H;
};

ThetaDensities theta_densities(const LayerStack &stack, cplx krho, double alpha, int ell, int src);

DyadicSample spectral_dyadic_e(const LayerStack &stack, double kx, double ky, double z, double zp);
DyadicSample spectral_dyadic_h(const LayerStack &stack, double kx, double ky, double z, double zp);

/*! \brief Reaction-only parts of the two spectral dyadics (no free-space term). */
Mat3 spectral_reaction_e(const LayerStack &stack, double kx, double ky, double z, double zp);
Mat3 spectral_reaction_h(const LayerStack &stack, double kx, double ky, double z, double zp);

} // namespace stratum
