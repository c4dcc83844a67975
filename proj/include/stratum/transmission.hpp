#pragma once

#include <array>
#include <vector>

#include "stratum/medium.hpp"

namespace stratum {

/*! \brief Per-layer weight w of the interface condition [[u]] = 0, [[(1/w) du/dz]] = 0. */
struct JumpWeight
{
	std::vector<cplx> w;

	static JumpWeight mu(const LayerStack &stack) { return {stack.mu()}; }
	static JumpWeight eps(const LayerStack &stack) { return {stack.eps()}; }
};

struct Fresnel
{
	cplx R;
	cplx T;
};

/*! \brief Single-interface coefficients for a unit wave incident from layer `from` onto adjacent layer `to`. */
Fresnel fresnel(const LayerStack &stack, const JumpWeight &weight, int from, int to, cplx krho);

/*! \brief up[l] = R~_{l,l-1} (reflection off everything above layer l), down[l] = R~_{l,l+1}. */
struct Reflections
{
	std::vector<cplx> up;
	std::vector<cplx> down;
};

Reflections generalized_reflection(const LayerStack &stack, const JumpWeight &weight, cplx krho);

/*! \brief T~_{src,l} for every layer l, with T~_{src,src} = 1. */
std::vector<cplx> generalized_transmission(const LayerStack &stack, const JumpWeight &weight, cplx krho, int src);

cplx q_factor(const LayerStack &stack, const JumpWeight &weight, cplx krho, int ell);

/*! \brief Everything the recursions produce for one source layer at one k_rho.
 *
 * sigma[l][b] is the density of branch b = branch_index(target, source) for target layer l.
 */
struct DensitySet
{
	int src = 0;
	cplx krho;
	std::vector<cplx> R_up;
	std::vector<cplx> R_down;
	std::vector<cplx> T_to;
	std::vector<cplx> Q;
	std::vector<std::array<cplx, 4>> sigma;
};

DensitySet densities(const LayerStack &stack, const JumpWeight &weight, cplx krho, int src);

/*! \brief s^{*star}_{l,l'} sign: Down -> +1 iff l <= l'; Up -> +1 iff l < l'. */
int updown_sign(int ell, int src, Dir star);

/*! \brief Whether branch b can carry a nonzero density for the layer pair (ell, src). */
bool branch_active(const LayerStack &stack, int ell, int src, int b);

/*! \brief Reaction-field coefficients from a direct dense solve of the interface conditions.
 *
 * In layer l the reaction field is up[l] e^{i k_lz (z - d_l)} + down[l] e^{i k_lz (d_{l-1} - z)};
 * up[L] and down[0] are zero. A(l), B(l) convert to the absolute form A e^{i k_lz z} + B e^{-i k_lz z}.
 */
struct OracleSolution
{
	int src = 0;
	double zp = 0.0;
	cplx krho;
	std::vector<cplx> kz;
	std::vector<cplx> up;
	std::vector<cplx> down;
	std::vector<double> d;

	cplx A(int l) const;
	cplx B(int l) const;

	/*! \brief Reaction part of the field at z in layer l (defaults to layer_of(z) when l < 0). */
	cplx reaction(double z, int l) const;
	cplx reaction_dz(double z, int l) const;
};

OracleSolution coefficients_oracle(const LayerStack &stack, const JumpWeight &weight, cplx krho, double zp);

} // namespace stratum
