#pragma once

#include <limits>
#include <vector>

#include "stratum/types.hpp"

namespace stratum {

/*! \brief Planar layered medium. Layer 0 is the top half-space, layer L the bottom one.
 *
 * Interfaces d[0] > d[1] > ... > d[L-1]; layer l occupies d[l] <= z < d[l-1].
 */
class LayerStack
{
public:
	LayerStack() = default;

	/*! \brief Validating constructor; throws ConfigError carrying the offending index. */
	LayerStack(cplx omega, std::vector<cplx> eps, std::vector<cplx> mu, std::vector<double> d);

	/*! \brief A stack of n copies of the same material, separated by the given interfaces. */
	static LayerStack uniform(cplx omega, cplx eps, cplx mu, std::vector<double> d);

	int L() const { return static_cast<int>(d_.size()); }
	int num_layers() const { return L() + 1; }

	cplx omega() const { return omega_; }
	cplx eps(int l) const { return eps_[l]; }
	cplx mu(int l) const { return mu_[l]; }
	double d(int l) const { return d_[l]; }
	const std::vector<cplx> &eps() const { return eps_; }
	const std::vector<cplx> &mu() const { return mu_; }
	const std::vector<double> &interfaces() const { return d_; }

	/*! \brief k_l = omega*sqrt(eps_l*mu_l), principal root. */
	cplx k(int l) const { return k_[l]; }

	/*! \brief Upper boundary d_{l-1} (+inf for the top layer). */
	double top(int l) const;

	/*! \brief Lower boundary d_l (-inf for the bottom layer). */
	double bottom(int l) const;

	/*! \brief Thickness D_l = d_{l-1} - d_l for interior layers; 0 for the two half-spaces. */
	double thickness(int l) const;

	/*! \brief d_l with the half-space convention d_{-1} = d_0 and d_L = d_{L-1}; 0 when L = 0. */
	double d_clamped(int l) const;

	double max_abs_k() const;

private:
	cplx omega_{1.0, 0.0};
	std::vector<cplx> eps_{cplx(1.0)};
	std::vector<cplx> mu_{cplx(1.0)};
	std::vector<double> d_;
	std::vector<cplx> k_{cplx(1.0)};
};

int layer_of(const LayerStack &stack, double z);

/*! \brief sqrt(k^2 - krho^2) on the branch Im >= 0 (Re >= 0 when the root is real). */
cplx vertical_wavenumber(cplx k, cplx krho);
cplx vertical_wavenumber(const LayerStack &stack, int ell, cplx krho);

/*! \brief Mirror image 2 d_l - z of z across interface l. */
double image_coordinate(const LayerStack &stack, int ell, double z);

struct SpectralPoint
{
	double kx = 0.0, ky = 0.0;
	double krho = 0.0;
	double alpha = 0.0;
	std::vector<cplx> klz;
};

SpectralPoint spectral_point(const LayerStack &stack, double kx, double ky);

} // namespace stratum
