#include "stratum/medium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stratum {

LayerStack::LayerStack(cplx omega, std::vector<cplx> eps, std::vector<cplx> mu, std::vector<double> d)
	: omega_(omega), eps_(std::move(eps)), mu_(std::move(mu)), d_(std::move(d))
{
	if (!std::isfinite(omega_.real()) || omega_.imag() != 0.0 || omega_.real() == 0.0)
		throw ConfigError("omega must be real, finite and nonzero");
	if (eps_.size() != mu_.size())
		throw ConfigError("eps and mu must have the same length");
	if (eps_.size() != d_.size() + 1)
		throw ConfigError("number of layers must equal number of interfaces + 1", static_cast<int>(eps_.size()));

	for (size_t l = 0; l < eps_.size(); l++)
	{
		if (eps_[l] == 0.0 || !std::isfinite(std::abs(eps_[l])))
			throw ConfigError("eps of layer " + std::to_string(l) + " must be finite and nonzero", static_cast<int>(l));
		if (mu_[l] == 0.0 || !std::isfinite(std::abs(mu_[l])))
			throw ConfigError("mu of layer " + std::to_string(l) + " must be finite and nonzero", static_cast<int>(l));
	}
	for (size_t l = 0; l < d_.size(); l++)
	{
		if (!std::isfinite(d_[l]))
			throw ConfigError("interface " + std::to_string(l) + " is not finite", static_cast<int>(l));
		if (l > 0 && !(d_[l] < d_[l - 1]))
			throw ConfigError("interfaces must be strictly decreasing (interface " + std::to_string(l) + ")", static_cast<int>(l));
	}

	k_.resize(eps_.size());
	for (size_t l = 0; l < eps_.size(); l++)
	{
		k_[l] = omega_ * std::sqrt(eps_[l] * mu_[l]);
	}
}

LayerStack LayerStack::uniform(cplx omega, cplx eps, cplx mu, std::vector<double> d)
{
	const size_t n = d.size() + 1;
	return LayerStack(omega, std::vector<cplx>(n, eps), std::vector<cplx>(n, mu), std::move(d));
}

double LayerStack::top(int l) const
{
	return l == 0 ? std::numeric_limits<double>::infinity() : d_[l - 1];
}

double LayerStack::bottom(int l) const
{
	return l == L() ? -std::numeric_limits<double>::infinity() : d_[l];
}

double LayerStack::thickness(int l) const
{
	if (l == 0 || l == L())
		return 0.0;
	return d_[l - 1] - d_[l];
}

double LayerStack::d_clamped(int l) const
{
	if (L() == 0)
		return 0.0;
	return d_[std::clamp(l, 0, L() - 1)];
}

double LayerStack::max_abs_k() const
{
	double m = 0.0;
	for (const auto &k : k_)
		m = std::max(m, std::abs(k));
	return m;
}


int layer_of(const LayerStack &stack, double z)
{
	// Layer l is [d_l, d_{l-1}); the first interface at or below z bounds it.
	const auto &d = stack.interfaces();
	int l = 0;
	while (l < stack.L() && z < d[l])
		l++;
	return l;
}

cplx vertical_wavenumber(cplx k, cplx krho)
{
	cplx kz = std::sqrt(k * k - krho * krho);
	if (kz.imag() < 0.0 || (kz.imag() == 0.0 && kz.real() < 0.0))
		kz = -kz;
	return kz;
}

cplx vertical_wavenumber(const LayerStack &stack, int ell, cplx krho)
{
	return vertical_wavenumber(stack.k(ell), krho);
}

double image_coordinate(const LayerStack &stack, int ell, double z)
{
	return 2.0 * stack.d(ell) - z;
}

SpectralPoint spectral_point(const LayerStack &stack, double kx, double ky)
{
	SpectralPoint p;
	p.kx = kx;
	p.ky = ky;
	p.krho = std::hypot(kx, ky);
	p.alpha = std::atan2(ky, kx);
	p.klz.resize(stack.num_layers());
	for (int l = 0; l < stack.num_layers(); l++)
		p.klz[l] = vertical_wavenumber(stack, l, p.krho);
	return p;
}

} // namespace stratum
