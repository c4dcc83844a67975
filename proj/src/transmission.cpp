#include "stratum/transmission.hpp"

#include <algorithm>
#include <cmath>

namespace stratum {

namespace {

constexpr double kPoleTol = 1e-12;

void check_pole(cplx den, double scale, const char *what)
{
	if (std::abs(den) < kPoleTol * std::max(1.0, scale))
		throw PoleError(std::string("vanishing denominator in ") + what);
}

std::vector<cplx> all_kz(const LayerStack &stack, cplx krho)
{
	std::vector<cplx> kz(stack.num_layers());
	for (int l = 0; l < stack.num_layers(); l++)
		kz[l] = vertical_wavenumber(stack, l, krho);
	return kz;
}

Fresnel fresnel_kz(const JumpWeight &weight, int from, int to, cplx kz_from, cplx kz_to)
{
	const cplx num = weight.w[to] * kz_from - weight.w[from] * kz_to;
	const cplx den = weight.w[to] * kz_from + weight.w[from] * kz_to;
	if (den == 0.0)
		throw PoleError("degenerate interface: Fresnel denominator vanishes");
	const cplx R = num / den;
	return {R, 1.0 + R};
}

Reflections reflections_kz(const LayerStack &stack, const JumpWeight &weight, const std::vector<cplx> &kz)
{
	const int L = stack.L();
	Reflections r;
	r.up.assign(L + 1, 0.0);
	r.down.assign(L + 1, 0.0);

	// R~_{l+1,l} from R~_{l,l-1}
	for (int l = 0; l < L; l++)
	{
		const cplx R = fresnel_kz(weight, l + 1, l, kz[l + 1], kz[l]).R;
		const cplx rt = r.up[l] * std::exp(2.0 * kI * kz[l] * stack.thickness(l));
		const cplx den = 1.0 + R * rt;
		check_pole(den, std::abs(R * rt), "upward reflection recursion");
		r.up[l + 1] = (R + rt) / den;
	}

	// R~_{l,l+1} from R~_{l+1,l+2}
	for (int l = L - 1; l >= 0; l--)
	{
		const cplx R = fresnel_kz(weight, l, l + 1, kz[l], kz[l + 1]).R;
		const cplx rt = r.down[l + 1] * std::exp(2.0 * kI * kz[l + 1] * stack.thickness(l + 1));
		const cplx den = 1.0 + R * rt;
		check_pole(den, std::abs(R * rt), "downward reflection recursion");
		r.down[l] = (R + rt) / den;
	}
	return r;
}

std::vector<cplx> transmission_kz(const LayerStack &stack, const JumpWeight &weight, const std::vector<cplx> &kz,
	const Reflections &r, int src)
{
	const int L = stack.L();
	std::vector<cplx> T(L + 1, 0.0);
	T[src] = 1.0;

	for (int l = src - 1; l >= 0; l--)
	{
		const cplx Tf = fresnel_kz(weight, l + 1, l, kz[l + 1], kz[l]).T;
		const cplx rr = fresnel_kz(weight, l + 1, l, kz[l + 1], kz[l]).R * r.up[l]
			* std::exp(2.0 * kI * kz[l] * stack.thickness(l));
		const cplx den = 1.0 + rr;
		check_pole(den, std::abs(rr), "upward transmission recursion");
		T[l] = Tf * std::exp(-kI * (kz[l] - kz[l + 1]) * stack.d(l)) / den * T[l + 1];
	}

	for (int l = src; l < L; l++)
	{
		const Fresnel f = fresnel_kz(weight, l, l + 1, kz[l], kz[l + 1]);
		const cplx rr = f.R * r.down[l + 1] * std::exp(2.0 * kI * kz[l + 1] * stack.thickness(l + 1));
		const cplx den = 1.0 + rr;
		check_pole(den, std::abs(rr), "downward transmission recursion");
		T[l + 1] = f.T * std::exp(-kI * (kz[l] - kz[l + 1]) * stack.d(l)) / den * T[l];
	}
	return T;
}

cplx q_kz(const LayerStack &stack, const std::vector<cplx> &kz, const Reflections &r, int l)
{
	const cplx rr = r.down[l] * r.up[l] * std::exp(2.0 * kI * kz[l] * stack.thickness(l));
	const cplx den = 1.0 - rr;
	check_pole(den, std::abs(rr), "source-layer multiple reflection factor");
	return 1.0 / den;
}

void check_weight(const LayerStack &stack, const JumpWeight &weight)
{
	if (static_cast<int>(weight.w.size()) != stack.num_layers())
		throw ConfigError("jump weight length does not match the number of layers");
	for (size_t l = 0; l < weight.w.size(); l++)
		if (weight.w[l] == 0.0)
			throw ConfigError("jump weight must be nonzero", static_cast<int>(l));
}

void check_layer(const LayerStack &stack, int l)
{
	if (l < 0 || l > stack.L())
		throw ConfigError("layer index out of range", l);
}

} // namespace


Fresnel fresnel(const LayerStack &stack, const JumpWeight &weight, int from, int to, cplx krho)
{
	check_weight(stack, weight);
	check_layer(stack, from);
	check_layer(stack, to);
	if (std::abs(from - to) != 1)
		throw ConfigError("fresnel requires adjacent layers", to);
	return fresnel_kz(weight, from, to, vertical_wavenumber(stack, from, krho), vertical_wavenumber(stack, to, krho));
}

Reflections generalized_reflection(const LayerStack &stack, const JumpWeight &weight, cplx krho)
{
	check_weight(stack, weight);
	return reflections_kz(stack, weight, all_kz(stack, krho));
}

std::vector<cplx> generalized_transmission(const LayerStack &stack, const JumpWeight &weight, cplx krho, int src)
{
	check_weight(stack, weight);
	check_layer(stack, src);
	const auto kz = all_kz(stack, krho);
	return transmission_kz(stack, weight, kz, reflections_kz(stack, weight, kz), src);
}

cplx q_factor(const LayerStack &stack, const JumpWeight &weight, cplx krho, int ell)
{
	check_weight(stack, weight);
	check_layer(stack, ell);
	const auto kz = all_kz(stack, krho);
	return q_kz(stack, kz, reflections_kz(stack, weight, kz), ell);
}

DensitySet densities(const LayerStack &stack, const JumpWeight &weight, cplx krho, int src)
{
	check_weight(stack, weight);
	check_layer(stack, src);
	const int L = stack.L();
	const auto kz = all_kz(stack, krho);

	DensitySet ds;
	ds.src = src;
	ds.krho = krho;
	Reflections r = reflections_kz(stack, weight, kz);
	ds.T_to = transmission_kz(stack, weight, kz, r, src);
	ds.Q.resize(L + 1);
	for (int l = 0; l <= L; l++)
		ds.Q[l] = q_kz(stack, kz, r, l);
	ds.R_up = std::move(r.up);
	ds.R_down = std::move(r.down);
	ds.sigma.assign(L + 1, {0.0, 0.0, 0.0, 0.0});

	constexpr int UU = 0, UD = 1, DU = 2, DD = 3;
	const cplx Q = ds.Q[src];
	auto &s0 = ds.sigma[src];
	s0[UD] = Q * ds.R_down[src];
	s0[DU] = Q * ds.R_up[src];
	s0[UU] = Q * ds.R_down[src] * ds.R_up[src];
	s0[DD] = s0[UU];

	const cplx round_trip = std::exp(2.0 * kI * kz[src] * stack.thickness(src));

	// Layers above the source: the upgoing wave leaving the source layer is transmitted,
	// then partially reflected back down by everything above layer l.
	for (int l = 0; l < src; l++)
	{
		auto &s = ds.sigma[l];
		s[UU] = ds.T_to[l] * (1.0 + s0[UU] * round_trip);
		s[UD] = ds.T_to[l] * s0[UD];
		s[DU] = ds.R_up[l] * s[UU];
		s[DD] = ds.R_up[l] * s[UD];
	}

	// Layers below the source: mirror image of the above.
	for (int l = src + 1; l <= L; l++)
	{
		auto &s = ds.sigma[l];
		s[DD] = ds.T_to[l] * (1.0 + s0[DD] * round_trip);
		s[DU] = ds.T_to[l] * s0[DU];
		s[UD] = ds.R_down[l] * s[DD];
		s[UU] = ds.R_down[l] * s[DU];
	}
	return ds;
}

int updown_sign(int ell, int src, Dir star)
{
	if (star == Dir::Down)
		return ell <= src ? 1 : -1;
	return ell < src ? 1 : -1;
}

bool branch_active(const LayerStack &stack, int ell, int src, int b)
{
	const int L = stack.L();
	const bool tgt_up = branch_target(b) == Dir::Up;
	const bool src_up = branch_source(b) == Dir::Up;
	if (L == 0)
		return false;
	// A source-side wave heading into a half-space with nothing beyond it never returns.
	if (ell == src)
	{
		if (!src_up && src == L)
			return false;
		if (src_up && src == 0)
			return false;
		if (tgt_up && src == L)
			return false;
		if (!tgt_up && src == 0)
			return false;
		return true;
	}
	if (ell < src)
	{
		if (!src_up && src == L)
			return false;
		if (!tgt_up && ell == 0)
			return false;
		return true;
	}
	if (src_up && src == 0)
		return false;
	if (tgt_up && ell == L)
		return false;
	return true;
}


// ---- dense oracle ----

cplx OracleSolution::A(int l) const
{
	// up[l] e^{ik(z - d_l)}; the bottom half-space has no upgoing reaction wave.
	if (up[l] == 0.0)
		return 0.0;
	return up[l] * std::exp(-kI * kz[l] * d[l]);
}

cplx OracleSolution::B(int l) const
{
	if (down[l] == 0.0)
		return 0.0;
	return down[l] * std::exp(kI * kz[l] * d[l - 1]);
}

cplx OracleSolution::reaction(double z, int l) const
{
	const int L = static_cast<int>(d.size());
	cplx v = 0.0;
	if (l < L)
		v += up[l] * std::exp(kI * kz[l] * (z - d[l]));
	if (l > 0)
		v += down[l] * std::exp(kI * kz[l] * (d[l - 1] - z));
	return v;
}

cplx OracleSolution::reaction_dz(double z, int l) const
{
	const int L = static_cast<int>(d.size());
	cplx v = 0.0;
	if (l < L)
		v += kI * kz[l] * up[l] * std::exp(kI * kz[l] * (z - d[l]));
	if (l > 0)
		v -= kI * kz[l] * down[l] * std::exp(kI * kz[l] * (d[l - 1] - z));
	return v;
}

OracleSolution coefficients_oracle(const LayerStack &stack, const JumpWeight &weight, cplx krho, double zp)
{
	check_weight(stack, weight);
	const int L = stack.L();
	const int src = layer_of(stack, zp);
	if (zp == stack.bottom(src))
		throw DomainError("oracle source must lie strictly inside its layer");

	OracleSolution sol;
	sol.src = src;
	sol.zp = zp;
	sol.krho = krho;
	sol.kz = all_kz(stack, krho);
	sol.d = stack.interfaces();
	sol.up.assign(L + 1, 0.0);
	sol.down.assign(L + 1, 0.0);
	if (L == 0)
		return sol;

	const auto &kz = sol.kz;
	const cplx ks = kz[src];
	if (ks == 0.0)
		throw BranchPointError("source-layer k_z = 0");

	// Unknown layout: up[0..L-1] at 0..L-1, down[1..L] at L..2L-1.
	auto iu = [](int l) { return l; };
	auto id = [L](int l) { return L + l - 1; };

	Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * L, 2 * L);
	Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * L);

	for (int j = 0; j < L; j++)
	{
		const int a = j, b = j + 1; // layer above / below interface j
		const int r0 = 2 * j, r1 = 2 * j + 1;
		const cplx wa = weight.w[a], wb = weight.w[b];

		// layer a evaluated at its bottom z = d_j
		M(r0, iu(a)) += 1.0;
		M(r1, iu(a)) += kI * kz[a] / wa;
		if (a > 0)
		{
			const cplx e = std::exp(kI * kz[a] * stack.thickness(a));
			M(r0, id(a)) += e;
			M(r1, id(a)) += -kI * kz[a] * e / wa;
		}

		// layer b evaluated at its top z = d_j
		if (b < L)
		{
			const cplx e = std::exp(kI * kz[b] * stack.thickness(b));
			M(r0, iu(b)) -= e;
			M(r1, iu(b)) -= kI * kz[b] * e / wb;
		}
		M(r0, id(b)) -= 1.0;
		M(r1, id(b)) -= -kI * kz[b] / wb;

		// Free-space source term i e^{ik|z-z'|}/(2k) lives only in the source layer.
		if (a == src)
		{
			const cplx e = std::exp(kI * ks * (zp - stack.d(j)));
			rhs(r0) -= kI * e / (2.0 * ks);
			rhs(r1) -= 0.5 * e / wa;
		}
		if (b == src)
		{
			const cplx e = std::exp(kI * ks * (stack.d(j) - zp));
			rhs(r0) += kI * e / (2.0 * ks);
			rhs(r1) += -0.5 * e / wb;
		}
	}

	Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
	if (!(lu.rcond() > 1e-14))
		throw PoleError("dense interface system is singular");
	const Eigen::VectorXcd x = lu.solve(rhs);
	for (int l = 0; l < L; l++)
		sol.up[l] = x(iu(l));
	for (int l = 1; l <= L; l++)
		sol.down[l] = x(id(l));
	return sol;
}

} // namespace stratum
