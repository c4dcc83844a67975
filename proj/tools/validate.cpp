#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>

#include "stratum/matrix_basis.hpp"
#include "stratum/sommerfeld.hpp"
#include "stratum/spectral_tetm.hpp"
#include "stratum/transmission.hpp"

namespace stratum::cli {

bool SuiteReport::passed() const
{
	return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
}

const std::vector<std::string> &suite_names()
{
	static const std::vector<std::string> names = {"sommerfeld-identity", "equivalence", "homogeneous-limit",
		"interface-jumps", "product-table", "oracle"};
	return names;
}

int thread_limit()
{
	int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
	if (const char *env = std::getenv("STRATUM_THREADS"))
	{
		char *end = nullptr;
		const long v = std::strtol(env, &end, 10);
		if (end != env && *end == '\0' && v >= 1)
			n = std::min<long>(n, v);
	}
	return n;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results are written by index,
// so the order of the report never depends on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)> &fn)
{
	threads = std::max(1, std::min(threads, n));
	if (threads == 1)
	{
		for (int i = 0; i < n; i++)
			fn(i);
		return;
	}
	std::vector<std::thread> pool;
	std::vector<std::exception_ptr> errors(threads);
	for (int t = 0; t < threads; t++)
		pool.emplace_back([&, t] {
			try
			{
				for (int i = t; i < n; i += threads)
					fn(i);
			}
			catch (...)
			{
				errors[t] = std::current_exception();
			}
		});
	for (auto &th : pool)
		th.join();
	for (auto &e : errors)
		if (e)
			std::rethrow_exception(e);
}

double rel_maxnorm(const Mat3 &a, const Mat3 &b)
{
	const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
	return scale > 0.0 ? (a - b).cwiseAbs().maxCoeff() / scale : 0.0;
}

Check make_check(std::string name, double measured, double tol, std::string detail = {})
{
	return {std::move(name), measured, tol, measured <= tol, std::move(detail)};
}

struct Sampler
{
	std::mt19937_64 rng;
	const LayerStack &stack;

	double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

	// A depth at least `gap` away from every interface.
	double depth(double gap = 0.05)
	{
		const auto &d = stack.interfaces();
		const double hi = d.empty() ? 1.0 : d.front() + 1.0;
		const double lo = d.empty() ? -1.0 : d.back() - 1.0;
		for (;;)
		{
			const double z = uniform(lo, hi);
			if (std::all_of(d.begin(), d.end(), [&](double x) { return std::abs(z - x) > gap; }))
				return z;
		}
	}

	std::pair<double, double> transverse()
	{
		const double ks = stack.max_abs_k();
		const double kr = uniform(0.05, 3.0) * ks;
		const double a = uniform(0.0, 2.0 * kPi);
		return {kr * std::cos(a), kr * std::sin(a)};
	}
};

SuiteReport sommerfeld_identity(std::uint64_t seed, int threads)
{
	SuiteReport rep{"sommerfeld-identity", {}};
	const int n = 10;
	rep.checks.resize(n);
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> U(0.0, 1.0);
	struct Case { cplx k; double rho, dz; };
	std::vector<Case> cases(n);
	for (auto &c : cases)
	{
		const double re = 0.5 + 2.5 * U(rng);
		c.k = {re, re * (0.05 + 0.45 * U(rng))};
		c.rho = 0.2 + 1.8 * U(rng);
		c.dz = 0.2 + 1.8 * U(rng);
	}
	parallel_for(n, threads, [&](int i) {
		const Case &c = cases[i];
		QuadratureSpec spec;
		spec.rel_tol = 1e-10;
		const auto kernel = [&](double x) {
			const cplx kz = vertical_wavenumber(c.k, x);
			return std::exp(kI * kz * c.dz) / kz;
		};
		const auto q = bessel_integral(kernel, 0, c.rho, 0.0, {c.dz, {c.k}}, spec);
		const cplx ref = scalar_gf({c.rho, 0.0, c.dz}, {0.0, 0.0, 0.0}, c.k);
		rep.checks[i] = make_check("geometry " + std::to_string(i), std::abs(q.value - ref) / std::abs(ref), 1e-6);
	});
	return rep;
}

SuiteReport equivalence(const LayerStack &stack, std::uint64_t seed, int threads)
{
	SuiteReport rep{"equivalence", {}};
	const int n = 200;
	Sampler s{std::mt19937_64(seed), stack};
	struct Case { double kx, ky, z, zp; };
	std::vector<Case> cases(n);
	for (auto &c : cases)
	{
		std::tie(c.kx, c.ky) = s.transverse();
		c.z = s.depth();
		c.zp = s.depth();
	}
	std::vector<double> err(n);
	parallel_for(n, threads, [&](int i) {
		const Case &c = cases[i];
		const double e = rel_maxnorm(spectral_dyadic_e(stack, c.kx, c.ky, c.z, c.zp).value,
			spectral_dyadic_e_basis(stack, c.kx, c.ky, c.z, c.zp).value);
		const double h = rel_maxnorm(spectral_dyadic_h(stack, c.kx, c.ky, c.z, c.zp).value,
			spectral_dyadic_h_basis(stack, c.kx, c.ky, c.z, c.zp).value);
		err[i] = std::max(e, h);
	});
	rep.checks.push_back(make_check("TE/TM vs matrix basis, 200 samples", *std::max_element(err.begin(), err.end()), 1e-12));
	return rep;
}

SuiteReport homogeneous_limit(const LayerStack &stack, std::uint64_t seed, int threads)
{
	SuiteReport rep{"homogeneous-limit", {}};
	const LayerStack uni = LayerStack::uniform(stack.omega(), stack.eps(0), stack.mu(0), stack.interfaces());
	Sampler s{std::mt19937_64(seed), uni};
	const int n = 50;
	std::vector<double> reaction(n), spectral(n);
	struct Case { double kx, ky, z, zp; };
	std::vector<Case> cases(n);
	for (auto &c : cases)
	{
		std::tie(c.kx, c.ky) = s.transverse();
		c.z = s.depth();
		c.zp = s.depth();
	}
	const FreeSpaceContext ctx{uni.k(0), uni.mu(0), uni.omega()};
	parallel_for(n, threads, [&](int i) {
		const Case &c = cases[i];
		const DyadicSample e = spectral_dyadic_e(uni, c.kx, c.ky, c.z, c.zp);
		const DyadicSample h = spectral_dyadic_h(uni, c.kx, c.ky, c.z, c.zp);
		const Mat3 fe = spectral_dyadic_e_free(c.kx, c.ky, c.z, c.zp, ctx).value;
		const Mat3 fh = spectral_dyadic_h_free(c.kx, c.ky, c.z, c.zp, ctx).value;
		// Field scattered by the (absent) interfaces: total minus the source-layer free-space term.
		// Within the source layer this is exactly the reaction sum.
		const double ue = (e.value - fe).cwiseAbs().maxCoeff() / fe.cwiseAbs().maxCoeff();
		const double uh = (h.value - fh).cwiseAbs().maxCoeff() / fh.cwiseAbs().maxCoeff();
		reaction[i] = std::max(ue, uh);
		spectral[i] = std::max(rel_maxnorm(e.value, fe), rel_maxnorm(h.value, fh));
	});
	rep.checks.push_back(make_check("max scattered-field magnitude (relative)", *std::max_element(reaction.begin(), reaction.end()), 1e-13));
	rep.checks.push_back(make_check("spectral dyadics vs free space", *std::max_element(spectral.begin(), spectral.end()), 1e-10));

	const int m = 3;
	std::vector<double> phys(m);
	std::vector<std::pair<Vec3, Vec3>> pts(m);
	for (auto &p : pts)
	{
		p.first = {s.uniform(-1, 1), s.uniform(-1, 1), s.depth()};
		do
			p.second = {s.uniform(-1, 1), s.uniform(-1, 1), s.depth()};
		while (std::abs(p.first[2] - p.second[2]) < 0.3);
	}
	parallel_for(m, threads, [&](int i) {
		const auto [r, rp] = pts[i];
		const FreeQuadrature q = free_dyadics_by_quadrature(ctx, r, rp, QuadratureSpec{});
		phys[i] = std::max(rel_maxnorm(q.E, dyadic_e_free(r, rp, ctx)), rel_maxnorm(q.H, dyadic_h_free(r, rp, ctx)));
		const PhysicalSample ps = physical_dyadics(uni, r, rp, QuadratureSpec{});
		phys[i] = std::max({phys[i], rel_maxnorm(ps.G_E, dyadic_e_free(r, rp, ctx)),
			rel_maxnorm(ps.G_H, dyadic_h_free(r, rp, ctx))});
	});
	rep.checks.push_back(make_check("physical dyadics after quadrature", *std::max_element(phys.begin(), phys.end()), 1e-5));
	return rep;
}

// One-sided limit at an interface from the side z = d + dir*h, by linear extrapolation.
Mat3 one_sided(const std::function<Mat3(double)> &f, double d, double dir)
{
	const double h = 1e-7 * std::max(1.0, std::abs(d));
	return 2.0 * f(d + dir * h) - f(d + 2.0 * dir * h);
}

SuiteReport interface_jumps(const LayerStack &stack, std::uint64_t seed, int threads)
{
	SuiteReport rep{"interface-jumps", {}};
	if (stack.L() == 0)
	{
		rep.checks.push_back(make_check("no interfaces", 0.0, 1e-10));
		return rep;
	}
	Sampler s{std::mt19937_64(seed), stack};
	const int n = 50;
	struct Case { double kx, ky, zp; };
	std::vector<Case> cases(n);
	for (auto &c : cases)
	{
		std::tie(c.kx, c.ky) = s.transverse();
		c.zp = s.depth();
	}
	std::vector<double> err(n);
	parallel_for(n, threads, [&](int i) {
		const Case &c = cases[i];
		double worst = 0.0;
		for (int j = 0; j < stack.L(); j++)
		{
			const double d = stack.d(j);
			auto E = [&](double z) { return spectral_dyadic_e(stack, c.kx, c.ky, z, c.zp).value; };
			auto H = [&](double z) { return spectral_dyadic_h(stack, c.kx, c.ky, z, c.zp).value; };
			const Mat3 Ea = one_sided(E, d, 1.0), Eb = one_sided(E, d, -1.0);
			const Mat3 Ha = one_sided(H, d, 1.0), Hb = one_sided(H, d, -1.0);
			const double se = std::max(Ea.cwiseAbs().maxCoeff(), Eb.cwiseAbs().maxCoeff());
			const double sh = std::max(Ha.cwiseAbs().maxCoeff(), Hb.cwiseAbs().maxCoeff());
			const double ej = (Ea.topRows(2) - Eb.topRows(2)).cwiseAbs().maxCoeff() / se;
			const double hj = (Ha.topRows(2) - Hb.topRows(2)).cwiseAbs().maxCoeff() / sh;
			const cplx ea = stack.eps(j), eb = stack.eps(j + 1), ma = stack.mu(j), mb = stack.mu(j + 1);
			const double en = (ea * Ea.row(2) - eb * Eb.row(2)).cwiseAbs().maxCoeff()
				/ std::max(std::abs(ea) * se, std::abs(eb) * se);
			const double hn = (ma * Ha.row(2) - mb * Hb.row(2)).cwiseAbs().maxCoeff()
				/ std::max(std::abs(ma) * sh, std::abs(mb) * sh);
			worst = std::max({worst, ej, hj, en, hn});
		}
		err[i] = worst;
	});
	rep.checks.push_back(make_check("tangential and normal jumps, 50 samples", *std::max_element(err.begin(), err.end()), 1e-10));
	return rep;
}

SuiteReport product_table(std::uint64_t seed)
{
	SuiteReport rep{"product-table", {}};
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> U(-3.0, 3.0);
	std::vector<std::pair<double, double>> pts(50);
	for (auto &p : pts)
		p = {U(rng), U(rng)};
	for (int i = 1; i <= 9; i++)
		for (int j = 1; j <= 9; j++)
		{
			double worst = 0.0;
			for (const auto &[kx, ky] : pts)
			{
				const Mat3 a = basis(i, kx, ky), b = basis(j, kx, ky);
				const Mat3 table = evaluate(basis_product(i, j), kx, ky);
				// rounding scale of the direct product
				const double scale = std::max(1.0, (a.cwiseAbs() * b.cwiseAbs()).maxCoeff());
				worst = std::max(worst, (a * b - table).cwiseAbs().maxCoeff() / scale);
			}
			rep.checks.push_back(make_check("J" + std::to_string(i) + "*J" + std::to_string(j), worst, 1e-14));
		}
	return rep;
}

SuiteReport oracle(const LayerStack &stack, std::uint64_t seed, int threads)
{
	SuiteReport rep{"oracle", {}};
	Sampler s{std::mt19937_64(seed), stack};
	const int L = stack.L();
	std::vector<double> krhos(5);
	for (auto &k : krhos)
		k = s.uniform(0.05, 3.0) * stack.max_abs_k();
	// a source depth strictly inside each layer
	std::vector<double> zsrc(L + 1);
	for (int l = 0; l <= L; l++)
	{
		const double top = l == 0 ? (L ? stack.d(0) + 1.0 : 1.0) : stack.d(l - 1);
		const double bot = l == L ? (L ? stack.d(L - 1) - 1.0 : -1.0) : stack.d(l);
		zsrc[l] = bot + s.uniform(0.2, 0.8) * (top - bot);
	}
	std::vector<std::vector<double>> ztgt(L + 1);
	for (int l = 0; l <= L; l++)
		for (int m = 0; m < 3; m++)
		{
			const double top = l == 0 ? (L ? stack.d(0) + 1.0 : 1.0) : stack.d(l - 1);
			const double bot = l == L ? (L ? stack.d(L - 1) - 1.0 : -1.0) : stack.d(l);
			ztgt[l].push_back(bot + s.uniform(0.05, 0.95) * (top - bot));
		}

	for (int fam = 0; fam < 2; fam++)
	{
		const JumpWeight w = fam == 0 ? JumpWeight::mu(stack) : JumpWeight::eps(stack);
		std::vector<double> err(L + 1);
		parallel_for(L + 1, threads, [&](int src) {
			double worst = 0.0;
			for (double kr : krhos)
			{
				const OracleSolution o = coefficients_oracle(stack, w, kr, zsrc[src]);
				const DensitySet ds = densities(stack, w, kr, src);
				const cplx kp = vertical_wavenumber(stack, src, kr);
				double scale = 0.0, diff = 0.0;
				for (int l = 0; l <= L; l++)
					for (double z : ztgt[l])
					{
						const PropagationFactor pf = propagation_factors(stack, kr, l, src, z, zsrc[src]);
						cplx sum = 0.0;
						for (int b = 0; b < 4; b++)
							if (pf.active[b])
								sum += ds.sigma[l][b] * pf.Z[b];
						sum *= kI / (2.0 * kp);
						const cplx ref = o.reaction(z, l);
						scale = std::max(scale, std::abs(ref));
						diff = std::max(diff, std::abs(sum - ref));
					}
				worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
			}
			err[src] = worst;
		});
		for (int src = 0; src <= L; src++)
			rep.checks.push_back(make_check(std::string(fam == 0 ? "mu" : "eps") + " family, source layer "
				+ std::to_string(src), err[src], 1e-12));
	}
	return rep;
}

} // namespace

std::vector<SuiteReport> run_suite(const std::string &name, const LayerStack &stack, std::uint64_t seed, int threads)
{
	std::vector<SuiteReport> out;
	const bool all = name == "all";
	if (!all && std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
		throw ConfigError("unknown validation suite '" + name + "'");
	if (all || name == "sommerfeld-identity")
		out.push_back(sommerfeld_identity(seed, threads));
	if (all || name == "equivalence")
		out.push_back(equivalence(stack, seed, threads));
	if (all || name == "homogeneous-limit")
		out.push_back(homogeneous_limit(stack, seed, threads));
	if (all || name == "interface-jumps")
		out.push_back(interface_jumps(stack, seed, threads));
	if (all || name == "product-table")
		out.push_back(product_table(seed));
	if (all || name == "oracle")
		out.push_back(oracle(stack, seed, threads));
	return out;
}

} // namespace stratum::cli
