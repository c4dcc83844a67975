#include "stratum/sommerfeld.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "stratum/matrix_basis.hpp"
#include "stratum/spectral_tetm.hpp"
#include "stratum/transmission.hpp"

namespace stratum {

double bessel_j(int n, double x)
{
	if (n < 0)
		throw ConfigError("bessel_j expects a non-negative order", n);
	if (!std::isfinite(x))
		throw DomainError("bessel_j argument must be finite");
	if (x < 0.0)
		return (n % 2 ? -1.0 : 1.0) * std::cyl_bessel_j(static_cast<double>(n), -x);
	return std::cyl_bessel_j(static_cast<double>(n), x);
}


// ---- adaptive Gauss-Kronrod engine ----

namespace {

constexpr double kXgk[8] = {
	0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
	0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
	0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
	0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
	0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
	0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
	0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
	0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7]
constexpr double kWg[4] = {
	0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
	0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Which end of a panel sits on a branch point. Graded panels use x = a + (b - a) s^2 measured from that
// end, which absorbs the 1/sqrt singularity of 1/k_z.
enum class Grade { None, Left, Right };

struct Panel
{
	double a, b;
	Grade grade;
	Eigen::VectorXcd value;
	Eigen::VectorXd error;
	double worst;
};

Panel gk15(const VectorIntegrand &f, int n, double a, double b, Grade grade, Eigen::VectorXcd &buf)
{
	const double w = b - a;
	Eigen::VectorXcd K = Eigen::VectorXcd::Zero(n), G = Eigen::VectorXcd::Zero(n);
	// t in [-1, 1]; returns the Jacobian and evaluates f into buf
	auto eval = [&](double t) {
		if (grade == Grade::None)
		{
			f(0.5 * (a + b) + 0.5 * w * t, buf.data());
			return 0.5 * w;
		}
		const double s = 0.5 * (1.0 + t);
		f(grade == Grade::Left ? a + w * s * s : b - w * s * s, buf.data());
		return w * s;
	};

	double jac = eval(0.0);
	K += kWgk[7] * jac * buf;
	G += kWg[3] * jac * buf;
	for (int j = 0; j < 7; j++)
		for (double t : {-kXgk[j], kXgk[j]})
		{
			jac = eval(t);
			K += kWgk[j] * jac * buf;
			if (j % 2 == 1)
				G += kWg[j / 2] * jac * buf;
		}
	Panel p{a, b, grade, K, (K - G).cwiseAbs(), 0.0};
	p.worst = p.error.size() ? p.error.maxCoeff() : 0.0;
	return p;
}

} // namespace

QuadratureResult integrate_adaptive(const VectorIntegrand &f, int n, double upper, std::vector<double> breakpoints,
	double max_width, const QuadratureSpec &spec)
{
	if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
		throw ConfigError("quadrature tolerances must be positive");
	if (!(upper > 0.0) || !std::isfinite(upper))
		throw ConfigError("quadrature upper limit must be positive and finite");

	breakpoints.push_back(0.0);
	breakpoints.push_back(upper);
	std::sort(breakpoints.begin(), breakpoints.end());
	std::vector<double> edges;
	for (double x : breakpoints)
		if (x >= 0.0 && x <= upper && (edges.empty() || x > edges.back() * (1.0 + 1e-14) + 1e-300))
			edges.push_back(x);

	Eigen::VectorXcd buf(n);
	std::vector<Panel> panels;
	const size_t last = edges.size() - 1;
	for (size_t s = 0; s < last; s++)
	{
		const double len = edges[s + 1] - edges[s];
		int pieces = max_width > 0.0 ? std::max(1, static_cast<int>(std::ceil(len / max_width))) : 1;
		if (s > 0 && s + 1 < last)
			pieces = std::max(pieces, 2); // one graded panel per end
		for (int p = 0; p < pieces; p++)
		{
			const double a = edges[s] + len * p / pieces;
			const double b = p + 1 == pieces ? edges[s + 1] : edges[s] + len * (p + 1) / pieces;
			// 0 and the cutoff are not branch points; interior edges are
			Grade g = Grade::None;
			if (p == 0 && s > 0)
				g = Grade::Left;
			else if (p + 1 == pieces && s + 1 < last)
				g = Grade::Right;
			panels.push_back(gk15(f, n, a, b, g, buf));
		}
	}

	Eigen::VectorXcd total = Eigen::VectorXcd::Zero(n);
	Eigen::VectorXd err = Eigen::VectorXd::Zero(n);
	auto cmp = [&panels](size_t i, size_t j) { return panels[i].worst < panels[j].worst; };
	std::priority_queue<size_t, std::vector<size_t>, decltype(cmp)> heap(cmp);
	for (size_t i = 0; i < panels.size(); i++)
	{
		total += panels[i].value;
		err += panels[i].error;
		heap.push(i);
	}

	auto tolerance = [&]() { return std::max(spec.abs_tol, spec.rel_tol * total.cwiseAbs().maxCoeff()); };
	auto resum = [&]() {
		std::vector<size_t> order(panels.size());
		for (size_t i = 0; i < order.size(); i++)
			order[i] = i;
		std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return panels[i].a < panels[j].a; });
		total.setZero();
		err.setZero();
		for (size_t i : order)
		{
			total += panels[i].value;
			err += panels[i].error;
		}
	};

	bool converged = n == 0 || err.maxCoeff() <= tolerance();
	while (!converged)
	{
		if (static_cast<int>(panels.size()) >= spec.max_panels)
			break;
		const size_t i = heap.top();
		heap.pop();
		const Panel old = panels[i];
		const double mid = 0.5 * (old.a + old.b);
		if (!(mid > old.a && mid < old.b))
			break; // panel can no longer be split in double precision
		total -= old.value;
		err -= old.error;
		panels[i] = gk15(f, n, old.a, mid, old.grade == Grade::Left ? Grade::Left : Grade::None, buf);
		panels.push_back(gk15(f, n, mid, old.b, old.grade == Grade::Right ? Grade::Right : Grade::None, buf));
		for (size_t j : {i, panels.size() - 1})
		{
			total += panels[j].value;
			err += panels[j].error;
			heap.push(j);
		}
		// Running sums drift slightly; recheck against an ordered re-summation before stopping.
		if (err.maxCoeff() <= tolerance())
		{
			resum();
			converged = err.maxCoeff() <= tolerance();
		}
	}
	resum();

	QuadratureResult out;
	out.value.assign(total.data(), total.data() + n);
	out.error.assign(err.data(), err.data() + n);
	out.cutoff = upper;
	out.panels = static_cast<int>(panels.size());
	if (!(err.maxCoeff() <= tolerance()) && n > 0)
		throw AccuracyError("k_rho quadrature did not converge within " + std::to_string(spec.max_panels) + " panels",
			out.value, out.error);
	return out;
}


// ---- Bessel-kernel integrals ----

namespace {

std::vector<double> branch_breaks(const std::vector<cplx> &ks)
{
	std::vector<double> out;
	for (const auto &k : ks)
	{
		out.push_back(std::abs(k.real()));
		out.push_back(std::abs(k));
	}
	return out;
}

double kscale(const std::vector<cplx> &ks)
{
	double m = 0.0;
	for (const auto &k : ks)
		m = std::max(m, std::abs(k));
	return m;
}

double panel_width(double rho)
{
	return rho > 0.0 ? kPi / rho : 0.0;
}

/*! \brief i^{1+kappa} e^{i kappa phi} / (4 pi), times (-1)^|kappa| for negative orders. */
cplx order_prefactor(int kappa, double phi)
{
	const cplx ip = std::pow(kI, 1 + kappa);
	cplx p = ip * std::exp(kI * double(kappa) * phi) / (4.0 * kPi);
	if (kappa < 0 && (-kappa) % 2 == 1)
		p = -p;
	return p;
}

// Estimated contribution of the neglected tail [K, inf) for an integrand decaying like exp(-depth x).
double tail_estimate(const cplx *values, int n, double depth)
{
	double m = 0.0;
	for (int i = 0; i < n; i++)
		m = std::max(m, std::abs(values[i]));
	return depth > 0.0 ? m / depth : std::numeric_limits<double>::infinity();
}

} // namespace

double krho_cutoff(const KernelInfo &info, const QuadratureSpec &spec)
{
	if (spec.max_krho > 0.0)
		return spec.max_krho;
	if (!(info.depth > 0.0))
		throw AccuracyError("integrand has no vertical decay (source and target on the same interface)");
	const double ks = kscale(info.wavenumbers);
	return std::max(1.5 * ks, ks + 50.0 / info.depth);
}

BesselIntegralResult bessel_integral(const std::function<cplx(double)> &kernel, int kappa, double rho, double phi,
	const KernelInfo &info, const QuadratureSpec &spec)
{
	if (kappa < -2 || kappa > 2)
		throw ConfigError("Bessel order must be in -2..2", kappa);
	if (rho < 0.0 || !std::isfinite(rho))
		throw ConfigError("transverse distance must be finite and non-negative");
	const int n = std::abs(kappa);
	const double K = krho_cutoff(info, spec);
	auto f = [&](double x, cplx *out) { out[0] = x * bessel_j(n, x * rho) * kernel(x); };

	const QuadratureResult q = integrate_adaptive(f, 1, K, branch_breaks(info.wavenumbers), panel_width(rho), spec);
	cplx tail_val;
	f(K, &tail_val);
	const double tail = tail_estimate(&tail_val, 1, info.depth);
	const cplx pre = order_prefactor(kappa, phi);
	BesselIntegralResult r{pre * q.value[0], std::abs(pre) * (q.error[0] + tail)};
	if (spec.max_krho > 0.0 && tail > std::max(spec.abs_tol, spec.rel_tol * std::abs(q.value[0])))
		throw AccuracyError("max_krho truncates a non-negligible tail", {r.value}, {r.error});
	return r;
}


// ---- physical-domain assembly ----

namespace {

// Per branch, nine scalar kernels (five for E, four for H). Each kernel is integrated once
// against J_|kappa| and then distributed over the matrices below.
constexpr int kKernels = 9;
constexpr int kOrder[kKernels] = {0, 2, 1, 1, 0, 0, 2, 1, 1};

enum MatId { M1, M2, M3, M4, M5, M4T, M5T, M6, J9 };

struct Usage
{
	int kappa;
	MatId mat;
	double sign;
};

const std::vector<Usage> &usages(int kernel)
{
	static const std::vector<Usage> table[kKernels] = {
		{{0, M1, 1}},
		{{2, M2, 1}, {-2, M3, 1}},
		{{1, M4, 1}, {-1, M5, 1}},
		{{1, M4T, 1}, {-1, M5T, 1}},
		{{0, M6, 1}},
		{{0, J9, 1}},
		{{2, M2, 1}, {-2, M3, -1}},
		{{1, M4T, 1}, {-1, M5T, -1}},
		{{1, M4, 1}, {-1, M5, -1}},
	};
	return table[kernel];
}

Mat3 matrix_of(MatId m)
{
	switch (m)
	{
	case M1: return assembly_matrix(1);
	case M2: return assembly_matrix(2);
	case M3: return assembly_matrix(3);
	case M4: return assembly_matrix(4);
	case M5: return assembly_matrix(5);
	case M4T: return assembly_matrix(4).transpose();
	case M5T: return assembly_matrix(5).transpose();
	case M6: return assembly_matrix(6);
	case J9: return basis(9, 0.0, 0.0);
	}
	return Mat3::Zero();
}

struct Assembled
{
	Mat3 E = Mat3::Zero(), H = Mat3::Zero();
	Eigen::Matrix3d eE = Eigen::Matrix3d::Zero(), eH = Eigen::Matrix3d::Zero();
};

// Combine the nine integrated kernels of one group into the E and H matrices.
Assembled distribute(const cplx *value, const double *error, double phi)
{
	Assembled a;
	for (int k = 0; k < kKernels; k++)
	{
		for (const Usage &u : usages(k))
		{
			const cplx pre = u.sign * order_prefactor(u.kappa, phi);
			const Mat3 M = matrix_of(u.mat);
			const Eigen::Matrix3d absM = M.cwiseAbs();
			if (k < 5)
			{
				a.E += pre * value[k] * M;
				a.eE += std::abs(pre) * error[k] * absM;
			}
			else
			{
				a.H += pre * value[k] * M;
				a.eH += std::abs(pre) * error[k] * absM;
			}
		}
	}
	return a;
}

struct Geometry
{
	double rho, phi;
};

Geometry transverse(const Vec3 &r, const Vec3 &rp)
{
	const double dx = r[0] - rp[0], dy = r[1] - rp[1];
	const double rho = std::hypot(dx, dy);
	return {rho, rho > 0.0 ? std::atan2(dy, dx) : 0.0};
}

// Fill the nine physical-ready kernels (already multiplied by -2i times the spectral coefficient,
// including Z) for every branch, without the k_rho J_kappa factor.
class ReactionKernels
{
public:
	ReactionKernels(const LayerStack &stack, int ell, int src, double z, double zp, Formulation form)
		: stack_(stack), ell_(ell), src_(src), z_(z), zp_(zp), form_(form)
	{
	}

	void operator()(double krho, cplx *out) const
	{
		const PropagationFactor pf = propagation_factors(stack_, krho, ell_, src_, z_, zp_);
		const DensitySet phi = densities(stack_, JumpWeight::mu(stack_), krho, src_);
		const DensitySet psi = densities(stack_, JumpWeight::eps(stack_), krho, src_);
		const cplx kl = vertical_wavenumber(stack_, ell_, krho);
		const cplx kp = vertical_wavenumber(stack_, src_, krho);
		if (kp == 0.0)
			throw BranchPointError("quadrature node hit the source-layer branch point");
		const cplx mul = stack_.mu(ell_), mup = stack_.mu(src_), w = stack_.omega();
		const cplx gamma = mul / (mup * stack_.k(ell_) * stack_.k(ell_));
		const cplx ratio_mu = mul / mup;
		const double kr = krho, kr2 = kr * kr;

		std::array<AngularDensities, 4> ang;
		if (form_ != Formulation::TeTm)
			ang = angular_assembly(theta_matrices(stack_, krho, ell_, src_));

		for (int b = 0; b < 4; b++)
		{
			cplx *o = out + b * kKernels;
			if (!pf.active[b])
			{
				std::fill(o, o + kKernels, cplx(0.0));
				continue;
			}
			const cplx Z = pf.Z[b];
			const cplx ph = phi.sigma[ell_][b], ps = psi.sigma[ell_][b];
			const double t = target_sign(branch_target(b));
			const double s = source_sign(branch_source(b));

			// E kernels
			if (form_ == Formulation::TeTm)
			{
				const cplx c_uu = -gamma * ps * s * t * kp * kl;
				o[0] = (ph + c_uu) / kp * Z;
				o[1] = (ph - c_uu) / kp * Z;
				o[2] = -gamma * ps * t * kr * kl / kp * Z;
				o[3] = gamma * ps * s * kr * kp / kp * Z;
				o[4] = gamma * ps * kr2 / kp * Z;
			}
			else
			{
				const auto &sg = ang[b].sigma;
				o[0] = sg[0] * Z;
				o[1] = sg[2] * Z;
				o[2] = sg[1] * Z;
				o[3] = sg[3] * Z;
				o[4] = sg[4] * Z;
			}

			// H kernels
			if (form_ == Formulation::MatrixBasis)
			{
				const cplx B1 = -ph / (2.0 * w * kp);
				const cplx B1z = B1 * kI * t * kl;
				const cplx B2 = -ps / (2.0 * w * mup * kp);
				const cplx B3 = kI * s * ps / (2.0 * w * mup);
				const cplx X8 = (B1z - mul * B3) / kr2;
				const cplx m2i = -2.0 * kI * Z;
				o[5] = m2i * (X8 * kr2 / 2.0 - B1z) / mul;
				o[6] = m2i * kI * kr2 * X8 / mul;
				o[7] = m2i * (-kr * B1 / mul);
				o[8] = m2i * kr * B2;
			}
			else
			{
				const cplx a = kI * t * kl * ph;
				const cplx bb = ratio_mu * kI * kp * s * ps;
				const cplx pre = -kI / (w * mul * kp) * Z;
				o[5] = pre * (a - bb) / 2.0;
				o[6] = pre * (-kI) * (a + bb);
				o[7] = pre * kr * ph;
				o[8] = pre * (-ratio_mu * kr * ps);
			}
		}
	}

private:
	const LayerStack &stack_;
	int ell_, src_;
	double z_, zp_;
	Formulation form_;
};

} // namespace

PhysicalSample physical_dyadics(const LayerStack &stack, const Vec3 &r, const Vec3 &rp, const QuadratureSpec &spec,
	Formulation form)
{
	PhysicalSample out;
	out.ell = layer_of(stack, r[2]);
	out.src = layer_of(stack, rp[2]);
	const int ell = out.ell, src = out.src;

	if (ell == src)
	{
		const FreeSpaceContext ctx{stack.k(src), stack.mu(src), stack.omega()};
		out.free_E = dyadic_e_free(r, rp, ctx);
		out.free_H = dyadic_h_free(r, rp, ctx);
	}

	const PropagationFactor pf0 = propagation_factors(stack, 0.0, ell, src, r[2], rp[2]);
	double depth = std::numeric_limits<double>::infinity();
	bool any = false;
	for (int b = 0; b < 4; b++)
		if (pf0.active[b])
		{
			any = true;
			depth = std::min(depth, pf0.depth(b));
		}

	if (any)
	{
		const Geometry g = transverse(r, rp);
		KernelInfo info{depth, {}};
		for (int l = 0; l <= stack.L(); l++)
			info.wavenumbers.push_back(stack.k(l));
		const double K = krho_cutoff(info, spec);

		const ReactionKernels kernels(stack, ell, src, r[2], rp[2], form);
		const int n = 4 * kKernels;
		auto f = [&](double x, cplx *o) {
			kernels(x, o);
			double jn[3];
			for (int m = 0; m < 3; m++)
				jn[m] = x * bessel_j(m, x * g.rho);
			for (int i = 0; i < n; i++)
				o[i] *= jn[kOrder[i % kKernels]];
		};

		QuadratureResult q;
		try
		{
			q = integrate_adaptive(f, n, K, branch_breaks(info.wavenumbers), panel_width(g.rho), spec);
		}
		catch (const AccuracyError &e)
		{
			throw AccuracyError(std::string("physical dyadic: ") + e.what(), e.partial, e.estimate);
		}

		std::vector<cplx> tail_vals(n);
		f(K, tail_vals.data());
		const double tail = tail_estimate(tail_vals.data(), n, depth);
		double scale = 0.0;
		for (const auto &v : q.value)
			scale = std::max(scale, std::abs(v));
		if (spec.max_krho > 0.0 && tail > std::max(spec.abs_tol, spec.rel_tol * scale))
			throw AccuracyError("max_krho truncates a non-negligible tail", q.value, q.error);
		for (auto &e : q.error)
			e += tail;

		for (int b = 0; b < 4; b++)
		{
			const Assembled a = distribute(q.value.data() + b * kKernels, q.error.data() + b * kKernels, g.phi);
			out.reaction_E[b] = a.E;
			out.reaction_H[b] = a.H;
			out.error_E += a.eE;
			out.error_H += a.eH;
		}
		out.cutoff = K;
		out.panels = q.panels;
	}

	out.G_E = out.free_E;
	out.G_H = out.free_H;
	for (int b = 0; b < 4; b++)
	{
		out.G_E += out.reaction_E[b];
		out.G_H += out.reaction_H[b];
	}
	return out;
}

FreeQuadrature free_dyadics_by_quadrature(const FreeSpaceContext &ctx, const Vec3 &r, const Vec3 &rp,
	const QuadratureSpec &spec)
{
	const double dz = r[2] - rp[2];
	if (dz == 0.0)
		throw AccuracyError("free-space Hankel reconstruction needs a nonzero vertical offset");
	const Geometry g = transverse(r, rp);
	const double adz = std::abs(dz), sgn = dz > 0.0 ? 1.0 : -1.0;
	const cplx k = ctx.k, k2 = k * k;
	const cplx iwmu = kI * ctx.omega * ctx.mu;

	auto f = [&](double x, cplx *o) {
		const cplx kz = vertical_wavenumber(k, x);
		if (kz == 0.0)
			throw BranchPointError("quadrature node hit the branch point k_rho = k");
		const cplx e = std::exp(kI * kz * adz);
		const cplx gh = kI * e / (2.0 * kz);
		const cplx gz = -sgn * e / 2.0;
		const cplx m2i = -2.0 * kI;
		o[0] = m2i * (kz * kz + k2) * gh / k2;
		o[1] = m2i * x * x * gh / k2;
		o[2] = m2i * kI * x * gz / k2;
		o[3] = o[2];
		o[4] = m2i * x * x * gh / k2;
		o[5] = m2i * gz / iwmu;
		o[6] = 0.0;
		o[7] = m2i * x * gh / iwmu;
		o[8] = -o[7];
		double jn[3];
		for (int m = 0; m < 3; m++)
			jn[m] = x * bessel_j(m, x * g.rho);
		for (int i = 0; i < kKernels; i++)
			o[i] *= jn[kOrder[i]];
	};

	const KernelInfo info{adz, {k}};
	const double K = krho_cutoff(info, spec);
	QuadratureResult q = integrate_adaptive(f, kKernels, K, branch_breaks(info.wavenumbers), panel_width(g.rho), spec);
	std::vector<cplx> tail_vals(kKernels);
	f(K, tail_vals.data());
	const double tail = tail_estimate(tail_vals.data(), kKernels, adz);
	for (auto &e : q.error)
		e += tail;

	const Assembled a = distribute(q.value.data(), q.error.data(), g.phi);
	return {a.E, a.H, a.eE, a.eH};
}

} // namespace stratum
