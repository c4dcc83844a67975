#pragma once

#include <array>
#include <functional>
#include <vector>

#include "stratum/freespace.hpp"
#include "stratum/medium.hpp"

namespace stratum {

/*! \brief J_n(x) for integer n >= 0 (negative x handled by parity). */
double bessel_j(int n, double x);

/*! \brief Adaptive k_rho quadrature settings.
 *
 * max_krho = 0 selects the truncation point automatically from the vertical decay of the integrand.
 */
struct QuadratureSpec
{
	double rel_tol = 1e-8;
	double abs_tol = 1e-12;
	double max_krho = 0.0;
	int max_panels = 20000;
};

/*! \brief Fills out[0..n) with the integrand at x. */
using VectorIntegrand = std::function<void(double x, cplx *out)>;

struct QuadratureResult
{
	std::vector<cplx> value;
	std::vector<double> error;
	double cutoff = 0.0;
	int panels = 0;
};

/*! \brief Adaptive Gauss-Kronrod (7/15) integration of an n-vector over [0, upper].
 *
 * Initial panels are split at every breakpoint and are at most max_width wide (ignored when <= 0).
 * The panel with the largest error is bisected until every component's error is below
 * max(abs_tol, rel_tol * max|value|). Throws AccuracyError with the partial result when
 * max_panels is exhausted.
 */
QuadratureResult integrate_adaptive(const VectorIntegrand &f, int n, double upper, std::vector<double> breakpoints,
	double max_width, const QuadratureSpec &spec);

/*! \brief What the engine needs to know about a spectral kernel to bound its tail. */
struct KernelInfo
{
	/*! \brief Minimal vertical travel; the kernel decays like exp(-k_rho * depth). */
	double depth = 0.0;
	/*! \brief Layer wavenumbers: panel breaks at Re k and |k|, and the scale for the cutoff. */
	std::vector<cplx> wavenumbers;
};

/*! \brief Truncation point for a kernel with the given decay, honoring spec.max_krho when set. */
double krho_cutoff(const KernelInfo &info, const QuadratureSpec &spec);

struct BesselIntegralResult
{
	cplx value;
	double error = 0.0;
};

/*! \brief (i^{1+kappa} e^{i kappa phi} / (4 pi)) * int_0^inf k_rho J_kappa(k_rho rho) f(k_rho) dk_rho.
 *
 * kappa in -2..2; negative orders use J_{-n} = (-1)^n J_n.
 */
BesselIntegralResult bessel_integral(const std::function<cplx(double)> &kernel, int kappa, double rho, double phi,
	const KernelInfo &info, const QuadratureSpec &spec);

/*! \brief How the reaction integrands are assembled.
 *
 * Standard: E from the angular densities sigma_j, H from the TE/TM Theta_H densities.
 * TeTm: both from the TE/TM densities. MatrixBasis: both from the b-coefficient expansion.
 */
enum class Formulation { Standard, TeTm, MatrixBasis };

struct PhysicalSample
{
	int ell = 0;
	int src = 0;
	Mat3 G_E = Mat3::Zero();
	Mat3 G_H = Mat3::Zero();
	Mat3 free_E = Mat3::Zero();
	Mat3 free_H = Mat3::Zero();
	/*! \brief Reaction parts indexed by branch_index(target, source). */
	std::array<Mat3, 4> reaction_E{Mat3::Zero(), Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
	std::array<Mat3, 4> reaction_H{Mat3::Zero(), Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
	Eigen::Matrix3d error_E = Eigen::Matrix3d::Zero();
	Eigen::Matrix3d error_H = Eigen::Matrix3d::Zero();
	double cutoff = 0.0;
	int panels = 0;
};

PhysicalSample physical_dyadics(const LayerStack &stack, const Vec3 &r, const Vec3 &rp, const QuadratureSpec &spec,
	Formulation form = Formulation::Standard);

struct FreeQuadrature
{
	Mat3 E = Mat3::Zero();
	Mat3 H = Mat3::Zero();
	Eigen::Matrix3d error_E = Eigen::Matrix3d::Zero();
	Eigen::Matrix3d error_H = Eigen::Matrix3d::Zero();
};

/*! \brief Hankel-transform reconstruction of the free-space dyadics from their spectral forms (z != z'). */
FreeQuadrature free_dyadics_by_quadrature(const FreeSpaceContext &ctx, const Vec3 &r, const Vec3 &rp,
	const QuadratureSpec &spec);

} // namespace stratum
