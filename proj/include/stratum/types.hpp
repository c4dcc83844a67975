#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stratum {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Mat3 = Eigen::Matrix3cd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/*! \brief A 3x3 dyadic value with a marker for an unevaluated distributional term. */
struct DyadicSample
{
	Mat3 value = Mat3::Zero();
	bool has_delta = false;
};

// Up/down labels used for the four propagation branches. The index of a
// branch pair (target, source) is 2*target + source, i.e. the order is
// (up,up), (up,down), (down,up), (down,down).
enum class Dir { Up = 0, Down = 1 };

inline constexpr int branch_index(Dir target, Dir source)
{
	return 2 * static_cast<int>(target) + static_cast<int>(source);
}
inline constexpr Dir branch_target(int b) { return b < 2 ? Dir::Up : Dir::Down; }
inline constexpr Dir branch_source(int b) { return (b % 2) == 0 ? Dir::Up : Dir::Down; }


// ---- error hierarchy ----

class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/*! \brief Invalid input configuration. index is the offending layer/interface, or -1. */
class ConfigError : public Error
{
public:
	ConfigError(const std::string &msg, int index = -1) : Error(msg), index(index) {}
	int index;
};

/*! \brief Evaluation outside an operation's domain (e.g. coincident points). */
class DomainError : public Error
{
public:
	using Error::Error;
};

/*! \brief Vertical wavenumber vanishes where a formula divides by it. */
class BranchPointError : public Error
{
public:
	using Error::Error;
};

/*! \brief k_rho = 0, where the (u,v) frame is undefined. */
class DegenerateDirectionError : public Error
{
public:
	using Error::Error;
};

/*! \brief A recursion or linear-system denominator vanished. */
class PoleError : public Error
{
public:
	using Error::Error;
};

/*! \brief Quadrature failed to converge; carries the partial result and error estimate. */
class AccuracyError : public Error
{
public:
	AccuracyError(const std::string &msg, std::vector<cplx> partial = {}, std::vector<double> estimate = {})
		: Error(msg), partial(std::move(partial)), estimate(std::move(estimate)) {}
	std::vector<cplx> partial;
	std::vector<double> estimate;
};

} // namespace stratum
