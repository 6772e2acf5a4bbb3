// Reflection coefficients on the imaginary frequency axis, the Delta functions
// entering the Lifshitz formula, and derivatives of r with respect to xi and
// gamma (both dimensionless).
//
// Variables: xi is the Matsubara frequency in units of c/(2a) and
// y = 2a sqrt(k_perp^2 + xi^2/c^2) >= xi, so for real k_perp the physical
// wave vector is k_perp = sqrt(y^2 - xi^2) / (2a).
#pragma once

#include "casimir/core.hpp"
#include "casimir/dielectric.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace casimir {

enum class Polarization { Parallel, Perpendicular };

/// Reflection coefficient with 1 - r^2 kept separately so that Delta stays
/// accurate when r^2 -> 1 and y -> 0.
struct Reflection {
    double r = 0.0;
    double one_minus_r2 = 1.0;
    double dr_dxi = 0.0;
    double dr_dgamma = 0.0;

    double r2() const { return r * r; }
};

namespace detail {

// u = (eps - 1) xi^2 and its partial derivatives.
struct Susceptance {
    double u, du_dxi, du_dgamma;
};

inline Susceptance susceptance(Model model, double xi, const ThermalState& s)
{
    const double wp2 = s.omega_p_tilde * s.omega_p_tilde;
    if (model == Model::Plasma)
        return {wp2, 0.0, 0.0};
    const double d = xi + s.gamma_tilde;
    return {wp2 * xi / d, wp2 * s.gamma_tilde / (d * d), -wp2 * xi / (d * d)};
}

inline Reflection reflection_from_u(Polarization pol, double xi, double y, double u)
{
    Reflection out;
    const double s = std::sqrt(u + y * y);
    if (pol == Polarization::Perpendicular) {
        // (y - s)/(y + s) rewritten as -u/(y + s)^2
        const double den = (y + s) * (y + s);
        out.r = -u / den;
        out.one_minus_r2 = 4.0 * y * s / den;
    } else {
        const double chi = u / (xi * xi);
        const double eps = 1.0 + chi;
        const double den = (y * eps + s) * (y * eps + s);
        // y^2 eps^2 - s^2 = chi (y^2 (chi + 2) - xi^2)
        out.r = chi * (y * y * (chi + 2.0) - xi * xi) / den;
        out.one_minus_r2 = 4.0 * y * eps * s / den;
    }
    return out;
}

} // namespace detail

/// Reflection coefficient and its derivatives for xi > 0.
inline Reflection reflection(Polarization pol, double xi, double y, const ThermalState& state,
                             Model model)
{
    if (!(xi > 0.0))
        throw std::invalid_argument("reflection needs xi > 0");
    if (model == Model::Ideal)
        return {1.0, 0.0, 0.0, 0.0};

    const auto su = detail::susceptance(model, xi, state);
    Reflection out = detail::reflection_from_u(pol, xi, y, su.u);
    const double s = std::sqrt(su.u + y * y);

    const double chi = su.u / (xi * xi);
    const double eps = 1.0 + chi;
    const double deps_dxi = su.du_dxi / (xi * xi) - 2.0 * su.u / (xi * xi * xi);
    const double deps_dgamma = su.du_dgamma / (xi * xi);
    const double ds_dxi = su.du_dxi / (2.0 * s);
    const double ds_dgamma = su.du_dgamma / (2.0 * s);

    if (pol == Polarization::Perpendicular) {
        const double k = -2.0 * y / ((y + s) * (y + s));
        out.dr_dxi = k * ds_dxi;
        out.dr_dgamma = k * ds_dgamma;
    } else {
        const double k = 2.0 * y / ((y * eps + s) * (y * eps + s));
        out.dr_dxi = k * (deps_dxi * s - eps * ds_dxi);
        out.dr_dgamma = k * (deps_dgamma * s - eps * ds_dgamma);
    }
    return out;
}

/// r^2 for a given permittivity (Fresnel coefficients on the imaginary axis).
inline double r_squared(Polarization pol, double xi, double y, double eps)
{
    if (!(eps >= 1.0))
        throw std::invalid_argument("permittivity below 1 is outside the model class");
    if (!(xi > 0.0) || !(y >= xi))
        throw std::invalid_argument("r_squared needs 0 < xi <= y");
    if (std::isinf(eps))
        return 1.0;
    return detail::reflection_from_u(pol, xi, y, (eps - 1.0) * xi * xi).r2();
}

/// Perpendicular plasma coefficient; independent of xi.
inline double r_perp_plasma(double y, double omega_p_tilde)
{
    if (!(y > 0.0))
        throw std::invalid_argument("r_perp_plasma needs y > 0");
    const double s = std::sqrt(omega_p_tilde * omega_p_tilde + y * y);
    const double r = -omega_p_tilde * omega_p_tilde / ((y + s) * (y + s));
    return r * r;
}

/// Perpendicular plasma coefficient with 1 - r^2, valid down to y = 0.
inline Reflection r_perp_plasma_full(double y, double omega_p_tilde)
{
    const double s = std::sqrt(omega_p_tilde * omega_p_tilde + y * y);
    const double den = (y + s) * (y + s);
    Reflection out;
    out.r = -omega_p_tilde * omega_p_tilde / den;
    out.one_minus_r2 = 4.0 * y * s / den;
    return out;
}

/// (dr/dxi, dr/dgamma) at (xi, y).
inline std::pair<double, double> r_derivatives(Polarization pol, double xi, double y,
                                               const ThermalState& state, Model model)
{
    const auto r = reflection(pol, xi, y, state, model);
    return {r.dr_dxi, r.dr_dgamma};
}

struct SpectralPoint {
    double xi_tilde = 0.0;
    double y = 0.0;
    double r_par_sq = 0.0;
    double r_perp_sq = 0.0;
    double d_r_par_dxi = 0.0;
    double d_r_perp_dxi = 0.0;
    double d_r_par_dgamma = 0.0;
    double d_r_perp_dgamma = 0.0;
};

inline SpectralPoint make_spectral_point(double xi, double y, const ThermalState& state,
                                         Model model)
{
    if (!(y >= xi))
        throw std::invalid_argument("spectral point needs y >= xi");
    const auto par = reflection(Polarization::Parallel, xi, y, state, model);
    const auto perp = reflection(Polarization::Perpendicular, xi, y, state, model);
    return {xi, y, par.r2(), perp.r2(), par.dr_dxi, perp.dr_dxi, par.dr_dgamma, perp.dr_dgamma};
}

/// ln(1 - r^2 e^{-y}), accurate for r^2 -> 1 at small y.
inline double log_delta(const Reflection& r, double y)
{
    const double x = r.r2() * std::exp(-y);
    if (x < 0.5)
        return std::log1p(-x);
    return std::log(r.one_minus_r2 * std::exp(-y) - std::expm1(-y));
}

inline double delta(Polarization pol, const SpectralPoint& p)
{
    const double r2 = pol == Polarization::Parallel ? p.r_par_sq : p.r_perp_sq;
    if (!(r2 >= 0.0 && r2 <= 1.0) || !(p.y >= 0.0))
        throw std::invalid_argument("delta needs 0 <= r^2 <= 1 and y >= 0");
    return 1.0 - r2 * std::exp(-p.y);
}

} // namespace casimir
