// Physical constants, unit conversions and the dimensionless parameterization
// shared by every evaluator in the library.
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace casimir {

struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;             // J s
    static constexpr double c = 299792458.0;                    // m / s
    static constexpr double kB = 1.380649e-23;                  // J / K
    static constexpr double elementary_charge = 1.602176634e-19; // C
};

using K = PhysicalConstants;

/// Angular frequency (rad/s) of a photon carrying 1 eV, i.e. e / hbar.
inline constexpr double ev_to_rad_s = K::elementary_charge / K::hbar;

inline constexpr double pi = std::numbers::pi;
inline constexpr double zeta3 = 1.2020569031595942854;
inline constexpr double zeta4 = pi * pi * pi * pi / 90.0;

/// Temperature at which kB T equals hbar c / (2a).
inline double effective_temperature(double a)
{
    if (!(a > 0.0))
        throw std::invalid_argument("separation must be positive");
    return K::hbar * K::c / (2.0 * a * K::kB);
}

/// Rescale an angular frequency (rad/s) to units of c / (2a).
inline double to_tilde(double omega, double a) { return 2.0 * a * omega / K::c; }
inline double from_tilde(double omega_tilde, double a) { return omega_tilde * K::c / (2.0 * a); }

/**
 * Plate separation and temperature together with the derived dimensionless
 * quantities. Frequencies are measured in units of c/(2a), so the Matsubara
 * frequencies become 2 pi l T / T_eff and the transverse variable is
 * y = 2a q_l with q_l = sqrt(xi_l^2/c^2 + k_perp^2).
 */
struct ThermalState {
    double a = 0.0;             // m
    double T = 0.0;             // K
    double omega_p_tilde = 0.0; // 2 a omega_p / c
    double gamma_tilde = 0.0;   // 2 a gamma(T) / c
    double nu = 0.0;            // d ln gamma / d ln T at T
    double T_eff = 0.0;         // K
    double t = std::numeric_limits<double>::infinity(); // T_eff / T

    double omega_p() const { return from_tilde(omega_p_tilde, a); }
    double gamma() const { return from_tilde(gamma_tilde, a); }
    /// lambda_p / (pi a) = 4 / omega_p_tilde
    double lambda_p_over_pi_a() const { return 4.0 / omega_p_tilde; }
    double gamma_over_omega_p() const { return gamma_tilde / omega_p_tilde; }
};

/// Build a state from physical inputs (SI units).
inline ThermalState make_state(double a, double T, double omega_p, double gamma = 0.0,
                               double nu = 0.0)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("separation must be positive and finite");
    if (!(T >= 0.0) || !std::isfinite(T))
        throw std::invalid_argument("temperature must be non-negative and finite");
    if (!(omega_p > 0.0))
        throw std::invalid_argument("plasma frequency must be positive");
    if (!(gamma >= 0.0))
        throw std::invalid_argument("relaxation parameter must be non-negative");

    ThermalState s;
    s.a = a;
    s.T = T;
    s.omega_p_tilde = to_tilde(omega_p, a);
    s.gamma_tilde = to_tilde(gamma, a);
    s.nu = nu;
    s.T_eff = effective_temperature(a);
    s.t = T > 0.0 ? s.T_eff / T : std::numeric_limits<double>::infinity();
    return s;
}

/// Dimensionless Matsubara frequency xi_l (units of c/(2a)).
inline double matsubara_xi(const ThermalState& state, long l)
{
    if (!(state.T > 0.0))
        throw std::invalid_argument("Matsubara frequencies need T > 0; use the T = 0 integral");
    if (l < 0)
        throw std::invalid_argument("Matsubara index must be non-negative");
    return 2.0 * pi * static_cast<double>(l) * state.T / state.T_eff;
}

} // namespace casimir
