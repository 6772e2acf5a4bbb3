// Perturbative and asymptotic expansions of the free energy, energy and
// entropy: small-separation plasma series, low/high temperature limits, and
// first order corrections in gamma/omega_p for the Drude model.
#pragma once

#include "casimir/core.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/reflection.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace casimir {

/// A value together with a flag telling whether the expansion was used inside
/// its range of validity. Out-of-range values are returned, not suppressed.
struct Flagged {
    double value = 0.0;
    bool valid = true;
};

template <class T>
struct FlaggedPair {
    T free_energy;
    T energy;
    bool valid = true;
};

/// Expansion parameters at a given state.
struct ExpansionInput {
    double t = 0.0;                  // T_eff / T
    double alpha = 0.0;              // lambda_p / (4 pi a) = 1 / omega_p_tilde
    double lambda_p_over_pi_a = 0.0; // 4 / omega_p_tilde
    double gamma_over_omega_p = 0.0;
    double nu = 0.0;

    static ExpansionInput from(const ThermalState& s)
    {
        return {s.t, 1.0 / s.omega_p_tilde, s.lambda_p_over_pi_a(), s.gamma_over_omega_p(), s.nu};
    }

    /// a >= lambda_p, i.e. lambda_p/(pi a) <= 1/pi
    bool small_separation_ok() const { return lambda_p_over_pi_a <= 1.0 / pi * (1.0 + 1e-12); }
    bool small_gamma_ok() const { return gamma_over_omega_p <= 0.05; }
};

// Temperature-window thresholds for the plasma asymptotics, in units of T_eff.
// Deliberately conservative: the high-temperature forms are already good to 1%
// from T ~ 1.3 T_eff (a >= 5 um at 300 K).
inline constexpr double low_T_limit = 0.2;
inline constexpr double high_T_limit = 5.0;

/// int_x^inf dy / (e^y - 1) = -ln(1 - e^{-x})
inline double bose_tail0(double x)
{
    if (!(x > 0.0))
        throw std::invalid_argument("bose_tail0 needs x > 0");
    return -detail::log_one_minus_exp(x);
}

/// int_x^inf y^2 dy / (e^y - 1)
inline double bose_tail2(double x)
{
    if (!(x >= 0.0))
        throw std::invalid_argument("bose_tail2 needs x >= 0");
    if (x >= 1.0) {
        double sum = 0.0;
        for (int k = 1; k < 200; ++k) {
            const double kk = k;
            const double term =
                std::exp(-kk * x) * (x * x / kk + 2.0 * x / (kk * kk) + 2.0 / (kk * kk * kk));
            sum += term;
            if (term < 1e-18 * sum)
                break;
        }
        return sum;
    }
    // 2 zeta(3) - int_0^x y (y / (e^y - 1)) dy with y/(e^y - 1) = sum B_m y^m / m!
    static const auto coeff = [] {
        // c_m = B_m / m!, from sum_{j<=m} c_j / (m + 1 - j)! = 0 for m >= 1
        std::array<double, 40> c{};
        c[0] = 1.0;
        for (int m = 1; m < 40; ++m) {
            double acc = 0.0, fact = 1.0;
            for (int j = m - 1; j >= 0; --j) {
                fact *= static_cast<double>(m + 1 - j);
                acc += c[j] / fact;
            }
            c[m] = -acc;
        }
        return c;
    }();
    double head = 0.0, xp = x * x;
    for (int m = 0; m < 40; ++m) {
        head += coeff[m] * xp / (m + 2.0);
        xp *= x;
    }
    return 2.0 * zeta3 - head;
}

namespace detail {

struct PlasmaSeries {
    double G = 0.0;   // sum_l g(l t)
    double XGp = 0.0; // sum_l x g'(x) at x = l t
};

// Summand of the small-separation plasma series and x g'(x).
inline void plasma_summand(double x, double beta, double& g, double& xgp)
{
    const double px = pi * x;
    double c = 1.0, q = 0.0;
    if (px < 350.0) {
        const double e = std::exp(-2.0 * px);
        c = (1.0 + e) / (1.0 - e);
        q = 4.0 * e / ((1.0 - e) * (1.0 - e));
    }
    const double x2 = x * x, x3 = x2 * x, x4 = x2 * x2;
    const double p2 = pi * pi, p3 = p2 * pi, p4 = p2 * p2;
    g = pi / (2 * x3) * c - 1.0 / x4 + p2 / (2 * x2) * q +
        beta * (pi / x3 * c - 4.0 / x4 + p2 / x2 * q + 2 * p3 / x * c * q);
    // d(x g)/dx
    const double hp = -pi / x3 * c + 3.0 / x4 - p2 / x2 * q - p3 / x * q * c +
                      beta * (-2 * pi / x3 * c + 12.0 / x4 - 2 * p2 / x2 * q - 2 * p3 / x * q * c -
                              2 * p4 * q * (q + 2 * c * c));
    xgp = hp - g;
}

/// Sums over l of the bracket in the small-separation series; the power-law
/// remainder is added in closed form once the hyperbolic corrections vanish.
inline PlasmaSeries plasma_series(double t, double beta)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("plasma series needs 0 < T_eff/T < inf");
    PlasmaSeries out;
    double h3 = 0.0, h4 = 0.0;
    long l = 1;
    for (;; ++l) {
        const double x = l * t;
        double g, xgp;
        plasma_summand(x, beta, g, xgp);
        out.G += g;
        out.XGp += xgp;
        h3 += 1.0 / (double(l) * l * l);
        h4 += 1.0 / (double(l) * l * l * l);
        if (pi * x > 40.0)
            break;
    }
    const double z3 = (zeta3 - h3) / (t * t * t);
    const double z4 = (zeta4 - h4) / (t * t * t * t);
    out.G += (pi / 2) * z3 - z4 + beta * (pi * z3 - 4.0 * z4);
    out.XGp += (-pi * z3 + 3.0 * z4 + beta * (-2 * pi * z3 + 12.0 * z4)) - ((pi / 2) * z3 - z4 +
                                                                            beta * (pi * z3 - 4.0 * z4));
    return out;
}

inline double plasma_series_scale(const ThermalState& s)
{
    return K::hbar * K::c / (8.0 * pi * pi * s.a * s.a * s.a);
}

} // namespace detail

/// Small-separation plasma free energy: E^pl(a,0) minus the thermal series,
/// first order in lambda_p/(2 pi a). E0 is the exact zero-temperature plasma energy.
inline Flagged plasma_free_energy_series(const ThermalState& s, double E0)
{
    const auto in = ExpansionInput::from(s);
    const auto ser = detail::plasma_series(in.t, 2.0 * in.alpha);
    return {E0 - detail::plasma_series_scale(s) * ser.G, in.small_separation_ok()};
}

/// Energy implied by the small-separation series through E = -T^2 d(F/T)/dT.
inline Flagged plasma_energy_series(const ThermalState& s, double E0)
{
    const auto in = ExpansionInput::from(s);
    const auto ser = detail::plasma_series(in.t, 2.0 * in.alpha);
    return {E0 - detail::plasma_series_scale(s) * (ser.G + ser.XGp), in.small_separation_ok()};
}

/// Entropy -dF/dT of the small-separation series (J/(K m^2)).
inline Flagged plasma_entropy_series(const ThermalState& s)
{
    const auto in = ExpansionInput::from(s);
    const auto ser = detail::plasma_series(in.t, 2.0 * in.alpha);
    return {-detail::plasma_series_scale(s) * ser.XGp / s.T, in.small_separation_ok()};
}

/// Low-temperature (T << T_eff) plasma free energy and energy.
inline FlaggedPair<double> plasma_low_T(const ThermalState& s, double E0)
{
    const double tau = s.T / s.T_eff;
    const double p = s.lambda_p_over_pi_a();
    const double A = K::hbar * K::c * zeta3 / (16.0 * pi * s.a * s.a * s.a);
    const double b = pi * pi * pi / zeta3;
    const double tau3 = tau * tau * tau, tau4 = tau3 * tau;
    const double F = E0 - A * ((1 + p) * tau3 - b / 45.0 * (1 + 2 * p) * tau4);
    const double E = E0 + 2.0 * A * ((1 + p) * tau3 - b / 30.0 * (1 + 2 * p) * tau4);
    return {F, E, tau < low_T_limit && ExpansionInput::from(s).small_separation_ok()};
}

/// High-temperature (T >> T_eff) plasma free energy and the exponentially small energy.
/// The energy comes from the l = 1 term with 1 - r^2 ~ (lambda_p/(pi a)) y, which gives
/// the finite-conductivity factor 1 - (lambda_p/(pi a)) xi_1 with xi_1 = 2 pi T/T_eff.
inline FlaggedPair<double> plasma_high_T(const ThermalState& s)
{
    const double tau = s.T / s.T_eff;
    const double p = s.lambda_p_over_pi_a();
    const double a2 = s.a * s.a;
    const double F = -K::kB * s.T * zeta3 * (1.0 - p) / (8.0 * pi * a2);
    const double E = -K::kB * s.T * pi / a2 * tau * tau * (1.0 - 2.0 * pi * p * tau) *
                     std::exp(-2.0 * pi * tau);
    return {F, E, tau > high_T_limit};
}

/// int_0^inf y ln[1 - r_perp^2(y) e^{-y}] dy for the plasma model.
inline double plasma_perp_zero_integral(const ThermalState& s, const ConvergenceSpec& spec = {})
{
    return integrate_y(
               [&](double y) { return y * log_delta(r_perp_plasma_full(y, s.omega_p_tilde), y); },
               0.0, spec)
        .value;
}

namespace detail {

// Matsubara sum of w_a * xi^2/(e^xi - 1) + w_b * xi B0(xi) + w_c * B2(xi)/xi
inline double gamma_correction_sum(const ThermalState& s, double w_a, double w_b, double w_c)
{
    double sum = 0.0;
    for (long l = 1; l < 1000000; ++l) {
        const double xi = matsubara_xi(s, l);
        const double term = w_a * xi * xi / std::expm1(xi) + w_b * xi * bose_tail0(xi) +
                            w_c * bose_tail2(xi) / xi;
        sum += term;
        if (xi > 10.0 && std::abs(term) < 1e-17 * std::abs(sum))
            break;
    }
    return sum;
}

inline double zero_frequency_closed_form(Prescription p)
{
    switch (p) {
    case Prescription::A_DrudeDirect: return -zeta3;
    case Prescription::C_IdealPrescription: return -2.0 * zeta3;
    default: throw std::logic_error("no closed form for this prescription");
    }
}

} // namespace detail

/// Drude free energy to first order in gamma/omega_p on top of the plasma series.
/// E0_plasma is the exact zero-temperature plasma energy at this separation.
inline Flagged drude_free_energy_perturbative(const ThermalState& s, Prescription p,
                                              double E0_plasma, const ConvergenceSpec& spec = {})
{
    auto plasma_state = s;
    plasma_state.gamma_tilde = 0.0;
    const auto Fpl = plasma_free_energy_series(plasma_state, E0_plasma);
    const auto in = ExpansionInput::from(s);
    if (p == Prescription::D_Plasma)
        return Fpl;

    const double J = plasma_perp_zero_integral(s, spec);
    double f0;
    if (p == Prescription::B_Modified)
        f0 = zero_frequency_term(p, s, Model::Drude, spec).f0;
    else
        f0 = detail::zero_frequency_closed_form(p);
    const double a2 = s.a * s.a;
    const double bracket = K::kB * s.T / (16.0 * pi * a2) * (f0 + zeta3 - J);
    const double corr = in.gamma_over_omega_p * K::kB * s.T / (4.0 * pi * a2) *
                        detail::gamma_correction_sum(s, 0.0, 1.0, 1.0);
    return {Fpl.value + bracket + corr, Fpl.valid && in.small_gamma_ok()};
}

/// e0 for prescription (b): -pi kB T nu gamma / (48 a^2 omega_p); zero for (a), (c).
inline double zero_frequency_energy_perturbative(const ThermalState& s, Prescription p)
{
    if (p != Prescription::B_Modified)
        return 0.0;
    return -pi * K::kB * s.T * s.nu * s.gamma_over_omega_p() / (48.0 * s.a * s.a);
}

/// Drude energy at T to first order in gamma/omega_p, with nu = d ln gamma/d ln T.
inline Flagged drude_energy_perturbative(const ThermalState& s, Prescription p, double E0_plasma)
{
    auto plasma_state = s;
    plasma_state.gamma_tilde = 0.0;
    const auto Epl = plasma_energy_series(plasma_state, E0_plasma);
    if (p == Prescription::D_Plasma)
        return Epl;
    const auto in = ExpansionInput::from(s);
    const double nu = s.nu;
    const double corr = in.gamma_over_omega_p * K::kB * s.T / (4.0 * pi * s.a * s.a) *
                        detail::gamma_correction_sum(s, 2.0, -(nu + 1.0), -(nu - 1.0));
    return {Epl.value + zero_frequency_energy_perturbative(s, p) + corr,
            Epl.valid && in.small_gamma_ok()};
}

/// Zero-frequency entropy contributions S0 in closed form (expanded to second
/// order in lambda_p/(pi a) and first order in gamma/omega_p).
inline double zero_frequency_entropy(const ThermalState& s, Prescription p)
{
    const double a2 = s.a * s.a;
    const double q = s.lambda_p_over_pi_a();
    switch (p) {
    case Prescription::A_DrudeDirect:
        return -K::kB * zeta3 / (16.0 * pi * a2) * (1.0 - 2.0 * q + 3.0 * q * q);
    case Prescription::B_Modified:
        return -K::kB * pi / (48.0 * a2) * (s.nu + 1.0) * s.gamma_over_omega_p();
    case Prescription::C_IdealPrescription:
        return K::kB * zeta3 / (8.0 * pi * a2) * q * (1.0 - 1.5 * q);
    case Prescription::D_Plasma:
        return 0.0;
    }
    return 0.0;
}

} // namespace casimir
