// Free energy, energy at temperature T, energy at T = 0 and the four treatments
// of the zero-frequency Matsubara term.
#pragma once

#include "casimir/core.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/reflection.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace casimir {

/// Zero-frequency treatments: (a) Drude substituted directly, (b) modified
/// perpendicular term, (c) ideal-metal prescription, (d) plasma model.
enum class Prescription { A_DrudeDirect, B_Modified, C_IdealPrescription, D_Plasma };

inline const char* to_string(Prescription p)
{
    switch (p) {
    case Prescription::A_DrudeDirect: return "a";
    case Prescription::B_Modified: return "b";
    case Prescription::C_IdealPrescription: return "c";
    case Prescription::D_Plasma: return "d";
    }
    return "?";
}

inline Prescription parse_prescription(const std::string& s)
{
    if (s == "a" || s == "A") return Prescription::A_DrudeDirect;
    if (s == "b" || s == "B") return Prescription::B_Modified;
    if (s == "c" || s == "C") return Prescription::C_IdealPrescription;
    if (s == "d" || s == "D") return Prescription::D_Plasma;
    throw std::invalid_argument("unknown prescription '" + s + "' (expected a, b, c or d)");
}

/// Model a prescription is defined for: (d) is the plasma model, the others Drude.
inline Model model_for(Prescription p)
{
    return p == Prescription::D_Plasma ? Model::Plasma : Model::Drude;
}

inline void check_compatible(Model model, Prescription p, const ThermalState& s)
{
    switch (model) {
    case Model::Plasma:
        if (p != Prescription::D_Plasma)
            throw std::invalid_argument("plasma model is only paired with prescription d");
        if (s.gamma_tilde > 0.0)
            throw std::invalid_argument("plasma model does not accept a relaxation parameter");
        return;
    case Model::Drude:
        if (p == Prescription::D_Plasma)
            throw std::invalid_argument("prescription d requires the plasma model");
        return;
    case Model::Ideal:
        if (p != Prescription::C_IdealPrescription && p != Prescription::D_Plasma)
            throw std::invalid_argument("ideal metal takes prescription c or d");
        return;
    }
}

/// Separation below which the Drude permittivity is not trusted (m).
inline constexpr double drude_min_separation = 0.4e-6;

inline std::optional<std::string> validity_warning(Model model, double a)
{
    if (model == Model::Drude && a < drude_min_separation)
        return "Drude model evaluated at a = " + std::to_string(a * 1e6) +
               " um < 0.4 um, where its permittivity is not realistic";
    return std::nullopt;
}

struct ZeroFrequencyTerm {
    double f0 = 0.0;     // dimensionless, enters as kB T/(16 pi a^2) f0
    double df0_dT = 0.0; // 1/K
    long evals = 0;
};

/// Free energy, energy or similar Matsubara-summed quantity, with breakdown.
struct LifshitzResult {
    double value = 0.0;          // J/m^2
    double zero_frequency = 0.0; // J/m^2, l = 0 part
    double matsubara = 0.0;      // J/m^2, l >= 1 part
    ConvergenceReport report;
    std::vector<std::string> warnings;
};

namespace detail {

// ln(1 - e^{-y}) without cancellation at either end
inline double log_one_minus_exp(double y)
{
    return y > 0.6931471805599453 ? std::log1p(-std::exp(-y)) : std::log(-std::expm1(-y));
}

// Perpendicular Drude coefficient on the diagonal xi = y, with d r / d gamma.
struct DiagonalPerp {
    Reflection r;
    double dr_dgamma;
};

inline DiagonalPerp drude_perp_diagonal(double y, const ThermalState& s)
{
    const double wp2 = s.omega_p_tilde * s.omega_p_tilde;
    const double chi = wp2 / (y * (y + s.gamma_tilde));
    const double root = std::sqrt(1.0 + chi);
    const double den = (1.0 + root) * (1.0 + root);
    DiagonalPerp out;
    // (1 - root)/(1 + root) = -chi / (1 + root)^2
    out.r.r = -chi / den;
    out.r.one_minus_r2 = 4.0 * root / den;
    const double dr_deps = -1.0 / (root * den);
    const double deps_dgamma = -wp2 / (y * (y + s.gamma_tilde) * (y + s.gamma_tilde));
    out.dr_dgamma = dr_deps * deps_dgamma;
    return out;
}

inline double prefactor_sum(const ThermalState& s)
{
    return K::kB * s.T / (16.0 * pi * s.a * s.a);
}

// y [ln Delta_par + ln Delta_perp] at xi > 0
inline double log_delta_pair(double xi, double y, const ThermalState& s, Model model)
{
    if (model == Model::Ideal)
        return 2.0 * log_one_minus_exp(y);
    const auto par = reflection(Polarization::Parallel, xi, y, s, model);
    const auto perp = reflection(Polarization::Perpendicular, xi, y, s, model);
    return log_delta(par, y) + log_delta(perp, y);
}

inline void require_positive_T(const ThermalState& s)
{
    if (!(s.T > 0.0))
        throw std::invalid_argument("finite-temperature evaluators need T > 0");
}

} // namespace detail

/**
 * Zero-frequency contribution f0 and its temperature derivative.
 *   (a) -zeta(3): parallel modes only, perpendicular Drude coefficient vanishes.
 *   (b) -zeta(3) + int y ln[1 - r_perp^2(y, y) e^{-y}] dy with the Drude
 *       permittivity on the diagonal xi = y; depends on T through gamma(T).
 *   (c) -2 zeta(3), both modes reflect perfectly.
 *   (d) plasma model in the unmodified formula.
 * The closed-form constants are recomputed by quadrature, not hard-coded.
 */
inline ZeroFrequencyTerm zero_frequency_term(Prescription p, const ThermalState& s, Model model,
                                             const ConvergenceSpec& spec = {})
{
    check_compatible(model, p, s);
    ZeroFrequencyTerm out;
    auto parallel = integrate_y([](double y) { return y * detail::log_one_minus_exp(y); }, 0.0,
                                spec);
    out.evals += parallel.evals;

    if (model == Model::Ideal) {
        out.f0 = 2.0 * parallel.value;
        return out;
    }
    switch (p) {
    case Prescription::A_DrudeDirect:
        out.f0 = parallel.value;
        break;
    case Prescription::C_IdealPrescription:
        out.f0 = 2.0 * parallel.value;
        break;
    case Prescription::D_Plasma: {
        auto perp = integrate_y(
            [&](double y) { return y * log_delta(r_perp_plasma_full(y, s.omega_p_tilde), y); },
            0.0, spec);
        out.f0 = parallel.value + perp.value;
        out.evals += perp.evals;
        break;
    }
    case Prescription::B_Modified: {
        auto perp = integrate_y(
            [&](double y) { return y * log_delta(detail::drude_perp_diagonal(y, s).r, y); }, 0.0,
            spec);
        out.f0 = parallel.value + perp.value;
        out.evals += perp.evals;
        if (s.T > 0.0 && s.nu != 0.0 && s.gamma_tilde > 0.0) {
            // d ln Delta / d gamma = -2 r (dr/dgamma) e^{-y} / Delta
            auto d = integrate_y(
                [&](double y) {
                    const auto dp = detail::drude_perp_diagonal(y, s);
                    const double delta = std::exp(log_delta(dp.r, y));
                    return -2.0 * y * dp.r.r * dp.dr_dgamma * std::exp(-y) / delta;
                },
                0.0, spec);
            out.evals += d.evals;
            // d gamma_tilde / dT = nu gamma_tilde / T
            out.df0_dT = d.value * s.nu * s.gamma_tilde / s.T;
        }
        break;
    }
    }
    return out;
}

inline ZeroFrequencyTerm zero_frequency_term(Prescription p, const ThermalState& s,
                                             const ConvergenceSpec& spec = {})
{
    return zero_frequency_term(p, s, model_for(p), spec);
}

/// Lifshitz free energy per unit area (J/m^2):
/// F = kB T/(16 pi a^2) [f0 + 2 sum_{l>=1} int_{xi_l}^inf y (ln Delta_par + ln Delta_perp) dy].
inline LifshitzResult free_energy(const ThermalState& s, Model model, Prescription p,
                                  const ConvergenceSpec& spec = {})
{
    spec.validate();
    detail::require_positive_T(s);
    check_compatible(model, p, s);

    LifshitzResult out;
    if (auto w = validity_warning(model, s.a))
        out.warnings.push_back(*w);
    const auto zf = zero_frequency_term(p, s, model, spec);
    long evals = zf.evals;
    const double pref = detail::prefactor_sum(s);

    // Terms are integrated to a fraction of rel_tol against the running sum.
    double running = 0.5 * zf.f0;
    auto term = [&](long l) {
        const double xi = matsubara_xi(s, l);
        auto r = integrate_y([&](double y) { return y * detail::log_delta_pair(xi, y, s, model); },
                             xi, spec, 0.05 * spec.rel_tol * std::abs(running));
        evals += r.evals;
        running += r.value;
        return r.value;
    };
    SumResult sum;
    try {
        sum = matsubara_sum(term, spec);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(e.what(), pref * (zf.f0 + 2.0 * e.partial()), e.report());
    }
    out.zero_frequency = pref * zf.f0;
    out.matsubara = pref * 2.0 * sum.value;
    out.value = out.zero_frequency + out.matsubara;
    out.report = sum.report;
    out.report.estimated_tail *= 2.0 * pref;
    out.report.integrand_evals = evals;
    return out;
}

inline LifshitzResult free_energy(const ThermalState& s, Prescription p,
                                  const ConvergenceSpec& spec = {})
{
    return free_energy(s, model_for(p), p, spec);
}

namespace detail {

// Energy from -T^2 d(F/T)/dT with the Matsubara frequencies and gamma(T)
// both varying:
//   E = -kB T^2/(16 pi a^2) df0/dT
//     + kB T/(8 pi a^2) sum_l { xi_l^2 [ln Delta_par + ln Delta_perp](xi_l, xi_l)
//       + 2 int y sum_pol r e^{-y}/Delta [xi_l dr/dxi + T (d gamma/dT) dr/dgamma] dy }
// gamma_rate is T d(gamma_tilde)/dT = nu gamma_tilde.
inline LifshitzResult energy_sum(const ThermalState& s, Model model, double gamma_rate,
                                 const ZeroFrequencyTerm& zf, const ConvergenceSpec& spec)
{
    spec.validate();
    require_positive_T(s);
    LifshitzResult out;
    if (auto w = validity_warning(model, s.a))
        out.warnings.push_back(*w);

    const double pref = prefactor_sum(s); // kB T/(16 pi a^2)
    long evals = zf.evals;
    double running = 0.0;

    auto term = [&](long l) {
        const double xi = matsubara_xi(s, l);
        const double boundary = xi * xi * log_delta_pair(xi, xi, s, model);
        if (model == Model::Ideal) {
            running += boundary;
            return boundary;
        }
        auto integrand = [&](double y) {
            double acc = 0.0;
            for (auto pol : {Polarization::Parallel, Polarization::Perpendicular}) {
                const auto r = reflection(pol, xi, y, s, model);
                const double e = std::exp(-y);
                const double delta = std::exp(log_delta(r, y));
                acc += r.r * e / delta * (xi * r.dr_dxi + gamma_rate * r.dr_dgamma);
            }
            return y * acc;
        };
        auto r = integrate_y(integrand, xi, spec, 0.02 * spec.rel_tol * std::abs(running));
        evals += r.evals;
        running += boundary + 2.0 * r.value;
        return boundary + 2.0 * r.value;
    };
    SumResult sum;
    const double e0 = -pref * s.T * zf.df0_dT;
    try {
        sum = matsubara_sum(term, spec);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(e.what(), e0 + 2.0 * pref * e.partial(), e.report());
    }
    out.zero_frequency = e0;
    out.matsubara = 2.0 * pref * sum.value;
    out.value = out.zero_frequency + out.matsubara;
    out.report = sum.report;
    out.report.estimated_tail *= 2.0 * pref;
    out.report.integrand_evals = evals;
    return out;
}

} // namespace detail

/// Energy at temperature T for the plasma model (or ideal metal); the
/// zero-frequency term is T-independent and drops out.
inline LifshitzResult energy_at_T_plasma(const ThermalState& s, const ConvergenceSpec& spec = {},
                                         Model model = Model::Plasma)
{
    if (model == Model::Drude)
        throw std::invalid_argument("energy_at_T_plasma takes the plasma or ideal model");
    check_compatible(model, Prescription::D_Plasma, s);
    return detail::energy_sum(s, model, 0.0, ZeroFrequencyTerm{}, spec);
}

/// Energy at temperature T for the Drude model with gamma(T) active; state.nu
/// supplies d ln gamma / d ln T.
inline LifshitzResult energy_at_T_drude(const ThermalState& s, Prescription p,
                                        const ConvergenceSpec& spec = {})
{
    check_compatible(Model::Drude, p, s);
    detail::require_positive_T(s);
    const auto zf = zero_frequency_term(p, s, Model::Drude, spec);
    return detail::energy_sum(s, Model::Drude, s.nu * s.gamma_tilde, zf, spec);
}

/// Drude energy at T computed as if gamma kept its current value (dgamma/dT = 0).
/// The zero-frequency term is then T-independent for every prescription.
inline LifshitzResult energy_frozen_gamma(const ThermalState& s, const ConvergenceSpec& spec = {})
{
    return detail::energy_sum(s, Model::Drude, 0.0, ZeroFrequencyTerm{}, spec);
}

/// Energy at temperature T for any supported (model, prescription) pair.
inline LifshitzResult energy_at_T(const ThermalState& s, Model model, Prescription p,
                                  const ConvergenceSpec& spec = {})
{
    if (model == Model::Drude)
        return energy_at_T_drude(s, p, spec);
    check_compatible(model, p, s);
    return energy_at_T_plasma(s, spec, model);
}

/// Zero-temperature energy hbar c/(32 pi^2 a^3) int dxi int_xi y [ln Delta] dy,
/// with the permittivity evaluated at the state's gamma (for Drude this is the
/// hybrid quantity when gamma is taken at room temperature).
inline LifshitzResult energy_T0(const ThermalState& s, Model model,
                                const ConvergenceSpec& spec = {})
{
    spec.validate();
    LifshitzResult out;
    if (auto w = validity_warning(model, s.a))
        out.warnings.push_back(*w);
    if (model == Model::Plasma && s.gamma_tilde > 0.0)
        throw std::invalid_argument("plasma model does not accept a relaxation parameter");
    auto res = integrate_2d(
        [&](double xi, double y) { return y * detail::log_delta_pair(xi, y, s, model); }, spec);
    const double pref = K::hbar * K::c / (32.0 * pi * pi * s.a * s.a * s.a);
    out.value = pref * res.value;
    out.matsubara = out.value;
    out.report.integrand_evals = res.evals;
    out.report.estimated_tail = pref * res.error;
    return out;
}

} // namespace casimir
