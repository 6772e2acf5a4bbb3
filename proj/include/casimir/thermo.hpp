// Entropy (finite-difference, analytic and perturbative), Legendre-identity
// checks and the Nernst-theorem audit of the zero-frequency prescriptions.
#pragma once

#include "casimir/asymptotics.hpp"
#include "casimir/core.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace casimir {

/// Plates of a given material under a (model, prescription, relaxation law) choice.
struct PlateSystem {
    Material material = Material::aluminium();
    RelaxationLaw law = RelaxationLaw::linear_above_quarter_debye();
    Model model = Model::Drude;
    Prescription prescription = Prescription::A_DrudeDirect;

    static PlateSystem plasma(const Material& m)
    {
        return {m, default_law(m), Model::Plasma, Prescription::D_Plasma};
    }
    static PlateSystem drude(const Material& m, Prescription p)
    {
        return {m, default_law(m), Model::Drude, p};
    }
    static PlateSystem ideal(const Material& m = Material::aluminium())
    {
        return {m, default_law(m), Model::Ideal, Prescription::C_IdealPrescription};
    }

    /// State at (a, T); gamma and nu only for the Drude model.
    ThermalState state(double a, double T) const
    {
        if (model == Model::Drude)
            return to_dimensionless(a, T, material, law);
        material.validate();
        return make_state(a, T, material.omega_p);
    }

    /// State used for E(a, 0): for Drude, gamma is held at its reference-temperature
    /// value (the hybrid zero-temperature quantity).
    ThermalState zero_temperature_state(double a) const
    {
        if (model != Model::Drude)
            return state(a, 0.0);
        auto s = to_dimensionless(a, material.T_ref, material, law);
        s.T = 0.0;
        s.t = std::numeric_limits<double>::infinity();
        s.nu = 0.0;
        return s;
    }
};

inline LifshitzResult free_energy(const PlateSystem& sys, double a, double T,
                                  const ConvergenceSpec& spec = {})
{
    return free_energy(sys.state(a, T), sys.model, sys.prescription, spec);
}

inline LifshitzResult energy(const PlateSystem& sys, double a, double T,
                             const ConvergenceSpec& spec = {})
{
    return energy_at_T(sys.state(a, T), sys.model, sys.prescription, spec);
}

inline LifshitzResult energy_zero_T(const PlateSystem& sys, double a,
                                    const ConvergenceSpec& spec = {})
{
    return energy_T0(sys.zero_temperature_state(a), sys.model, spec);
}

/// Natural entropy scale kB zeta(3) / (16 pi a^2).
inline double entropy_scale(double a)
{
    return K::kB * zeta3 / (16.0 * pi * a * a);
}

enum class EntropyMethod { AnalyticDerivative, FiniteDifference, Perturbative };

inline const char* to_string(EntropyMethod m)
{
    switch (m) {
    case EntropyMethod::AnalyticDerivative: return "analytic";
    case EntropyMethod::FiniteDifference: return "finite-difference";
    case EntropyMethod::Perturbative: return "perturbative";
    }
    return "?";
}

struct EntropyResult {
    double S = 0.0; // J/(K m^2)
    EntropyMethod method = EntropyMethod::FiniteDifference;
    double T = 0.0;
    Prescription prescription = Prescription::D_Plasma;
    double error = 0.0;      // estimate of |S - S_true|
    double S_identity = 0.0; // (E - F)/T, for the finite-difference method
    bool valid = true;
};

/// S = (E - F)/T from the analytic energy.
inline EntropyResult entropy_analytic(const PlateSystem& sys, double a, double T,
                                      const ConvergenceSpec& spec = {})
{
    if (!(T > 0.0))
        throw std::invalid_argument("entropy needs T > 0");
    const auto F = free_energy(sys, a, T, spec);
    const auto E = energy(sys, a, T, spec);
    EntropyResult out;
    out.method = EntropyMethod::AnalyticDerivative;
    out.T = T;
    out.prescription = sys.prescription;
    out.S = (E.value - F.value) / T;
    out.S_identity = out.S;
    out.error = spec.rel_tol * (std::abs(E.value) + std::abs(F.value)) / T;
    return out;
}

/**
 * S = -dF/dT by central differences at steps h and h/2 combined by Richardson
 * extrapolation. Default h = max(0.25 K, 1e-3 T), shrunk to T/4 near T = 0.
 */
inline EntropyResult entropy_exact(const PlateSystem& sys, double a, double T,
                                   const ConvergenceSpec& spec = {}, double step = 0.0)
{
    if (!(T > 0.0))
        throw std::invalid_argument("entropy needs T > 0");
    double h = step > 0.0 ? step : std::max(0.25, 1e-3 * T);
    h = std::min(h, 0.25 * T);
    auto F = [&](double temp) { return free_energy(sys, a, temp, spec).value; };
    const double f_hp = F(T + h), f_hm = F(T - h);
    const double f_qp = F(T + 0.5 * h), f_qm = F(T - 0.5 * h);
    const double d1 = (f_hp - f_hm) / (2.0 * h);
    const double d2 = (f_qp - f_qm) / h;
    EntropyResult out;
    out.method = EntropyMethod::FiniteDifference;
    out.T = T;
    out.prescription = sys.prescription;
    out.S = -(4.0 * d2 - d1) / 3.0;
    out.error = std::abs(d2 - d1) / 3.0;

    const auto Fv = free_energy(sys, a, T, spec);
    const auto Ev = energy(sys, a, T, spec);
    out.S_identity = (Ev.value - Fv.value) / T;

    const double noise = 10.0 * spec.rel_tol * std::abs(Fv.value) / h;
    const double allowed = std::max({1e-2 * std::abs(out.S), 1e-6 * entropy_scale(a), noise});
    if (!std::isfinite(out.S) || out.error > allowed)
        throw ConvergenceError("entropy finite difference did not settle: step estimate " +
                                   std::to_string(out.error),
                               out.S);
    return out;
}

/**
 * Perturbative entropy: derivative of the small-separation plasma series plus
 * the zero-frequency closed forms and the first-order gamma/omega_p sum with
 * (nu + 2) and nu weights.
 */
inline EntropyResult entropy_perturbative(const PlateSystem& sys, double a, double T)
{
    if (!(T > 0.0))
        throw std::invalid_argument("entropy needs T > 0");
    const auto s = sys.state(a, T);
    const auto in = ExpansionInput::from(s);
    EntropyResult out;
    out.method = EntropyMethod::Perturbative;
    out.T = T;
    out.prescription = sys.prescription;

    if (sys.model == Model::Ideal) {
        const auto ser = detail::plasma_series(in.t, 0.0);
        out.S = -detail::plasma_series_scale(s) * ser.XGp / T;
        return out;
    }
    auto plasma_state = s;
    plasma_state.gamma_tilde = 0.0;
    const auto Spl = plasma_entropy_series(plasma_state);
    out.S = Spl.value;
    out.valid = Spl.valid;
    if (sys.model == Model::Plasma || sys.prescription == Prescription::D_Plasma)
        return out;

    out.S += zero_frequency_entropy(s, sys.prescription);
    out.S += in.gamma_over_omega_p * K::kB / (4.0 * pi * a * a) *
             detail::gamma_correction_sum(s, 2.0, -(s.nu + 2.0), -s.nu);
    out.valid = out.valid && in.small_gamma_ok();
    return out;
}

enum class AsymptoticBranch { LowT, HighT };

/// Closed-form plasma (or ideal-metal) entropy in the low- or high-temperature limit.
inline EntropyResult entropy_plasma_asymptotic(const ThermalState& s, AsymptoticBranch branch,
                                               Model model = Model::Plasma)
{
    const double p = model == Model::Ideal ? 0.0 : s.lambda_p_over_pi_a();
    const double tau = s.T / s.T_eff;
    const double base = K::kB * zeta3 / (8.0 * pi * s.a * s.a);
    EntropyResult out;
    out.method = EntropyMethod::Perturbative;
    out.T = s.T;
    out.prescription = Prescription::D_Plasma;
    if (branch == AsymptoticBranch::LowT) {
        const double c = pi * pi * pi / (135.0 * zeta3);
        out.S = 3.0 * base * tau * tau * (1.0 - 4.0 * c * tau + p * (1.0 - 8.0 * c * tau));
        out.valid = tau < low_T_limit;
    } else {
        out.S = base * (1.0 - p);
        out.valid = tau > high_T_limit;
    }
    return out;
}

enum class NernstOutcome { Pass, FailNegativeEntropy, FailNonzeroS0 };

inline const char* to_string(NernstOutcome v)
{
    switch (v) {
    case NernstOutcome::Pass: return "Pass";
    case NernstOutcome::FailNegativeEntropy: return "FailNegativeEntropy";
    case NernstOutcome::FailNonzeroS0: return "FailNonzeroS0";
    }
    return "?";
}

struct EntropySample {
    double T;
    double S;
};

struct NernstVerdict {
    Prescription prescription = Prescription::D_Plasma;
    double a = 0.0;
    double S_at_zero = 0.0;
    std::optional<std::pair<double, double>> negative_range; // longest run of S < 0 on the grid
    NernstOutcome verdict = NernstOutcome::Pass;
    std::vector<EntropySample> samples;
    double scale = 0.0;          // kB zeta(3) / (16 pi a^2)
    double zero_tolerance = 0.0; // 1e-3 * scale
};

struct AuditOptions {
    double zero_fraction = 1e-3;     // |S(a,0)| below this fraction of the scale counts as zero
    double negative_fraction = 1e-7; // S below -fraction * scale counts as negative
    unsigned workers = 0;            // 0: hardware concurrency
};

/// Log-spaced below 20 K, then evenly spaced up to T_max.
inline std::vector<double> default_audit_grid(double T_max = 300.0)
{
    std::vector<double> g = {1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 14.0, 20.0};
    for (double T = 30.0; T <= T_max + 1e-9; T += 15.0)
        g.push_back(T);
    return g;
}

/**
 * Evaluates S = (E - F)/T on the grid, extrapolates to T = 0 with the quadratic
 * through the three lowest temperatures, and classifies the prescription.
 */
inline NernstVerdict nernst_audit(const PlateSystem& sys, double a, const std::vector<double>& T_grid,
                                  const ConvergenceSpec& spec = {}, const AuditOptions& opt = {})
{
    if (T_grid.size() < 3)
        throw std::invalid_argument("audit grid needs at least three temperatures");
    if (!std::is_sorted(T_grid.begin(), T_grid.end()) ||
        std::adjacent_find(T_grid.begin(), T_grid.end()) != T_grid.end() || !(T_grid[0] > 0.0))
        throw std::invalid_argument("audit grid must be positive and strictly increasing");
    const double T_eff = effective_temperature(a);
    if (T_grid[2] > 0.05 * T_eff)
        throw std::invalid_argument("audit grid too coarse near T = 0: third point " +
                                    std::to_string(T_grid[2]) + " K exceeds 0.05 T_eff");

    NernstVerdict out;
    out.prescription = sys.prescription;
    out.a = a;
    out.scale = entropy_scale(a);
    out.zero_tolerance = opt.zero_fraction * out.scale;
    out.samples.resize(T_grid.size());
    parallel_for(T_grid.size(), opt.workers, [&](std::size_t i) {
        out.samples[i] = {T_grid[i], entropy_analytic(sys, a, T_grid[i], spec).S};
    });

    const auto& s = out.samples;
    double S0 = 0.0;
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j)
            if (j != i)
                w *= (0.0 - s[j].T) / (s[i].T - s[j].T);
        S0 += w * s[i].S;
    }
    out.S_at_zero = S0;

    const double neg = -opt.negative_fraction * out.scale;
    std::size_t best_len = 0, run_start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        const bool negative = i < s.size() && s[i].S < neg;
        if (negative && (i == 0 || !(s[i - 1].S < neg)))
            run_start = i;
        if (!negative && i > 0 && s[i - 1].S < neg) {
            const std::size_t len = i - run_start;
            if (len > best_len) {
                best_len = len;
                out.negative_range = std::make_pair(s[run_start].T, s[i - 1].T);
            }
        }
    }
    if (out.negative_range)
        out.verdict = NernstOutcome::FailNegativeEntropy;
    else if (std::abs(S0) > out.zero_tolerance)
        out.verdict = NernstOutcome::FailNonzeroS0;
    else
        out.verdict = NernstOutcome::Pass;
    return out;
}

/// Prescriptions the theorem is expected to accept.
inline bool expected_to_pass(Prescription p)
{
    return p == Prescription::B_Modified || p == Prescription::D_Plasma;
}

} // namespace casimir
