// Permittivity models on the imaginary frequency axis and the temperature
// dependence of the Drude relaxation parameter.
#pragma once

#include "casimir/core.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace casimir {

enum class Model { Ideal, Plasma, Drude };

inline const char* to_string(Model m)
{
    switch (m) {
    case Model::Ideal: return "ideal";
    case Model::Plasma: return "plasma";
    case Model::Drude: return "drude";
    }
    return "?";
}

struct GammaSample {
    double T;     // K
    double gamma; // rad/s
};

/**
 * Tabulated gamma(T), interpolated by a monotone piecewise cubic (Fritsch-Butland
 * slopes, as in PCHIP) in (T, ln gamma). Positivity of gamma and monotonicity
 * of the samples carry over to the interpolant.
 */
class GammaTable {
public:
    struct Value {
        double gamma;
        double dlng_dT;
    };

    explicit GammaTable(std::vector<GammaSample> samples) : samples_(std::move(samples))
    {
        if (samples_.empty())
            throw std::invalid_argument("gamma table is empty");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            if (!(samples_[i].gamma > 0.0) || !std::isfinite(samples_[i].gamma))
                throw std::invalid_argument("gamma table values must be positive");
            if (!(samples_[i].T >= 0.0))
                throw std::invalid_argument("gamma table temperatures must be non-negative");
            if (i > 0 && !(samples_[i].T > samples_[i - 1].T))
                throw std::invalid_argument("gamma table must be strictly increasing in T");
        }
        build_slopes();
    }

    const std::vector<GammaSample>& samples() const { return samples_; }
    double t_min() const { return samples_.front().T; }
    double t_max() const { return samples_.back().T; }

    /// Interpolated gamma and d(ln gamma)/dT. Outside the table the caller
    /// decides whether extrapolation is allowed.
    Value evaluate(double T, bool extrapolate) const
    {
        const std::size_t n = samples_.size();
        if (n == 1) {
            if (T != samples_[0].T && !extrapolate)
                throw std::out_of_range("temperature outside gamma table");
            return {samples_[0].gamma, 0.0};
        }
        if (T < t_min() || T > t_max()) {
            if (!extrapolate)
                throw std::out_of_range("temperature " + std::to_string(T) +
                                        " K outside gamma table range");
            // Power law with the end-point logarithmic slope.
            const std::size_t k = T < t_min() ? 0 : n - 1;
            const double T0 = samples_[k].T;
            if (T0 <= 0.0)
                return {samples_[k].gamma, 0.0};
            const double slope = std::max(1.0, T0 * d_[k]);
            if (T <= 0.0)
                return {0.0, 0.0};
            return {samples_[k].gamma * std::pow(T / T0, slope), slope / T};
        }
        auto it = std::upper_bound(samples_.begin(), samples_.end(), T,
                                   [](double v, const GammaSample& s) { return v < s.T; });
        std::size_t k = static_cast<std::size_t>(std::distance(samples_.begin(), it));
        k = std::clamp<std::size_t>(k, 1, n - 1) - 1;
        const double h = samples_[k + 1].T - samples_[k].T;
        const double s = (T - samples_[k].T) / h;
        const double y0 = logs_[k], y1 = logs_[k + 1];
        const double m0 = d_[k] * h, m1 = d_[k + 1] * h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        const double value = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        const double dh00 = 6 * s2 - 6 * s, dh10 = 3 * s2 - 4 * s + 1;
        const double dh01 = -6 * s2 + 6 * s, dh11 = 3 * s2 - 2 * s;
        const double deriv = (dh00 * y0 + dh10 * m0 + dh01 * y1 + dh11 * m1) / h;
        return {std::exp(value), deriv};
    }

private:
    void build_slopes()
    {
        const std::size_t n = samples_.size();
        logs_.resize(n);
        d_.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            logs_[i] = std::log(samples_[i].gamma);
        if (n < 2)
            return;
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = samples_[i + 1].T - samples_[i].T;
            delta[i] = (logs_[i + 1] - logs_[i]) / h[i];
        }
        if (n == 2) {
            d_[0] = d_[1] = delta[0];
            return;
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (delta[k - 1] * delta[k] <= 0.0) {
                d_[k] = 0.0;
                continue;
            }
            const double w1 = 2 * h[k] + h[k - 1];
            const double w2 = h[k] + 2 * h[k - 1];
            d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
        d_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    // Three-point end slope with the shape-preserving corrections.
    static double edge_slope(double h0, double h1, double m0, double m1)
    {
        double d = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if (d * m0 <= 0.0)
            d = 0.0;
        else if (m0 * m1 <= 0.0 && std::abs(d) > std::abs(3 * m0))
            d = 3 * m0;
        return d;
    }

    std::vector<GammaSample> samples_;
    std::vector<double> logs_;
    std::vector<double> d_;
};

struct Material {
    std::string name = "custom";
    double omega_p = 0.0;   // rad/s
    double gamma_ref = 0.0; // rad/s at T_ref
    double T_ref = 300.0;   // K
    double debye_T = 0.0;   // K
    std::optional<GammaTable> gamma_table;

    void validate() const
    {
        if (!(omega_p > 0.0) || !std::isfinite(omega_p))
            throw std::invalid_argument("material: plasma frequency must be positive");
        if (!(gamma_ref >= 0.0) || !std::isfinite(gamma_ref))
            throw std::invalid_argument("material: relaxation parameter must be non-negative");
        if (!(T_ref > 0.0))
            throw std::invalid_argument("material: reference temperature must be positive");
        if (!(debye_T >= 0.0))
            throw std::invalid_argument("material: Debye temperature must be non-negative");
    }

    double plasma_wavelength() const { return 2.0 * pi * K::c / omega_p; }

    /// Aluminium: omega_p = 11.5 eV, gamma = 0.05 eV at 300 K, T_D = 428 K.
    static Material aluminium()
    {
        Material m;
        m.name = "Al";
        m.omega_p = 11.5 * ev_to_rad_s;
        m.gamma_ref = 0.05 * ev_to_rad_s;
        m.T_ref = 300.0;
        m.debye_T = 428.0;
        return m;
    }
};

class RelaxationLaw {
public:
    enum class Mode { TableInterpolated, LinearAboveQuarterDebye, Frozen };

    static RelaxationLaw table_interpolated(bool extrapolate = false)
    {
        RelaxationLaw l;
        l.mode_ = Mode::TableInterpolated;
        l.extrapolate_ = extrapolate;
        return l;
    }
    static RelaxationLaw linear_above_quarter_debye()
    {
        RelaxationLaw l;
        l.mode_ = Mode::LinearAboveQuarterDebye;
        return l;
    }
    static RelaxationLaw frozen(double gamma0)
    {
        if (!(gamma0 >= 0.0))
            throw std::invalid_argument("frozen relaxation parameter must be non-negative");
        RelaxationLaw l;
        l.mode_ = Mode::Frozen;
        l.frozen_gamma_ = gamma0;
        return l;
    }

    Mode mode() const { return mode_; }
    double frozen_gamma() const { return frozen_gamma_; }
    bool extrapolate() const { return extrapolate_; }

private:
    Mode mode_ = Mode::LinearAboveQuarterDebye;
    double frozen_gamma_ = 0.0;
    bool extrapolate_ = false;
};

inline const char* to_string(RelaxationLaw::Mode m)
{
    switch (m) {
    case RelaxationLaw::Mode::TableInterpolated: return "table";
    case RelaxationLaw::Mode::LinearAboveQuarterDebye: return "linear";
    case RelaxationLaw::Mode::Frozen: return "frozen";
    }
    return "?";
}

/// gamma(T) in rad/s together with nu = d ln gamma / d ln T.
struct Relaxation {
    double gamma;
    double nu;
};

namespace detail {

// Below T_q = T_D/4 the logarithmic slope rises smoothly from 1 to 5:
// nu(x) = 1 + 4 (1 - e^{kx})^2 with x = ln(T / T_q), so gamma ~ T^5 as T -> 0 and
// both gamma and nu are continuous at T_q. The steepness k = 6 / ln(J5(inf)/J5(4))
// makes the T^5 asymptote coincide with the Bloch-Grueneisen curve through gamma(T_q).
inline constexpr double rolloff_steepness = 4.1673645300755;

inline Relaxation quarter_debye_rolloff(double gamma_q, double T, double T_q)
{
    if (T <= 0.0)
        return {0.0, 5.0};
    const double k = rolloff_steepness;
    const double x = std::log(T / T_q);
    const double ex = std::exp(k * x);
    const double log_ratio =
        x + 4.0 * (x - 2.0 * std::expm1(k * x) / k + 0.5 * (ex * ex - 1.0) / k);
    const double nu = 1.0 + 4.0 * (1.0 - ex) * (1.0 - ex);
    return {gamma_q * std::exp(log_ratio), nu};
}

} // namespace detail

inline Relaxation gamma_at(const Material& material, const RelaxationLaw& law, double T)
{
    if (!(T >= 0.0) || !std::isfinite(T))
        throw std::invalid_argument("temperature must be non-negative");
    switch (law.mode()) {
    case RelaxationLaw::Mode::Frozen:
        return {law.frozen_gamma(), 0.0};
    case RelaxationLaw::Mode::LinearAboveQuarterDebye: {
        const double T_q = material.debye_T / 4.0;
        if (T >= T_q)
            return {material.gamma_ref * T / material.T_ref, 1.0};
        const double gamma_q = material.gamma_ref * T_q / material.T_ref;
        return detail::quarter_debye_rolloff(gamma_q, T, T_q);
    }
    case RelaxationLaw::Mode::TableInterpolated: {
        if (!material.gamma_table)
            throw std::invalid_argument("table relaxation law needs a gamma table");
        if (T <= 0.0 && material.gamma_table->t_min() > 0.0) {
            if (!law.extrapolate())
                throw std::out_of_range("temperature outside gamma table range");
            return {0.0, 0.0};
        }
        const auto v = material.gamma_table->evaluate(T, law.extrapolate());
        const double nu = T > 0.0 ? std::max(1.0, T * v.dlng_dT) : 1.0;
        return {v.gamma, nu};
    }
    }
    throw std::logic_error("unknown relaxation mode");
}

/// Sample table following the quarter-Debye law (log-spaced below T_D/4,
/// linear above). Stand-in for measured data.
inline std::vector<GammaSample> sample_gamma_table(const Material& material, double T_lo = 1.0,
                                                   double T_hi = 600.0, int n = 80)
{
    std::vector<GammaSample> out;
    const auto law = RelaxationLaw::linear_above_quarter_debye();
    for (int i = 0; i < n; ++i) {
        const double T = T_lo * std::pow(T_hi / T_lo, static_cast<double>(i) / (n - 1));
        out.push_back({T, gamma_at(material, law, T).gamma});
    }
    return out;
}

/// Default law: the material's table when it has one, the quarter-Debye law otherwise.
inline RelaxationLaw default_law(const Material& material)
{
    return material.gamma_table ? RelaxationLaw::table_interpolated(true)
                                : RelaxationLaw::linear_above_quarter_debye();
}

/// epsilon(i xi) - 1 for the given model; xi in units of c/(2a).
inline double susceptibility(Model model, double xi, const ThermalState& s)
{
    if (!(xi > 0.0))
        throw std::invalid_argument("permittivity needs xi > 0; the zero-frequency limit "
                                    "belongs to the prescription");
    switch (model) {
    case Model::Plasma: return s.omega_p_tilde * s.omega_p_tilde / (xi * xi);
    case Model::Drude: return s.omega_p_tilde * s.omega_p_tilde / (xi * (xi + s.gamma_tilde));
    case Model::Ideal: return std::numeric_limits<double>::infinity();
    }
    throw std::logic_error("unknown model");
}

inline double eps_plasma(double xi, const ThermalState& s)
{
    return 1.0 + susceptibility(Model::Plasma, xi, s);
}

inline double eps_drude(double xi, const ThermalState& s)
{
    return 1.0 + susceptibility(Model::Drude, xi, s);
}

/// Dimensionless state at (a, T); gamma is taken from the relaxation law.
inline ThermalState to_dimensionless(double a, double T, const Material& material,
                                     const RelaxationLaw& law)
{
    material.validate();
    if (!(a > 0.0))
        throw std::invalid_argument("separation must be positive");
    if (!(T >= 0.0))
        throw std::invalid_argument("temperature must be non-negative");
    const auto rel = gamma_at(material, law, T);
    return make_state(a, T, material.omega_p, rel.gamma, rel.nu);
}

inline ThermalState to_dimensionless(double a, double T, const Material& material)
{
    return to_dimensionless(a, T, material, default_law(material));
}

} // namespace casimir
