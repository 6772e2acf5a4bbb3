// Convergence-controlled integration over y, the iterated (xi, y) integral of
// the zero-temperature energy, and truncated Matsubara summation.
//
// All Lifshitz integrands carry a factor e^{-y}, so semi-infinite ranges are
// cut at lower + y_cutoff_margin instead of being mapped onto a finite one.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace casimir {

struct ConvergenceSpec {
    double rel_tol = 1e-10;
    double abs_floor = 1e-30;
    long max_matsubara = 100000;
    double y_cutoff_margin = 45.0;
    int max_panels = 4000;

    void validate() const
    {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-4))
            throw std::invalid_argument("rel_tol must lie in (0, 1e-4]");
        if (!(abs_floor >= 0.0))
            throw std::invalid_argument("abs_floor must be non-negative");
        if (max_matsubara < 1)
            throw std::invalid_argument("max_matsubara must be positive");
        if (!(y_cutoff_margin >= 30.0))
            throw std::invalid_argument("y_cutoff_margin must be at least 30");
        if (max_panels < 1)
            throw std::invalid_argument("max_panels must be positive");
    }
};

struct ConvergenceReport {
    long terms_used = 0;
    double estimated_tail = 0.0;
    long integrand_evals = 0;
};

/// Thrown when a tolerance cannot be met within the allotted budget. Carries
/// whatever partial value was reached.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial, ConvergenceReport report = {})
        : std::runtime_error(what), partial_(partial), report_(report)
    {
    }
    double partial() const { return partial_; }
    const ConvergenceReport& report() const { return report_; }

private:
    double partial_;
    ConvergenceReport report_;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi, value, error, abs_value;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_15(const F& f, double lo, double hi)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        resk += kWgk[j] * (f1[j] + f2[j]);
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1)
            resg += kWg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double value = resk * half;
    resasc *= std::abs(half);
    resabs *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);
    return {lo, hi, value, err, resabs};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [lo, hi].
template <class F>
QuadratureResult integrate_interval(const F& f, double lo, double hi, double rel_tol,
                                    double abs_floor, int max_panels, int initial_panels = 4)
{
    if (!(hi >= lo))
        throw std::invalid_argument("integration bounds out of order");
    if (hi == lo)
        return {};
    std::priority_queue<detail::Panel> heap;
    double total = 0.0, total_err = 0.0, total_abs = 0.0;
    long evals = 0;
    const int n0 = std::max(1, initial_panels);
    for (int i = 0; i < n0; ++i) {
        const double a = lo + (hi - lo) * i / n0;
        const double b = i + 1 == n0 ? hi : lo + (hi - lo) * (i + 1) / n0;
        auto p = detail::gauss_kronrod_15(f, a, b);
        evals += 15;
        total += p.value;
        total_err += p.error;
        total_abs += p.abs_value;
        heap.push(p);
    }
    int panels = n0;
    const double min_width = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max(std::abs(lo), std::abs(hi));
    // Cancellation can leave |total| far below int |f|; roundoff then sets the floor.
    const double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({rel_tol * std::abs(total), abs_floor, 100.0 * eps * total_abs});
    };
    while (total_err > target()) {
        const auto worst = heap.top();
        if (panels >= max_panels || worst.hi - worst.lo <= min_width) {
            std::ostringstream msg;
            msg << "quadrature did not converge: estimated error " << total_err
                << ", worst panel [" << worst.lo << ", " << worst.hi << "] with error "
                << worst.error;
            throw ConvergenceError(msg.str(), total, ConvergenceReport{0, total_err, evals});
        }
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
        auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
        evals += 30;
        ++panels;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {sum, err, evals};
}

/// Integral of f(y) over [lower, infinity), truncated at lower + y_cutoff_margin.
/// abs_tol lets a caller summing many such integrals relax the target for
/// terms that are small against the running total.
template <class F>
QuadratureResult integrate_y(const F& f, double lower, const ConvergenceSpec& spec,
                             double abs_tol = 0.0)
{
    if (!(lower >= 0.0))
        throw std::invalid_argument("integrate_y needs lower >= 0");
    return integrate_interval(f, lower, lower + spec.y_cutoff_margin, spec.rel_tol,
                              std::max(spec.abs_floor, abs_tol), spec.max_panels);
}

/// Integral of g(xi, y) over 0 <= xi <= y < infinity: outer adaptive over xi,
/// inner integrate_y from y = xi.
template <class G>
QuadratureResult integrate_2d(const G& g, const ConvergenceSpec& spec)
{
    ConvergenceSpec inner = spec;
    inner.rel_tol = std::max(spec.rel_tol * 0.05, 1e-15);
    long inner_evals = 0;
    double inner_err = 0.0;
    auto outer = [&](double xi) {
        auto r = integrate_y([&](double y) { return g(xi, y); }, xi, inner);
        inner_evals += r.evals;
        inner_err = std::max(inner_err, r.error);
        return r.value;
    };
    auto res = integrate_interval(outer, 0.0, spec.y_cutoff_margin, spec.rel_tol,
                                  spec.abs_floor, spec.max_panels, 8);
    res.evals = inner_evals;
    res.error += inner_err * spec.y_cutoff_margin;
    return res;
}

struct SumResult {
    double value = 0.0;
    ConvergenceReport report;
};

/**
 * Sum of term(l) for l = 1, 2, ... Stops once three consecutive terms are below
 * rel_tol times the partial sum and the geometric tail bound is below the same
 * threshold. The caller adds the l = 0 term itself.
 */
template <class Term>
SumResult matsubara_sum(const Term& term, const ConvergenceSpec& spec)
{
    double partial = 0.0;
    double prev = 0.0;
    int small_run = 0;
    for (long l = 1; l <= spec.max_matsubara; ++l) {
        const double t = term(l);
        partial += t;
        const double threshold = std::max(spec.rel_tol * std::abs(partial), spec.abs_floor);
        small_run = std::abs(t) <= threshold ? small_run + 1 : 0;
        if (small_run >= 3) {
            double tail = 0.0;
            if (t != 0.0) {
                const double q = prev != 0.0 ? std::abs(t / prev) : 1.0;
                tail = q < 1.0 ? std::abs(t) * q / (1.0 - q)
                               : std::numeric_limits<double>::infinity();
            }
            if (tail <= threshold)
                return {partial, ConvergenceReport{l, tail, 0}};
        }
        prev = t;
    }
    std::ostringstream msg;
    msg << "Matsubara sum did not converge within " << spec.max_matsubara << " terms";
    throw ConvergenceError(msg.str(), partial, ConvergenceReport{spec.max_matsubara, 0.0, 0});
}

} // namespace casimir
