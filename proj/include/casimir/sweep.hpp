// Single-point reports and parameter sweeps producing plot-ready tables.
#pragma once

#include "casimir/io.hpp"
#include "casimir/thermo.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace casimir {

enum class Quantity { F, E, E0, E_frozen, S, Ratios };

inline const char* to_string(Quantity q)
{
    switch (q) {
    case Quantity::F: return "F";
    case Quantity::E: return "E";
    case Quantity::E0: return "E0";
    case Quantity::E_frozen: return "E_frozen";
    case Quantity::S: return "S";
    case Quantity::Ratios: return "ratios";
    }
    return "?";
}

inline Quantity parse_quantity(const std::string& s)
{
    for (auto q : {Quantity::F, Quantity::E, Quantity::E0, Quantity::E_frozen, Quantity::S,
                   Quantity::Ratios})
        if (s == to_string(q))
            return q;
    throw std::invalid_argument("unknown quantity '" + s + "'");
}

/// Model-aware system for a prescription; `model` may force the ideal metal.
inline PlateSystem system_for(const Material& m, std::optional<Model> model, Prescription p)
{
    const Model chosen = model.value_or(model_for(p));
    if (chosen == Model::Ideal) {
        if (p != Prescription::C_IdealPrescription && p != Prescription::D_Plasma)
            throw std::invalid_argument("ideal metal takes prescription c or d");
        return {m, default_law(m), Model::Ideal, p};
    }
    if (chosen != model_for(p))
        throw std::invalid_argument(std::string("prescription ") + to_string(p) +
                                    " is not defined for the " + to_string(chosen) + " model");
    return {m, default_law(m), chosen, p};
}

/// Values at one (a, T) for one prescription. Missing entries were not
/// requested, do not apply, or failed (see diagnostics).
struct PointValues {
    std::optional<double> F, E, E0, E_frozen, S;
    std::vector<std::string> diagnostics;
    bool convergence_failure = false;
};

inline PointValues compute_point(const PlateSystem& sys, double a, double T,
                                 const std::vector<Quantity>& quantities,
                                 const ConvergenceSpec& spec = {})
{
    auto wants = [&](Quantity q) {
        return std::find(quantities.begin(), quantities.end(), q) != quantities.end();
    };
    const bool ratios = wants(Quantity::Ratios);
    PointValues out;
    auto guarded = [&](const char* what, auto&& fn) -> std::optional<double> {
        try {
            auto r = fn();
            for (auto& w : r.warnings)
                if (std::find(out.diagnostics.begin(), out.diagnostics.end(), w) == out.diagnostics.end())
                    out.diagnostics.push_back(w);
            return r.value;
        } catch (const ConvergenceError& e) {
            out.convergence_failure = true;
            out.diagnostics.push_back(std::string(what) + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            out.diagnostics.push_back(std::string(what) + ": " + e.what());
        }
        return std::nullopt;
    };
    const bool need_F = wants(Quantity::F) || wants(Quantity::S) || ratios;
    const bool need_E = wants(Quantity::E) || wants(Quantity::S) || ratios;
    if (need_F && T > 0.0)
        out.F = guarded("F", [&] { return free_energy(sys, a, T, spec); });
    if (need_E && T > 0.0)
        out.E = guarded("E", [&] { return energy(sys, a, T, spec); });
    if (T == 0.0 && (need_F || need_E)) {
        // At T = 0 free energy and energy coincide.
        out.F = guarded("E0", [&] { return energy_zero_T(sys, a, spec); });
        out.E = out.F;
    }
    if (wants(Quantity::E0) || ratios)
        out.E0 = T == 0.0 && out.F ? out.F : guarded("E0", [&] { return energy_zero_T(sys, a, spec); });
    if (wants(Quantity::E_frozen) && sys.model == Model::Drude && T > 0.0)
        out.E_frozen = guarded("E_frozen", [&] {
            auto s = sys.state(a, T);
            s.nu = 0.0;
            return energy_frozen_gamma(s, spec);
        });
    if (wants(Quantity::S) && out.F && out.E && T > 0.0)
        out.S = (*out.E - *out.F) / T;
    return out;
}

enum class Axis { Separation, Temperature };
enum class Spacing { Linear, Log };

struct SweepSpec {
    Axis axis = Axis::Separation;
    double min = 0.0; // um for separation, K for temperature
    double max = 0.0;
    int count = 2;
    Spacing spacing = Spacing::Linear;
    double fixed = 0.0; // the other coordinate, same units
    std::vector<Prescription> prescriptions;
    std::vector<Quantity> quantities;
    std::optional<Model> model;

    void validate() const
    {
        if (count < 1)
            throw std::invalid_argument("sweep count must be positive");
        if (count >= 2 && !(min < max))
            throw std::invalid_argument("sweep needs min < max");
        if (count == 1 && min != max)
            throw std::invalid_argument("single-point sweep needs min == max");
        if (spacing == Spacing::Log && !(min > 0.0))
            throw std::invalid_argument("log spacing needs min > 0");
        if (axis == Axis::Separation && !(min > 0.0))
            throw std::invalid_argument("separations must be positive");
        if (axis == Axis::Temperature && !(min >= 0.0))
            throw std::invalid_argument("temperatures must be non-negative");
        if (!(fixed > 0.0 || (axis == Axis::Separation && fixed == 0.0)))
            throw std::invalid_argument("fixed coordinate out of range");
    }

    std::vector<double> points() const
    {
        std::vector<double> out;
        if (count == 1)
            return {min};
        for (int i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / (count - 1);
            out.push_back(spacing == Spacing::Linear ? min + (max - min) * f
                                                     : min * std::pow(max / min, f));
        }
        out.back() = max;
        return out;
    }
};

/// Parses `axis:min:max:count[:lin|log]` with axis `a` (um) or `T` (K).
inline SweepSpec parse_sweep(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');)
        parts.push_back(p);
    if (parts.size() != 4 && parts.size() != 5)
        throw std::invalid_argument("sweep expects axis:min:max:count[:lin|log]");
    SweepSpec s;
    if (parts[0] == "a")
        s.axis = Axis::Separation;
    else if (parts[0] == "T")
        s.axis = Axis::Temperature;
    else
        throw std::invalid_argument("sweep axis must be 'a' or 'T'");
    s.min = detail::parse_number(parts[1], "sweep min");
    s.max = detail::parse_number(parts[2], "sweep max");
    const double n = detail::parse_number(parts[3], "sweep count");
    if (n != std::floor(n) || n < 1 || n > 100000)
        throw std::invalid_argument("sweep count must be a positive integer");
    s.count = static_cast<int>(n);
    if (parts.size() == 5) {
        if (parts[4] == "lin")
            s.spacing = Spacing::Linear;
        else if (parts[4] == "log")
            s.spacing = Spacing::Log;
        else
            throw std::invalid_argument("sweep spacing must be 'lin' or 'log'");
    }
    return s;
}

struct FigureTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;
    std::vector<std::string> diagnostics;
    bool convergence_failure = false;
};

namespace detail {

inline std::vector<std::string> quantity_columns(Prescription p, const std::vector<Quantity>& qs,
                                                 const PlateSystem& sys)
{
    std::vector<std::string> cols;
    const std::string pre = std::string(to_string(p)) + "_";
    bool ratios = false;
    for (auto q : qs) {
        if (q == Quantity::Ratios) {
            ratios = true;
            continue;
        }
        if (q == Quantity::E_frozen && sys.model != Model::Drude)
            continue;
        cols.push_back(pre + to_string(q));
    }
    if (ratios) {
        cols.push_back(pre + "absE0");
        cols.push_back(pre + "R_F");
        cols.push_back(pre + "R_E");
        if (std::find(qs.begin(), qs.end(), Quantity::E_frozen) != qs.end() && sys.model == Model::Drude)
            cols.push_back(pre + "R_E_frozen");
    }
    return cols;
}

inline std::vector<std::optional<double>> quantity_cells(const PointValues& v,
                                                         const std::vector<Quantity>& qs,
                                                         const PlateSystem& sys)
{
    std::vector<std::optional<double>> cells;
    bool ratios = false;
    for (auto q : qs) {
        switch (q) {
        case Quantity::F: cells.push_back(v.F); break;
        case Quantity::E: cells.push_back(v.E); break;
        case Quantity::E0: cells.push_back(v.E0); break;
        case Quantity::E_frozen:
            if (sys.model == Model::Drude)
                cells.push_back(v.E_frozen);
            break;
        case Quantity::S: cells.push_back(v.S); break;
        case Quantity::Ratios: ratios = true; break;
        }
    }
    if (ratios) {
        std::optional<double> norm;
        if (v.E0)
            norm = std::abs(*v.E0);
        auto ratio = [&](const std::optional<double>& x) -> std::optional<double> {
            if (!x || !norm || *norm == 0.0)
                return std::nullopt;
            return *x / *norm;
        };
        cells.push_back(norm);
        cells.push_back(ratio(v.F));
        cells.push_back(ratio(v.E));
        if (std::find(qs.begin(), qs.end(), Quantity::E_frozen) != qs.end() && sys.model == Model::Drude)
            cells.push_back(ratio(v.E_frozen));
    }
    return cells;
}

} // namespace detail

/// Evaluates the sweep; rows follow the axis order regardless of scheduling.
inline FigureTable run_sweep(const Material& material, const SweepSpec& sweep,
                             const ConvergenceSpec& spec = {}, unsigned workers = 0)
{
    sweep.validate();
    spec.validate();
    const auto xs = sweep.points();
    std::vector<PlateSystem> systems;
    for (auto p : sweep.prescriptions)
        systems.push_back(system_for(material, sweep.model, p));

    FigureTable table;
    table.columns.push_back(sweep.axis == Axis::Separation ? "a_um" : "T_K");
    for (std::size_t k = 0; k < systems.size(); ++k)
        for (auto& c : detail::quantity_columns(sweep.prescriptions[k], sweep.quantities, systems[k]))
            table.columns.push_back(c);

    const std::size_t np = systems.size();
    std::vector<PointValues> results(xs.size() * np);
    parallel_for(results.size(), workers, [&](std::size_t idx) {
        const std::size_t i = idx / np, k = idx % np;
        const double a_um = sweep.axis == Axis::Separation ? xs[i] : sweep.fixed;
        const double T = sweep.axis == Axis::Separation ? sweep.fixed : xs[i];
        results[idx] = compute_point(systems[k], a_um * 1e-6, T, sweep.quantities, spec);
    });

    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<std::optional<double>> row{xs[i]};
        for (std::size_t k = 0; k < np; ++k) {
            const auto& v = results[i * np + k];
            for (auto& c : detail::quantity_cells(v, sweep.quantities, systems[k]))
                row.push_back(c);
            for (auto& d : v.diagnostics) {
                char head[96];
                std::snprintf(head, sizeof head, "%s=%.6g prescription %s: ", table.columns[0].c_str(),
                              xs[i], to_string(sweep.prescriptions[k]));
                table.diagnostics.push_back(head + d);
            }
            table.convergence_failure = table.convergence_failure || v.convergence_failure;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline void write_csv(std::ostream& os, const FigureTable& t)
{
    for (std::size_t j = 0; j < t.columns.size(); ++j)
        os << (j ? "," : "") << t.columns[j];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j)
                os << ',';
            if (row[j])
                os << format_value(*row[j]);
        }
        os << '\n';
    }
}

/// Writes the CSV and, when there are diagnostics, `<path>.diagnostics.txt`.
inline void write_csv_file(const std::string& path, const FigureTable& t)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot write " + path);
    write_csv(os, t);
    if (!os)
        throw std::runtime_error("write failed for " + path);
    if (!t.diagnostics.empty()) {
        std::ofstream diag(path + ".diagnostics.txt");
        if (!diag)
            throw std::runtime_error("cannot write " + path + ".diagnostics.txt");
        for (auto& d : t.diagnostics)
            diag << d << '\n';
    }
}

} // namespace casimir
