// casimir: free energy, energy and entropy between parallel metal plates.
//
//   casimir compute --a-um 1 --t-k 300 --prescription b
//   casimir sweep --sweep a:0.5:6:12 --t-k 300 --quantities F,E,ratios --out fig.csv
//   casimir audit --a-um 2
//
// Exit status: 0 success, 1 usage or input error, 2 convergence failure,
// 3 audit failure (a prescription expected to satisfy the Nernst theorem did not).

#include "casimir/casimir.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace casimir;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, Usage = 1, Convergence = 2, AuditFailed = 3 };

std::vector<std::string> split(const std::string& s, char sep = ',')
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::optional<Model> parse_model(const std::string& s)
{
    if (s.empty())
        return std::nullopt;
    if (s == "ideal") return Model::Ideal;
    if (s == "plasma") return Model::Plasma;
    if (s == "drude") return Model::Drude;
    throw std::invalid_argument("unknown model '" + s + "' (ideal, plasma or drude)");
}

std::vector<Prescription> parse_prescriptions(const std::string& s)
{
    std::vector<Prescription> out;
    for (auto& p : split(s))
        out.push_back(parse_prescription(p));
    return out;
}

std::vector<double> parse_list(const std::string& s, const char* what)
{
    std::vector<double> out;
    for (auto& p : split(s))
        out.push_back(detail::parse_number(p, what));
    return out;
}

RelaxationLaw parse_law(const std::string& s, const Material& m)
{
    if (s == "default") return default_law(m);
    if (s == "linear") return RelaxationLaw::linear_above_quarter_debye();
    if (s == "table") return RelaxationLaw::table_interpolated(true);
    if (s == "frozen") return RelaxationLaw::frozen(m.gamma_ref);
    throw std::invalid_argument("unknown relaxation law '" + s + "'");
}

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

struct Options {
    std::string material = "Al";
    std::string model;
    std::string prescription;
    std::string law = "default";
    double a_um = 1.0;
    double t_k = 300.0;
    double rel_tol = 1e-10;
    unsigned workers = 0;
    bool as_json = false;
    std::string out;
};

ConvergenceSpec make_spec(const Options& o)
{
    ConvergenceSpec spec;
    spec.rel_tol = o.rel_tol;
    spec.validate();
    return spec;
}

int cmd_compute(const Options& o)
{
    auto material = load_material(o.material);
    const auto model = parse_model(o.model);
    const auto p = o.prescription.empty()
                       ? (model == Model::Drude ? Prescription::B_Modified : Prescription::D_Plasma)
                       : parse_prescription(o.prescription);
    auto sys = system_for(material, model, p);
    sys.law = parse_law(o.law, material);
    const auto spec = make_spec(o);
    const double a = o.a_um * 1e-6, T = o.t_k;

    const std::vector<Quantity> qs = {Quantity::F, Quantity::E, Quantity::E0, Quantity::S,
                                      Quantity::E_frozen};
    const auto v = compute_point(sys, a, T, qs, spec);
    for (auto& d : v.diagnostics)
        warn(d);

    long terms = 0, evals = 0;
    if (T > 0.0 && v.F) {
        const auto r = free_energy(sys, a, T, spec);
        terms = r.report.terms_used;
        evals = r.report.integrand_evals;
    }
    const auto st = sys.state(a, T);
    if (o.as_json) {
        json j = {{"material", material.name},
                  {"model", to_string(sys.model)},
                  {"prescription", to_string(p)},
                  {"a_um", o.a_um},
                  {"T_K", T},
                  {"T_eff_K", st.T_eff},
                  {"gamma_rad_s", st.gamma()},
                  {"nu", st.nu},
                  {"F", optional_json(v.F)},
                  {"E", optional_json(v.E)},
                  {"E0", optional_json(v.E0)},
                  {"E_frozen", optional_json(v.E_frozen)},
                  {"S", optional_json(v.S)},
                  {"rel_tol", spec.rel_tol},
                  {"matsubara_terms", terms},
                  {"integrand_evals", evals},
                  {"diagnostics", v.diagnostics}};
        std::cout << j.dump(2) << '\n';
    } else {
        auto line = [](const char* name, const std::optional<double>& x, const char* unit) {
            std::printf("%-9s %s %s\n", name, x ? format_value(*x).c_str() : "n/a", unit);
        };
        std::printf("material  %s, model %s, prescription %s\n", material.name.c_str(),
                    to_string(sys.model), to_string(p));
        std::printf("a         %s m, T = %s K, T_eff = %s K\n", format_value(a).c_str(),
                    format_value(T).c_str(), format_value(st.T_eff).c_str());
        line("F", v.F, "J/m^2");
        line("E", v.E, "J/m^2");
        line("E0", v.E0, "J/m^2");
        if (sys.model == Model::Drude)
            line("E_frozen", v.E_frozen, "J/m^2");
        line("S", v.S, "J/(K m^2)");
        std::printf("converged rel_tol %.1e, %ld Matsubara terms, %ld integrand evaluations\n",
                    spec.rel_tol, terms, evals);
    }
    return v.convergence_failure ? Convergence : Ok;
}

int cmd_sweep(const Options& o, const std::string& sweep_text, const std::string& quantities)
{
    auto material = load_material(o.material);
    auto sweep = parse_sweep(sweep_text);
    sweep.model = parse_model(o.model);
    sweep.fixed = sweep.axis == Axis::Separation ? o.t_k : o.a_um;
    sweep.prescriptions = parse_prescriptions(o.prescription.empty() ? "a,b,c,d" : o.prescription);
    if (sweep.model == Model::Ideal && o.prescription.empty())
        sweep.prescriptions = {Prescription::C_IdealPrescription};
    for (auto& q : split(quantities))
        sweep.quantities.push_back(parse_quantity(q));
    if (sweep.quantities.empty())
        throw std::invalid_argument("no quantities requested");
    if (o.law != "default")
        throw std::invalid_argument("sweep uses the material's default relaxation law");

    const auto table = run_sweep(material, sweep, make_spec(o), o.workers);
    for (auto& d : table.diagnostics)
        warn(d);

    if (o.as_json) {
        json rows = json::array();
        for (auto& r : table.rows) {
            json row = json::object();
            for (std::size_t j = 0; j < r.size(); ++j)
                row[table.columns[j]] = optional_json(r[j]);
            rows.push_back(row);
        }
        json j = {{"columns", table.columns}, {"rows", rows}, {"diagnostics", table.diagnostics}};
        if (o.out.empty()) {
            std::cout << j.dump(2) << '\n';
        } else {
            std::ofstream os(o.out);
            if (!os)
                throw std::runtime_error("cannot write " + o.out);
            os << j.dump(2) << '\n';
        }
    } else if (o.out.empty()) {
        write_csv(std::cout, table);
    } else {
        write_csv_file(o.out, table);
    }
    return table.convergence_failure ? Convergence : Ok;
}

int cmd_audit(const Options& o, const std::string& a_list, double t_max)
{
    auto material = load_material(o.material);
    const auto model = parse_model(o.model);
    std::string fallback = "a,b,c,d";
    if (model == Model::Plasma)
        fallback = "d";
    else if (model == Model::Ideal)
        fallback = "c";
    else if (model == Model::Drude)
        fallback = "a,b,c";
    const auto prescriptions = parse_prescriptions(o.prescription.empty() ? fallback : o.prescription);
    const auto spec = make_spec(o);
    const auto grid = default_audit_grid(t_max);
    AuditOptions opt;
    opt.workers = o.workers;

    json rows = json::array();
    bool failed = false;
    if (!o.as_json)
        std::printf("%-8s %-3s %-20s %-13s %-17s %s\n", "a_um", "p", "S(a,0) [J/(K m^2)]",
                    "S(a,0)/scale", "negative range K", "verdict");
    for (double a_um : parse_list(a_list, "a list")) {
        for (auto p : prescriptions) {
            auto sys = system_for(material, model, p);
            sys.law = parse_law(o.law, material);
            const auto v = nernst_audit(sys, a_um * 1e-6, grid, spec, opt);
            const bool bad = expected_to_pass(p) && v.verdict != NernstOutcome::Pass;
            failed = failed || bad;
            std::string range = "-";
            if (v.negative_range) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%g..%g", v.negative_range->first,
                              v.negative_range->second);
                range = buf;
            }
            if (o.as_json) {
                json samples = json::array();
                for (auto& s : v.samples)
                    samples.push_back({{"T_K", s.T}, {"S", s.S}});
                rows.push_back({{"a_um", a_um},
                                {"prescription", to_string(p)},
                                {"S_at_zero", v.S_at_zero},
                                {"scale", v.scale},
                                {"negative_range", v.negative_range
                                                       ? json::array({v.negative_range->first,
                                                                      v.negative_range->second})
                                                       : json(nullptr)},
                                {"verdict", to_string(v.verdict)},
                                {"samples", samples}});
            } else {
                std::printf("%-8g %-3s %-20s %-13.5f %-17s %s\n", a_um, to_string(p),
                            format_value(v.S_at_zero).c_str(), v.S_at_zero / v.scale,
                            range.c_str(), to_string(v.verdict));
            }
        }
    }
    if (o.as_json)
        std::cout << json{{"audit", rows}}.dump(2) << '\n';
    return failed ? AuditFailed : Ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Casimir free energy, energy and entropy of parallel metal plates"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--material", o.material, "material file, or 'Al' for the built-in aluminium");
        sub->add_option("--model", o.model, "ideal, plasma or drude")
            ->check(CLI::IsMember({"ideal", "plasma", "drude"}));
        sub->add_option("--rel-tol", o.rel_tol, "relative tolerance");
        sub->add_option("--law", o.law, "relaxation law: default, linear, table or frozen");
        sub->add_flag("--json", o.as_json, "machine-readable output");
        sub->add_option("--workers", o.workers, "worker threads (0 = all cores)");
    };

    auto* compute = app.add_subcommand("compute", "single (a, T) point");
    common(compute);
    compute->add_option("--prescription", o.prescription, "a, b, c or d");
    compute->add_option("--a-um", o.a_um, "separation in micrometres");
    compute->add_option("--t-k", o.t_k, "temperature in kelvin");

    std::string sweep_text, quantities = "F,E,E0,ratios";
    auto* sweep = app.add_subcommand("sweep", "sweep separation or temperature, write CSV");
    common(sweep);
    sweep->add_option("--prescription", o.prescription, "comma-separated subset of a,b,c,d");
    sweep->add_option("--sweep", sweep_text, "axis:min:max:count[:lin|log], axis a (um) or T (K)")
        ->required();
    sweep->add_option("--a-um", o.a_um, "fixed separation for temperature sweeps");
    sweep->add_option("--t-k", o.t_k, "fixed temperature for separation sweeps");
    sweep->add_option("--quantities", quantities, "comma-separated F,E,E0,E_frozen,S,ratios");
    sweep->add_option("--out", o.out, "output file (default stdout)");

    std::string a_list = "2";
    double t_max = 300.0;
    auto* audit = app.add_subcommand("audit", "Nernst heat theorem audit of the prescriptions");
    common(audit);
    audit->add_option("--prescription", o.prescription, "comma-separated subset of a,b,c,d");
    audit->add_option("--a-um", a_list, "comma-separated separations in micrometres");
    audit->add_option("--t-max", t_max, "highest grid temperature in kelvin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }

    try {
        if (*compute)
            return cmd_compute(o);
        if (*sweep)
            return cmd_sweep(o, sweep_text, quantities);
        if (*audit)
            return cmd_audit(o, a_list, t_max);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Convergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Usage;
    }
    return Usage;
}
