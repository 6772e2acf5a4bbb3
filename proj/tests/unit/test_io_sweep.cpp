#include "casimir/io.hpp"
#include "casimir/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace casimir;

namespace {

std::filesystem::path temp_dir()
{
    auto d = std::filesystem::temp_directory_path() / "casimir_io_test";
    std::filesystem::create_directories(d);
    return d;
}

std::string csv_of(const FigureTable& t)
{
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

} // namespace

TEST(Io, ParsesMaterialWithUnits)
{
    std::istringstream in("# comment\nname = Au\nomega_p_ev = 9.0  # trailing\n"
                          "gamma_ref_rad_s = 5.3e13\ndebye_t_k = 165\n");
    const auto m = parse_material(in);
    EXPECT_EQ(m.name, "Au");
    EXPECT_NEAR(m.omega_p, 9.0 * ev_to_rad_s, 1.0);
    EXPECT_EQ(m.gamma_ref, 5.3e13);
    EXPECT_EQ(m.T_ref, 300.0);
    EXPECT_EQ(m.debye_T, 165.0);
    EXPECT_FALSE(m.gamma_table.has_value());
}

TEST(Io, MaterialErrors)
{
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return parse_material(in);
    };
    EXPECT_THROW(parse("gamma_ref_ev = 0.05\n"), ConfigError);
    EXPECT_THROW(parse("omega_p_ev = 11.5\nomega_p_rad_s = 1e16\n"), ConfigError);
    EXPECT_THROW(parse("omega_p_ev = abc\n"), ConfigError);
    EXPECT_THROW(parse("omega_p_ev = 11.5\ncolour = red\n"), ConfigError);
    EXPECT_THROW(parse("omega_p_ev = 11.5\nno equals sign\n"), ConfigError);
    EXPECT_THROW(parse("omega_p_ev = -1\n"), ConfigError);
    EXPECT_THROW(load_material("/nonexistent/material.cfg"), ConfigError);
}

TEST(Io, GammaTableRelativeToConfig)
{
    const auto dir = temp_dir();
    {
        std::ofstream t(dir / "g.csv");
        t << "T_K,gamma_rad_s\n10,1e11\n100,1e13\n300,3e13\n";
        std::ofstream c(dir / "m.cfg");
        c << "omega_p_ev = 11.5\ngamma_ref_ev = 0.05\ngamma_table_path = g.csv\n";
    }
    const auto m = load_material((dir / "m.cfg").string());
    ASSERT_TRUE(m.gamma_table.has_value());
    EXPECT_EQ(m.gamma_table->samples().size(), 3u);
    EXPECT_NEAR(gamma_at(m, default_law(m), 100.0).gamma, 1e13, 1.0);
}

TEST(Io, GammaCsvErrors)
{
    std::istringstream bad_header("T,gamma\n1,2\n");
    EXPECT_THROW(parse_gamma_csv(bad_header), ConfigError);
    std::istringstream bad_row("T_K,gamma_rad_s\n1;2\n");
    EXPECT_THROW(parse_gamma_csv(bad_row), ConfigError);
    const auto dir = temp_dir();
    {
        std::ofstream t(dir / "bad.csv");
        t << "T_K,gamma_rad_s\n10,1e11\n5,1e13\n";
    }
    EXPECT_THROW(load_gamma_table(dir / "bad.csv"), ConfigError);
}

TEST(Io, BuiltinAluminium)
{
    EXPECT_EQ(load_material("Al").name, "Al");
    EXPECT_EQ(format_value(1.5), "1.500000000000e+00");
}

TEST(Sweep, ParseSpec)
{
    auto s = parse_sweep("a:0.5:6:12:log");
    EXPECT_EQ(s.axis, Axis::Separation);
    EXPECT_EQ(s.count, 12);
    EXPECT_EQ(s.spacing, Spacing::Log);
    s.fixed = 300.0;
    const auto pts = s.points();
    EXPECT_EQ(pts.front(), 0.5);
    EXPECT_EQ(pts.back(), 6.0);
    EXPECT_THROW(parse_sweep("x:1:2:3"), std::invalid_argument);
    EXPECT_THROW(parse_sweep("a:1:2"), std::invalid_argument);
    EXPECT_THROW(parse_sweep("a:1:2:2.5"), std::invalid_argument);
    auto bad = parse_sweep("T:10:5:3");
    bad.fixed = 1.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Sweep, ColumnsAndRatios)
{
    SweepSpec s = parse_sweep("a:1:2:2");
    s.fixed = 300.0;
    s.prescriptions = {Prescription::A_DrudeDirect, Prescription::D_Plasma};
    s.quantities = {Quantity::F, Quantity::E, Quantity::E_frozen, Quantity::Ratios};
    const auto t = run_sweep(Material::aluminium(), s, {}, 2);
    const std::vector<std::string> expected = {"a_um",   "a_F",    "a_E",    "a_E_frozen",
                                               "a_absE0", "a_R_F", "a_R_E",  "a_R_E_frozen",
                                               "d_F",    "d_E",    "d_absE0", "d_R_F", "d_R_E"};
    EXPECT_EQ(t.columns, expected);
    ASSERT_EQ(t.rows.size(), 2u);
    for (const auto& row : t.rows) {
        ASSERT_EQ(row.size(), expected.size());
        for (auto& c : row)
            ASSERT_TRUE(c.has_value());
        // ratio columns are raw values over |E(a,0)| exactly
        EXPECT_EQ(*row[5], *row[1] / *row[4]);
        EXPECT_EQ(*row[6], *row[2] / *row[4]);
        EXPECT_EQ(*row[11], *row[8] / *row[10]);
    }
    EXPECT_TRUE(t.diagnostics.empty());
}

TEST(Sweep, SinglePointMatchesCompute)
{
    SweepSpec s = parse_sweep("a:1:1:1");
    s.fixed = 300.0;
    s.prescriptions = {Prescription::B_Modified};
    s.quantities = {Quantity::F, Quantity::E, Quantity::S};
    const auto t = run_sweep(Material::aluminium(), s);
    const auto sys = system_for(Material::aluminium(), std::nullopt, Prescription::B_Modified);
    const auto v = compute_point(sys, 1e-6, 300.0, s.quantities);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(*t.rows[0][1], *v.F);
    EXPECT_EQ(*t.rows[0][2], *v.E);
    EXPECT_EQ(*t.rows[0][3], *v.S);
}

// Property: identical inputs give byte-identical CSV, whatever the worker count.
TEST(SweepProperty, DeterministicOutput)
{
    SweepSpec s = parse_sweep("T:20:300:6");
    s.fixed = 2.0;
    s.prescriptions = {Prescription::A_DrudeDirect, Prescription::C_IdealPrescription};
    s.quantities = {Quantity::F, Quantity::S};
    const auto first = csv_of(run_sweep(Material::aluminium(), s, {}, 1));
    const auto second = csv_of(run_sweep(Material::aluminium(), s, {}, 4));
    const auto third = csv_of(run_sweep(Material::aluminium(), s, {}, 3));
    EXPECT_EQ(first, second);
    EXPECT_EQ(first, third);
    EXPECT_NE(first.find("T_K,a_F,a_S,c_F,c_S\n"), std::string::npos);
}

TEST(Sweep, FailuresBecomeEmptyCellsWithSidecar)
{
    SweepSpec s = parse_sweep("T:1:2:2");
    s.fixed = 1.0;
    s.prescriptions = {Prescription::D_Plasma};
    s.quantities = {Quantity::F};
    ConvergenceSpec spec;
    spec.max_matsubara = 10; // far too few at 1 K
    const auto t = run_sweep(Material::aluminium(), s, spec);
    EXPECT_TRUE(t.convergence_failure);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_FALSE(t.rows[0][1].has_value());
    EXPECT_FALSE(t.diagnostics.empty());
    const auto path = (temp_dir() / "fail.csv").string();
    write_csv_file(path, t);
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "T_K,d_F");
    EXPECT_EQ(row, "1.000000000000e+00,");
    EXPECT_TRUE(std::filesystem::exists(path + ".diagnostics.txt"));
}

TEST(Sweep, DrudeWarningGoesToDiagnostics)
{
    SweepSpec s = parse_sweep("a:0.3:0.3:1");
    s.fixed = 300.0;
    s.prescriptions = {Prescription::A_DrudeDirect};
    s.quantities = {Quantity::F};
    const auto t = run_sweep(Material::aluminium(), s);
    ASSERT_FALSE(t.diagnostics.empty());
    EXPECT_NE(t.diagnostics[0].find("Drude"), std::string::npos);
    EXPECT_EQ(csv_of(t).find("Drude"), std::string::npos);
}

TEST(Sweep, IncompatibleModelRejected)
{
    EXPECT_THROW(system_for(Material::aluminium(), Model::Plasma, Prescription::A_DrudeDirect),
                 std::invalid_argument);
    EXPECT_THROW(system_for(Material::aluminium(), Model::Ideal, Prescription::B_Modified),
                 std::invalid_argument);
    EXPECT_EQ(system_for(Material::aluminium(), Model::Ideal, Prescription::C_IdealPrescription).model,
              Model::Ideal);
}

// Qualitative shapes of the separation curves at 300 K (ratios to |E(a,0)|).
TEST(FigureShapes, SeparationCurvesAtRoomTemperature)
{
    SweepSpec s = parse_sweep("a:0.5:7:10:log");
    s.fixed = 300.0;
    s.prescriptions = {Prescription::A_DrudeDirect, Prescription::B_Modified,
                       Prescription::C_IdealPrescription, Prescription::D_Plasma};
    s.quantities = {Quantity::Ratios};
    const auto t = run_sweep(Material::aluminium(), s);
    auto col = [&](const std::string& name) {
        const auto it = std::find(t.columns.begin(), t.columns.end(), name);
        EXPECT_NE(it, t.columns.end()) << name;
        std::vector<double> v;
        for (const auto& row : t.rows)
            v.push_back(*row[it - t.columns.begin()]);
        return v;
    };
    const auto aF = col("a_R_F"), bF = col("b_R_F"), cF = col("c_R_F"), dF = col("d_R_F");
    const auto aE = col("a_R_E"), cE = col("c_R_E"), dE = col("d_R_E");
    bool a_crosses = false;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        // plasma: free energy below and energy above the T = 0 energy
        EXPECT_LT(dF[i], -1.0);
        EXPECT_GT(dE[i], -1.0);
        EXPECT_LT(cF[i], bF[i]);
        EXPECT_LT(bF[i], aF[i]);
        EXPECT_LT(bF[i], dF[i]);
        // the (a) and (c) zero-frequency terms do not depend on T
        EXPECT_NEAR(aE[i], cE[i], 1e-12);
        if (i > 0) {
            EXPECT_LT(dF[i], dF[i - 1]);
            EXPECT_GT(dE[i], dE[i - 1]);
            a_crosses = a_crosses || (aF[i - 1] + 1.0) * (aF[i] + 1.0) < 0.0;
        }
    }
    // (a) starts above -1, turns over and crosses it at a few micrometres
    EXPECT_GT(aF.front(), -1.0);
    EXPECT_TRUE(a_crosses);
    const auto top = std::max_element(aF.begin(), aF.end());
    EXPECT_NE(top, aF.begin());
    EXPECT_NE(top, aF.end() - 1);
}
