#include "casimir/thermo.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace casimir;

namespace {

ConvergenceSpec tight()
{
    ConvergenceSpec s;
    s.rel_tol = 1e-12;
    return s;
}

const Material al = Material::aluminium();

} // namespace

TEST(Thermo, FiniteDifferenceMatchesIdentity)
{
    for (auto sys : {PlateSystem::plasma(al), PlateSystem::drude(al, Prescription::A_DrudeDirect),
                     PlateSystem::drude(al, Prescription::B_Modified)}) {
        for (double T : {77.0, 300.0}) {
            const auto r = entropy_exact(sys, 1e-6, T, tight());
            EXPECT_NEAR(r.S, r.S_identity, 1e-5 * std::abs(r.S_identity) + r.error)
                << to_string(sys.prescription) << " T=" << T;
        }
    }
}

TEST(Thermo, LegendreIdentityHolds)
{
    const double a = 1.5e-6, T = 250.0;
    for (auto p : {Prescription::A_DrudeDirect, Prescription::B_Modified,
                   Prescription::C_IdealPrescription}) {
        const auto sys = PlateSystem::drude(al, p);
        const double F = free_energy(sys, a, T, tight()).value;
        const double E = energy(sys, a, T, tight()).value;
        const double S = entropy_exact(sys, a, T, tight()).S;
        EXPECT_NEAR(F + T * S, E, 1e-5 * std::abs(E)) << to_string(p);
    }
}

TEST(Thermo, PlasmaEntropyVanishesQuadratically)
{
    const double a = 1e-6;
    const auto sys = PlateSystem::plasma(al);
    const double T1 = 5.0, T2 = 10.0;
    const double S1 = entropy_analytic(sys, a, T1, tight()).S;
    const double S2 = entropy_analytic(sys, a, T2, tight()).S;
    EXPECT_GT(S1, 0.0);
    EXPECT_NEAR(S2 / S1, 4.0, 0.1);
    const auto lo = entropy_plasma_asymptotic(sys.state(a, T1), AsymptoticBranch::LowT);
    EXPECT_TRUE(lo.valid);
    EXPECT_NEAR(S1 / lo.S, 1.0, 1e-3);
}

TEST(Thermo, IdealMetalHighTemperatureEntropy)
{
    const double a = 5e-6;
    const double T = 20 * effective_temperature(a);
    const auto r = entropy_exact(PlateSystem::ideal(al), a, T, tight());
    EXPECT_NEAR(r.S / (K::kB * zeta3 / (8 * pi * a * a)), 1.0, 5e-3);
}

TEST(Thermo, AsymptoticClosedForms)
{
    const double a = 2e-6;
    const auto cold = make_state(a, 1e-12, al.omega_p);
    EXPECT_NEAR(entropy_plasma_asymptotic(cold, AsymptoticBranch::LowT).S, 0.0, 1e-30);
    const double base = K::kB * zeta3 / (8 * pi * a * a);
    const auto hot = make_state(a, 1e5, al.omega_p);
    EXPECT_NEAR(entropy_plasma_asymptotic(hot, AsymptoticBranch::HighT, Model::Ideal).S, base, 1e-12 * base);
    EXPECT_NEAR(entropy_plasma_asymptotic(hot, AsymptoticBranch::HighT).S,
                base * (1 - hot.lambda_p_over_pi_a()), 1e-12 * base);
    // leading coefficient 3 kB zeta(3) / (8 pi a^2) (T/T_eff)^2
    const auto tiny = make_state(a, 1e-3, al.omega_p);
    const double tau = tiny.T / tiny.T_eff;
    EXPECT_NEAR(entropy_plasma_asymptotic(tiny, AsymptoticBranch::LowT, Model::Ideal).S /
                    (3 * base * tau * tau),
                1.0, 1e-4);
    EXPECT_FALSE(entropy_plasma_asymptotic(make_state(a, 300.0, al.omega_p), AsymptoticBranch::HighT).valid);
}

TEST(Thermo, AsymptoticEntropyIsDerivativeOfFreeEnergy)
{
    // -dF/dT of each plasma branch reproduces the branch entropy
    const double a = 1e-6;
    for (double T : {20.0, 60.0}) {
        const double h = 1e-3 * T;
        auto F = [&](double temp) { return plasma_low_T(make_state(a, temp, al.omega_p), 0.0).free_energy; };
        const double S = entropy_plasma_asymptotic(make_state(a, T, al.omega_p), AsymptoticBranch::LowT).S;
        EXPECT_NEAR(-(F(T + h) - F(T - h)) / (2 * h) / S, 1.0, 1e-6) << T;
    }
    const double T = 3e4;
    auto F = [&](double temp) { return plasma_high_T(make_state(a, temp, al.omega_p)).free_energy; };
    const double S = entropy_plasma_asymptotic(make_state(a, T, al.omega_p), AsymptoticBranch::HighT).S;
    EXPECT_NEAR(-(F(T + 1) - F(T - 1)) / 2 / S, 1.0, 1e-9);
}

TEST(Thermo, PerturbativeEntropyAgreesWithExact)
{
    const double a = 2e-6, T = 300.0;
    const auto pl = PlateSystem::plasma(al);
    EXPECT_NEAR(entropy_perturbative(pl, a, T).S / entropy_analytic(pl, a, T, tight()).S, 1.0, 1e-3);
    const double scale = entropy_scale(a);
    for (auto p : {Prescription::A_DrudeDirect, Prescription::B_Modified,
                   Prescription::C_IdealPrescription}) {
        const auto sys = PlateSystem::drude(al, p);
        const double exact = entropy_analytic(sys, a, T, tight()).S;
        EXPECT_NEAR(entropy_perturbative(sys, a, T).S, exact, 2e-2 * scale) << to_string(p);
    }
}

TEST(Thermo, ZeroTemperatureStateUsesReferenceGamma)
{
    const auto sys = PlateSystem::drude(al, Prescription::A_DrudeDirect);
    const auto s = sys.zero_temperature_state(1e-6);
    EXPECT_EQ(s.T, 0.0);
    EXPECT_NEAR(s.gamma(), al.gamma_ref, 1e-6 * al.gamma_ref);
    EXPECT_EQ(PlateSystem::plasma(al).zero_temperature_state(1e-6).gamma_tilde, 0.0);
}

TEST(Thermo, AuditRejectsBadGrids)
{
    const auto sys = PlateSystem::plasma(al);
    EXPECT_THROW(nernst_audit(sys, 2e-6, {1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(nernst_audit(sys, 2e-6, {1.0, 3.0, 2.0, 5.0}), std::invalid_argument);
    EXPECT_THROW(nernst_audit(sys, 2e-6, {50.0, 100.0, 150.0}), std::invalid_argument);
}

TEST(Thermo, PlasmaPassesAuditAtSeveralSeparations)
{
    for (double a : {0.2e-6, 1e-6, 5e-6}) {
        const auto v = nernst_audit(PlateSystem::plasma(al), a, default_audit_grid(), tight());
        EXPECT_EQ(v.verdict, NernstOutcome::Pass) << a;
        EXPECT_FALSE(v.negative_range.has_value());
        EXPECT_LT(std::abs(v.S_at_zero), v.zero_tolerance);
    }
}

TEST(Thermo, EntropyRequiresPositiveTemperature)
{
    EXPECT_THROW(entropy_exact(PlateSystem::plasma(al), 1e-6, 0.0), std::invalid_argument);
    EXPECT_THROW(entropy_analytic(PlateSystem::plasma(al), 1e-6, -1.0), std::invalid_argument);
}
