#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "chiralsg/config.hpp"
#include "chiralsg/gauge.hpp"

using namespace chiralsg;

namespace {

constexpr double pi = std::numbers::pi;

NormalizedParams fig3(Preset p) {
    RunConfig cfg;
    apply_preset(cfg, p);
    return normalize(cfg.physical);
}

// Independent theta: straight from the Gaussian formulas, no library code.
double theta_oracle(const NormalizedParams& p, double x, Chirality c) {
    auto gauss = [](double a, double xc, double w, double xx) { return a * std::exp(-(xx - xc) * (xx - xc) / (w * w)); };
    const double o13 = gauss(p.rabi13, p.beamOffset, p.sigma13, x);
    const double o23 = gauss(p.rabi23, -p.beamOffset, p.sigma23, x);
    const double o12 = gauss(p.rabi12, 0.0, p.sigma12, x);
    const double l1 = -o13 * o13 / p.detuning;
    const double l2 = -o23 * o23 / p.detuning;
    const double g = (c == Chirality::Left ? o12 : -o12) - o13 * o23 / p.detuning;
    return 0.5 * std::atan2(2 * g, l1 - l2);
}

double wrap(double d) { return d - pi * std::round(d / pi); }

double fd_theta(const NormalizedParams& p, double x, Chirality c, double h = 1e-4) {
    return wrap(theta_oracle(p, x + h, c) - theta_oracle(p, x - h, c)) / (2 * h);
}

double rel(double a, double b, double floor) { return std::abs(a - b) / std::max(std::abs(b), floor); }

}  // namespace

TEST(VectorPotential, Examples) {
    const double k = 2 * pi;
    EXPECT_EQ(vector_potential(0.0, Spin::Up), 0.0);
    EXPECT_EQ(vector_potential(0.0, Spin::Down), -k);
    EXPECT_NEAR(vector_potential(pi / 4, Spin::Up), -k / 2, 1e-15);
    EXPECT_NEAR(vector_potential(pi / 4, Spin::Down), -k / 2, 1e-15);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-pi / 2, pi / 2);
    for (int i = 0; i < 100; ++i) {
        const double th = u(rng);
        EXPECT_NEAR(vector_potential(th, Spin::Up) + vector_potential(th, Spin::Down), -k, 1e-15 * k);
    }
}

TEST(Gauge, IdentitiesOnGrid) {
    for (Preset pr : {Preset::Fig3abc, Preset::Fig3def}) {
        const NormalizedParams p = fig3(pr);
        for (Chirality c : {Chirality::Left, Chirality::Right}) {
            for (int i = 0; i < 10000; ++i) {
                const double x = -30.0 + 60.0 * i / 9999.0;
                const GaugePoint g = gauge_point(p, x, c);
                EXPECT_LE(std::abs(g.A_up + g.A_down + p.k12) / p.k12, 1e-12);
                EXPECT_LE(std::abs(g.B_up + g.B_down) / (p.k12 * p.k12), 1e-12);
            }
        }
    }
}

TEST(Gauge, GeometryMatchesOracleTheta) {
    const NormalizedParams p = fig3(Preset::Fig3abc);
    for (int i = 0; i <= 300; ++i) {
        const double x = -15.0 + 0.1 * i;
        for (Chirality c : {Chirality::Left, Chirality::Right}) {
            const LocalGeometry geo = local_geometry(p, x, c);
            const double th = theta_oracle(p, x, c);
            EXPECT_NEAR(geo.sinsq, std::sin(th) * std::sin(th), 1e-13);
            EXPECT_NEAR(geo.cossq, std::cos(th) * std::cos(th), 1e-13);
            EXPECT_NEAR(geo.sin2, std::sin(2 * th), 1e-13);
            EXPECT_NEAR(wrap(geo.theta() - th), 0.0, 1e-13);
        }
    }
}

TEST(ThetaGradient, ConstantEnvelopesGiveZero) {
    NormalizedParams p = fig3(Preset::Fig3abc);
    p.sigma12 = p.sigma13 = p.sigma23 = 1e150;
    for (double x : {-5.0, 0.0, 7.0}) EXPECT_LE(std::abs(theta_gradient(p, x, Chirality::Left)), 1e-250);
}

TEST(ThetaGradient, SymmetricPointMatchesFiniteDifference) {
    const NormalizedParams p = fig3(Preset::Fig3abc);
    ASSERT_EQ(p.rabi13, p.rabi23);
    for (Chirality c : {Chirality::Left, Chirality::Right}) {
        const LocalGeometry geo = local_geometry(p, 0.0, c);
        EXPECT_EQ(geo.shift1, geo.shift2);
        EXPECT_LT(rel(geo.dtheta, fd_theta(p, 0.0, c), 1e-3), 1e-6);
    }
}

TEST(ThetaGradient, EvenUnderMirroredBeams) {
    // with Omega13 = Omega23 and sigma13 = sigma23, x -> -x swaps Lambda1 and Lambda2 and
    // leaves g unchanged, so theta(-x) = pi/2 - theta(x) (mod pi) and theta' is even
    const NormalizedParams p = fig3(Preset::Fig3def);
    for (int i = 1; i <= 150; ++i) {
        const double x = 0.1 * i;
        for (Chirality c : {Chirality::Left, Chirality::Right}) {
            const double a = theta_gradient(p, x, c);
            const double b = theta_gradient(p, -x, c);
            EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
            EXPECT_NEAR(wrap(theta_oracle(p, -x, c) - (pi / 2 - theta_oracle(p, x, c))), 0.0, 1e-12);
        }
    }
}

TEST(ThetaGradient, RandomPointsMatchFiniteDifference) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-15.0, 15.0);
    for (Preset pr : {Preset::Fig3abc, Preset::Fig3def}) {
        const NormalizedParams p = fig3(pr);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng);
            const Chirality c = i % 2 ? Chirality::Right : Chirality::Left;
            EXPECT_LT(rel(theta_gradient(p, x, c), fd_theta(p, x, c), 1e-3), 1e-6) << "x=" << x;
        }
    }
}

TEST(ThetaGradient, SecondDerivativeMatchesFiniteDifference) {
    const NormalizedParams p = fig3(Preset::Fig3abc);
    const double h = 1e-4;
    for (double x : {-9.0, -2.5, 0.0, 1.0, 6.5}) {
        for (Chirality c : {Chirality::Left, Chirality::Right}) {
            const double fd = (theta_gradient(p, x + h, c) - theta_gradient(p, x - h, c)) / (2 * h);
            EXPECT_LT(rel(local_geometry(p, x, c).d2theta, fd, 1e-2), 1e-6) << "x=" << x;
        }
    }
}

TEST(ThetaGradient, FiniteFarInTheTails) {
    const NormalizedParams p = fig3(Preset::Fig3def);
    for (double x : {60.0, 100.0, 140.0, 200.0, 1e3}) {
        for (Chirality c : {Chirality::Left, Chirality::Right}) {
            const LocalGeometry geo = local_geometry(p, x, c);
            EXPECT_TRUE(std::isfinite(geo.dtheta) && std::isfinite(geo.d2theta)) << "x=" << x;
            const SpinFields f = spin_fields(geo, Spin::Up, ScalarConvention::Paper, p.k12, p.mass);
            EXPECT_TRUE(std::isfinite(f.dV) && std::isfinite(f.dA)) << "x=" << x;
        }
    }
}

TEST(ScalarPotential, Examples) {
    const double k = 2 * pi;
    const double m = 1.0;
    const double lu = -0.3, ld = -1.2;
    EXPECT_DOUBLE_EQ(scalar_potential_from(0.0, 0.0, lu, Spin::Up, ScalarConvention::Paper), lu);
    EXPECT_DOUBLE_EQ(scalar_potential_from(0.0, 0.0, ld, Spin::Down, ScalarConvention::Paper), ld + k * k / m);
    EXPECT_NEAR(scalar_potential_from(pi / 2, 0.0, lu, Spin::Up, ScalarConvention::Paper), lu + k * k / m, 1e-12);
    EXPECT_NEAR(scalar_potential_from(pi / 2, 0.0, ld, Spin::Down, ScalarConvention::Paper), ld, 1e-12);

    const double dth = 0.37;
    const double sum = scalar_potential_from(pi / 4, dth, lu, Spin::Up, ScalarConvention::Paper) +
                       scalar_potential_from(pi / 4, dth, ld, Spin::Down, ScalarConvention::Paper);
    EXPECT_NEAR(sum - (lu + ld), (2 * k * k * 0.5 * 1.5 + 2 * dth * dth) / (2 * m), 1e-12);

    // standard convention: s(1 - s) instead of s(1 + s)
    const double st = scalar_potential_from(pi / 4, dth, lu, Spin::Up, ScalarConvention::Standard);
    EXPECT_NEAR(st - lu, (k * k * 0.25 + dth * dth) / (2 * m), 1e-12);
    EXPECT_NEAR(scalar_potential_from(0.0, 0.0, ld, Spin::Down, ScalarConvention::Standard), ld, 1e-15);
}

TEST(ScalarPotential, ConventionParsing) {
    EXPECT_EQ(parse_scalar_convention("paper"), ScalarConvention::Paper);
    EXPECT_EQ(parse_scalar_convention("standard"), ScalarConvention::Standard);
    try {
        parse_scalar_convention("weird");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "scalarConvention");
    }
}

TEST(ScalarPotential, SpinFieldsAgreeWithDirectFormula) {
    for (Preset pr : {Preset::Fig3abc, Preset::Fig3def}) {
        const NormalizedParams p = fig3(pr);
        for (ScalarConvention conv : {ScalarConvention::Paper, ScalarConvention::Standard}) {
            for (int i = 0; i <= 60; ++i) {
                const double x = -15.0 + 0.5 * i;
                for (Chirality c : {Chirality::Left, Chirality::Right}) {
                    const LocalGeometry geo = local_geometry(p, x, c);
                    const EffectiveTwoLevel r = reduce(p, x, 0.0, c);
                    for (Spin s : {Spin::Up, Spin::Down}) {
                        const double branch = s == Spin::Up ? r.lambda1 : r.lambda2;
                        const double ref = scalar_potential_from(r.theta, geo.dtheta, branch, s, conv, p.k12, p.mass);
                        const double v = spin_fields(geo, s, conv, p.k12, p.mass).V;
                        EXPECT_NEAR(v, ref, 1e-11 * std::max(1.0, std::abs(ref)));
                    }
                }
            }
        }
    }
}

TEST(ScalarPotential, GradientMatchesFiniteDifference) {
    const double h = 1e-5;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-15.0, 15.0);
    for (Preset pr : {Preset::Fig3abc, Preset::Fig3def}) {
        const NormalizedParams p = fig3(pr);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng);
            const Chirality c = i % 2 ? Chirality::Right : Chirality::Left;
            for (Spin s : {Spin::Up, Spin::Down}) {
                const double fd = (scalar_potential(p, x + h, c, s) - scalar_potential(p, x - h, c, s)) / (2 * h);
                const double an = spin_fields(local_geometry(p, x, c), s, ScalarConvention::Paper, p.k12, p.mass).dV;
                EXPECT_LT(rel(an, fd, 1.0), 1e-6) << "x=" << x;
            }
        }
    }
}

TEST(MagneticField, OppositeForOppositeSpins) {
    const NormalizedParams p = fig3(Preset::Fig3abc);
    for (int i = 0; i < 100; ++i) {
        const double x = -20.0 + 0.4 * i;
        for (Chirality c : {Chirality::Left, Chirality::Right}) {
            EXPECT_EQ(magnetic_field(p, x, Spin::Up, c) + magnetic_field(p, x, Spin::Down, c), 0.0);
        }
    }
}

TEST(MagneticField, ConstantThetaGivesZero) {
    NormalizedParams p = fig3(Preset::Fig3abc);
    p.sigma12 = p.sigma13 = p.sigma23 = 1e150;
    EXPECT_LE(std::abs(magnetic_field(p, 2.0, Spin::Up, Chirality::Right)), 1e-250);
}

TEST(MagneticField, MatchesFiniteDifference) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-15.0, 15.0);
    const double h = 1e-4;
    for (Preset pr : {Preset::Fig3abc, Preset::Fig3def}) {
        const NormalizedParams p = fig3(pr);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng);
            const Chirality c = i % 2 ? Chirality::Right : Chirality::Left;
            for (Spin s : {Spin::Up, Spin::Down}) {
                const double fd =
                    -(vector_potential(theta_oracle(p, x + h, c), s, p.k12) -
                      vector_potential(theta_oracle(p, x - h, c), s, p.k12)) / (2 * h);
                EXPECT_LT(rel(magnetic_field(p, x, s, c), fd, 1e-3), 1e-6) << "x=" << x;
            }
        }
    }
}

TEST(Adiabaticity, Examples) {
    const NormalizedParams p = fig3(Preset::Fig3def);
    EXPECT_EQ(adiabaticity_ratio(p, 0.3, 0.0, Chirality::Left), 0.0);

    NormalizedParams dark = p;
    dark.rabi12 = dark.rabi13 = dark.rabi23 = 0.0;
    EXPECT_EQ(adiabaticity_ratio(dark, 0.3, 1.0, Chirality::Left), std::numeric_limits<double>::infinity());
    EXPECT_TRUE(local_geometry(dark, 0.3, Chirality::Left).degenerate);
    EXPECT_EQ(theta_gradient(dark, 0.3, Chirality::Left), 0.0);
}

TEST(Adiabaticity, WeakCouplingSetAtOrigin) {
    // eta = v sqrt(theta'^2 + (k sin 2theta / 2)^2) / gap, evaluated here from the
    // closed-form x = 0 values: D = 0, so sin 2theta = +-1 and gap = 2 |g|
    const NormalizedParams p = fig3(Preset::Fig3def);
    const double v = p.gravity * 1.0;
    const double c0 = p.rabi13 * p.rabi23 / p.detuning;
    const double e = std::exp(-0.18);
    const double d1 = -c0 * (0.12 * e) - c0 * (0.12 * e);  // D'(0) = Lambda1' - Lambda2'
    for (Chirality c : {Chirality::Left, Chirality::Right}) {
        const double g = chirality_sign(c) * p.rabi12 - c0 * e;
        const double dth = -g * d1 / (4 * g * g);
        const double oracle = v * std::hypot(dth, 0.5 * p.k12) / (2 * std::abs(g));
        EXPECT_NEAR(adiabaticity_ratio(p, 0.0, v, c), oracle, 1e-12 * oracle);
    }
    // the right-handed branch is well inside the adiabatic regime; the left-handed one,
    // whose gap at the origin is smaller by (1 + e^-0.18)/(1 - e^-0.18) ~ 11, sits at 0.15
    EXPECT_LT(adiabaticity_ratio(p, 0.0, v, Chirality::Right), 0.1);
    EXPECT_LT(adiabaticity_ratio(p, 0.0, v, Chirality::Left), 0.2);
}

TEST(Gauge, ChiralitySwapIsExact) {
    for (Preset pr : {Preset::Fig3abc, Preset::Fig3def}) {
        const NormalizedParams p = fig3(pr);
        NormalizedParams flipped = p;
        flipped.rabi12 = -p.rabi12;
        for (int i = 0; i <= 200; ++i) {
            const double x = -20.0 + 0.2 * i;
            const GaugePoint a = gauge_point(p, x, Chirality::Left, ScalarConvention::Paper, 3.0);
            const GaugePoint b = gauge_point(flipped, x, Chirality::Right, ScalarConvention::Paper, 3.0);
            EXPECT_EQ(a.A_up, b.A_up);
            EXPECT_EQ(a.A_down, b.A_down);
            EXPECT_EQ(a.V_up, b.V_up);
            EXPECT_EQ(a.V_down, b.V_down);
            EXPECT_EQ(a.B_up, b.B_up);
            EXPECT_EQ(a.theta, b.theta);
            EXPECT_EQ(a.dThetaDx, b.dThetaDx);
            EXPECT_EQ(a.adiabaticRatio, b.adiabaticRatio);
        }
    }
}

TEST(Gauge, SpectrumIndependentOfZ) {
    const NormalizedParams p = fig3(Preset::Fig3def);
    for (double x : {-4.0, 0.5, 8.0}) {
        const EffectiveTwoLevel a = reduce(p, x, 0.0, Chirality::Right);
        for (double z : {0.1, 0.77, 13.2}) {
            const EffectiveTwoLevel b = reduce(p, x, z, Chirality::Right);
            EXPECT_EQ(a.lambda1, b.lambda1);
            EXPECT_EQ(a.lambda2, b.lambda2);
            EXPECT_EQ(a.theta, b.theta);
        }
    }
}
