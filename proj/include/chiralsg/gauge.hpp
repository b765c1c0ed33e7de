#pragma once

// Spin-dependent induced gauge potentials in the dressed basis.
//
// With the beams independent of y and the dressed phase Phi = -k12 z, the vector
// potential has only a z-component that depends on x alone:
//   A_up = -k12 sin^2(theta),  A_down = -k12 cos^2(theta),
// so B = curl A = -dA_z/dx along y. Every derivative here is analytic.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "jet.hpp"
#include "reduction.hpp"
#include "units.hpp"

namespace chiralsg {

/// Which geometric term enters the scalar potential.
///  Paper:    V = lambda + (<grad chi|grad chi> + |<chi|grad chi>|^2) / 2m
///  Standard: V = lambda + (<grad chi|grad chi> - |<chi|grad chi>|^2) / 2m
enum class ScalarConvention { Paper, Standard };

inline ScalarConvention parse_scalar_convention(std::string_view tag) {
    if (tag == "paper") return ScalarConvention::Paper;
    if (tag == "standard") return ScalarConvention::Standard;
    throw ValidationError("scalarConvention",
                          "unknown convention '" + std::string(tag) + "' (expected paper or standard)");
}

constexpr std::string_view to_string(ScalarConvention c) noexcept {
    return c == ScalarConvention::Paper ? "paper" : "standard";
}

/// Physics switches for the center-of-mass model.
struct FieldModel {
    ScalarConvention convention = ScalarConvention::Paper;
    bool gaugeFields = true;  // false: plain free fall, no optical potentials
};

inline double vector_potential(double theta, Spin spin, double k12 = two_pi) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return spin == Spin::Up ? -k12 * s * s : -k12 * c * c;
}

/// theta(x), lambda_{1,2}(x) and their x-derivatives for one chirality.
///
/// The trigonometric functions of theta are formed algebraically from
/// cos(2 theta) = D/r and sin(2 theta) = 2g/r with D = Lambda1 - Lambda2 and
/// r = sqrt(D^2 + 4 g^2); the branch energies use (Lambda1 + Lambda2 +- r)/2.
struct LocalGeometry {
    double shift1 = 0.0;  // Lambda_1
    double shift2 = 0.0;  // Lambda_2
    double g = 0.0;
    double sinsq = 0.0;   // sin^2 theta
    double cossq = 1.0;   // cos^2 theta
    double sin2 = 0.0;    // sin 2 theta
    double dtheta = 0.0;
    double d2theta = 0.0;
    double upper = 0.0;   // lambda_1
    double lower = 0.0;   // lambda_2
    double dupper = 0.0;
    double dlower = 0.0;
    double gap = 0.0;     // lambda_1 - lambda_2 >= 0
    bool degenerate = false;

    double theta() const { return mixing_angle(shift1, shift2, g); }
};

inline LocalGeometry local_geometry(const NormalizedParams& p, double x, Chirality c) {
    const CouplingJets j = coupling_jets(p, x, c);
    const Jet<double> d = j.shift1 - j.shift2;
    const Jet<double>& g = j.coupling;

    LocalGeometry geo;
    geo.shift1 = j.shift1.v;
    geo.shift2 = j.shift2.v;
    geo.g = g.v;

    const double mean = 0.5 * (j.shift1.v + j.shift2.v);
    const double half_dsum = 0.5 * (j.shift1.d1 + j.shift2.d1);
    // hypot and the r-scaled quotients below keep everything finite far out in the
    // beam tails, where D^2 + 4 g^2 itself would underflow.
    const double r = std::hypot(d.v, 2.0 * g.v);
    if (r == 0.0) {
        geo.degenerate = true;
        geo.upper = mean;
        geo.lower = mean;
        geo.dupper = half_dsum;
        geo.dlower = half_dsum;
        return geo;
    }
    geo.gap = r;
    geo.upper = mean + 0.5 * r;
    geo.lower = mean - 0.5 * r;

    const double cos2 = d.v / r;
    geo.sin2 = 2.0 * g.v / r;
    // The smaller of sin^2, cos^2 is formed without cancellation.
    if (d.v >= 0.0) {
        geo.sinsq = geo.sin2 * g.v / (r + d.v);
        geo.cossq = 1.0 - geo.sinsq;
    } else {
        geo.cossq = geo.sin2 * g.v / (r - d.v);
        geo.sinsq = 1.0 - geo.cossq;
    }

    // theta' = (D g' - g D') / r^2; each factor is divided by r once.
    const double num = cos2 * g.d1 - 0.5 * geo.sin2 * d.d1;
    const double dnum = cos2 * g.d2 - 0.5 * geo.sin2 * d.d2;
    const double dq = 2.0 * cos2 * d.d1 + 4.0 * geo.sin2 * g.d1;  // (r^2)' / r
    geo.dtheta = num / r;
    geo.d2theta = (dnum - geo.dtheta * dq) / r;

    geo.dupper = half_dsum + 0.25 * dq;
    geo.dlower = half_dsum - 0.25 * dq;
    return geo;
}

inline double theta_gradient(const NormalizedParams& p, double x, Chirality c) {
    return local_geometry(p, x, c).dtheta;
}

/// Vector and scalar potential of one spin branch with their x-derivatives.
struct SpinFields {
    double A = 0.0;
    double dA = 0.0;
    double V = 0.0;
    double dV = 0.0;
};

/// V_sigma from its ingredients: branch energy, theta and theta'.
inline double scalar_potential_from(double theta, double dtheta, double branch_energy, Spin spin,
                                    ScalarConvention conv, double k12 = two_pi, double mass = 1.0) {
    const double sn = std::sin(theta);
    const double cs = std::cos(theta);
    const double s = spin == Spin::Up ? sn * sn : cs * cs;
    const double geometric = conv == ScalarConvention::Paper ? s * (1.0 + s) : s * (1.0 - s);
    return branch_energy + (k12 * k12 * geometric + dtheta * dtheta) / (2.0 * mass);
}

inline SpinFields spin_fields(const LocalGeometry& geo, Spin spin, ScalarConvention conv,
                              double k12, double mass) {
    const double slope = geo.sin2 * geo.dtheta;  // d(sin^2 theta)/dx

    const bool up = spin == Spin::Up;
    const double s = up ? geo.sinsq : geo.cossq;
    const double ds = up ? slope : -slope;
    const double energy = up ? geo.upper : geo.lower;
    const double denergy = up ? geo.dupper : geo.dlower;

    const double sign = conv == ScalarConvention::Paper ? 1.0 : -1.0;
    const double geometric = s * (1.0 + sign * s);
    const double dgeometric = (1.0 + 2.0 * sign * s) * ds;

    SpinFields f;
    f.A = -k12 * s;
    f.dA = -k12 * ds;
    f.V = energy + (k12 * k12 * geometric + geo.dtheta * geo.dtheta) / (2.0 * mass);
    f.dV = denergy + (k12 * k12 * dgeometric + 2.0 * geo.dtheta * geo.d2theta) / (2.0 * mass);
    return f;
}

inline double scalar_potential(const NormalizedParams& p, double x, Chirality c, Spin spin,
                               ScalarConvention conv = ScalarConvention::Paper) {
    return spin_fields(local_geometry(p, x, c), spin, conv, p.k12, p.mass).V;
}

/// B_y = -dA_z/dx.
inline double magnetic_field(const NormalizedParams& p, double x, Spin spin, Chirality c) {
    return -spin_fields(local_geometry(p, x, c), spin, ScalarConvention::Paper, p.k12, p.mass).dA;
}

/// eta = |v| |A_12| / (lambda_1 - lambda_2) with |A_12|^2 = theta'^2 + (k12 sin(2 theta) / 2)^2.
/// Zero for v = 0, +infinity at a degeneracy.
inline double adiabaticity_ratio(const LocalGeometry& geo, double speed, double k12) {
    if (speed == 0.0) return 0.0;
    if (geo.degenerate || geo.gap == 0.0) return std::numeric_limits<double>::infinity();
    const double offdiag = 0.5 * k12 * geo.sin2;
    return std::abs(speed) * std::sqrt(geo.dtheta * geo.dtheta + offdiag * offdiag) / geo.gap;
}

inline double adiabaticity_ratio(const NormalizedParams& p, double x, double speed, Chirality c) {
    return adiabaticity_ratio(local_geometry(p, x, c), speed, p.k12);
}

struct GaugePoint {
    double A_up = 0.0;
    double A_down = 0.0;
    double V_up = 0.0;
    double V_down = 0.0;
    double B_up = 0.0;
    double B_down = 0.0;
    double theta = 0.0;
    double dThetaDx = 0.0;
    double adiabaticRatio = 0.0;
};

inline GaugePoint gauge_point(const NormalizedParams& p, double x, Chirality c,
                              ScalarConvention conv = ScalarConvention::Paper, double speed = 0.0) {
    const LocalGeometry geo = local_geometry(p, x, c);
    const SpinFields up = spin_fields(geo, Spin::Up, conv, p.k12, p.mass);
    const SpinFields down = spin_fields(geo, Spin::Down, conv, p.k12, p.mass);
    GaugePoint gp;
    gp.A_up = up.A;
    gp.A_down = down.A;
    gp.V_up = up.V;
    gp.V_down = down.V;
    gp.B_up = -up.dA;
    gp.B_down = -down.dA;
    gp.theta = geo.theta();
    gp.dThetaDx = geo.dtheta;
    gp.adiabaticRatio = adiabaticity_ratio(geo, speed, p.k12);
    return gp;
}

}  // namespace chiralsg
