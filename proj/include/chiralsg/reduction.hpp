#pragma once

// Adiabatic elimination of the excited level |3> and the resulting
// position-dependent two-level structure, plus an exact 3x3 eigen-solver that
// serves as the reference for the elimination.
//
// Coupling convention: the 1-2 coupling is carried as a signed real amplitude
// g(x) with phase Phi = -k12 z, i.e. g e^{i Phi} = Omega12 - Omega13 Omega23^* / Delta.
// g changes sign smoothly where the polar form would jump its phase by pi.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "beams.hpp"
#include "jet.hpp"
#include "units.hpp"

namespace chiralsg {

/// Lambda1, Lambda2 and the signed coupling g as functions of x (with derivatives).
struct CouplingJets {
    Jet<double> shift1;
    Jet<double> shift2;
    Jet<double> coupling;
};

inline CouplingJets coupling_jets(const NormalizedParams& p, double x, Chirality c) {
    const BeamTriple beams = make_beams(p);
    const Jet<double> e12 = envelope_jet(beams.b12, x);
    const Jet<double> e13 = envelope_jet(beams.b13, x);
    const Jet<double> e23 = envelope_jet(beams.b23, x);
    const double invDelta = 1.0 / p.detuning;

    CouplingJets out;
    out.shift1 = -invDelta * (e13 * e13);
    out.shift2 = -invDelta * (e23 * e23);
    out.coupling = chirality_sign(c) * e12 - invDelta * (e13 * e23);
    return out;
}

struct EnergyShifts {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

/// Lambda_j = -|Omega_j3(x)|^2 / Delta.
inline EnergyShifts energy_shifts(const NormalizedParams& p, double x) {
    const BeamTriple beams = make_beams(p);
    const double a13 = envelope(beams.b13, x);
    const double a23 = envelope(beams.b23, x);
    return {-a13 * a13 / p.detuning, -a23 * a23 / p.detuning};
}

struct EffectiveCoupling {
    double g = 0.0;      // signed real amplitude
    double phase = 0.0;  // Phi = -k12 z
};

inline EffectiveCoupling effective_coupling(const NormalizedParams& p, double x, double z,
                                            Chirality c) {
    const BeamTriple beams = make_beams(p);
    const double g = chirality_sign(c) * envelope(beams.b12, x) -
                     envelope(beams.b13, x) * envelope(beams.b23, x) / p.detuning;
    return {g, -p.k12 * z};
}

/// theta = atan2(2g, Lambda1 - Lambda2) / 2 in (-pi/2, pi/2]; theta(0, 0, 0) = 0.
inline double mixing_angle(double shift1, double shift2, double g) {
    const double d = shift1 - shift2;
    if (g == 0.0) return d < 0.0 ? std::numbers::pi / 2 : 0.0;
    return 0.5 * std::atan2(2.0 * g, d);
}

struct DressedEnergies {
    double upper = 0.0;  // lambda_1, spin up
    double lower = 0.0;  // lambda_2, spin down
};

/// lambda_1 = Lambda_1 + g tan(theta), lambda_2 = Lambda_2 - g tan(theta), switching to
/// the closed form (sum +- gap)/2 where tan(theta) blows up.
inline DressedEnergies eigenvalues(double shift1, double shift2, double g, double theta) {
    if (std::abs(theta) > std::numbers::pi / 2 - 1e-6) {
        const double mean = 0.5 * (shift1 + shift2);
        const double half_gap = 0.5 * std::hypot(shift1 - shift2, 2.0 * g);
        return {mean + half_gap, mean - half_gap};
    }
    const double t = g * std::tan(theta);
    return {shift1 + t, shift2 - t};
}

/// Amplitudes on the bare states |1>, |2>.
struct DressedState {
    std::complex<double> c1;
    std::complex<double> c2;
};

struct DressedPair {
    DressedState up;    // |chi_1>
    DressedState down;  // |chi_2>
};

inline DressedPair dressed_states(double theta, double phase) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::complex<double> rot = std::polar(1.0, -phase);
    return {{c, rot * s}, {-s, rot * c}};
}

/// Everything the reduction knows about one point for one chirality.
struct EffectiveTwoLevel {
    double shift1 = 0.0;
    double shift2 = 0.0;
    double g = 0.0;
    double phase = 0.0;
    double theta = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

inline EffectiveTwoLevel reduce(const NormalizedParams& p, double x, double z, Chirality c) {
    const EnergyShifts shifts = energy_shifts(p, x);
    const EffectiveCoupling coupling = effective_coupling(p, x, z, c);
    EffectiveTwoLevel r;
    r.shift1 = shifts.lambda1;
    r.shift2 = shifts.lambda2;
    r.g = coupling.g;
    r.phase = coupling.phase;
    r.theta = mixing_angle(r.shift1, r.shift2, r.g);
    const DressedEnergies e = eigenvalues(r.shift1, r.shift2, r.g, r.theta);
    r.lambda1 = e.upper;
    r.lambda2 = e.lower;
    return r;
}

/// Dense 3x3 complex matrix, row-major. Only Hermitian matrices are meaningful here.
template <typename Real>
struct HermitianMatrix3 {
    std::array<std::complex<Real>, 9> a{};

    std::complex<Real>& operator()(int i, int j) { return a[3 * i + j]; }
    const std::complex<Real>& operator()(int i, int j) const { return a[3 * i + j]; }

    Real frobenius_norm() const {
        Real s{};
        for (const auto& v : a) s += std::norm(v);
        return std::sqrt(s);
    }

    bool is_hermitian(Real tol) const {
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
            }
        }
        return true;
    }

    template <typename To>
    HermitianMatrix3<To> cast() const {
        HermitianMatrix3<To> out;
        for (std::size_t k = 0; k < 9; ++k) {
            out.a[k] = std::complex<To>(static_cast<To>(a[k].real()), static_cast<To>(a[k].imag()));
        }
        return out;
    }
};

/// H' = Delta |3><3| + sum_{j<l} Omega_jl |j><l| + h.c., with Omega12 carrying the
/// chirality sign.
inline HermitianMatrix3<double> full_three_level(const NormalizedParams& p, double x, double z,
                                                 Chirality c) {
    const BeamTriple beams = make_beams(p);
    const std::complex<double> o12 = chirality_sign(c) * rabi(beams.b12, x, z);
    const std::complex<double> o13 = rabi(beams.b13, x, z);
    const std::complex<double> o23 = rabi(beams.b23, x, z);

    HermitianMatrix3<double> h;
    h(2, 2) = p.detuning;
    h(0, 1) = o12;
    h(0, 2) = o13;
    h(1, 2) = o23;
    h(1, 0) = std::conj(o12);
    h(2, 0) = std::conj(o13);
    h(2, 1) = std::conj(o23);
    return h;
}

/// Ascending eigenvalues of a Hermitian 3x3 matrix.
///
/// Cyclic Jacobi on the real symmetric 6x6 embedding [[Re H, -Im H], [Im H, Re H]],
/// whose spectrum is that of H with every eigenvalue doubled. Sweeps until the
/// off-diagonal norm drops below min(1e-14, 64 eps) * ||H||.
template <typename Real>
std::array<Real, 3> exact_eigs(const HermitianMatrix3<Real>& h) {
    const Real norm = h.frobenius_norm();
    if (!h.is_hermitian(Real(1e-12) * std::max(norm, Real(1)))) {
        throw std::invalid_argument("exact_eigs: matrix is not Hermitian");
    }

    constexpr int n = 6;
    std::array<std::array<Real, n>, n> m{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const Real re = h(i, j).real();
            const Real im = h(i, j).imag();
            m[i][j] = re;
            m[i + 3][j + 3] = re;
            m[i][j + 3] = -im;
            m[i + 3][j] = im;
        }
    }

    const Real tol = std::min(Real(1e-14), Real(64) * std::numeric_limits<Real>::epsilon()) * norm;
    auto off_norm = [&] {
        Real s{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) s += m[i][j] * m[i][j];
        return std::sqrt(s);
    };

    for (int sweep = 0; off_norm() > tol; ++sweep) {
        if (sweep > 100) throw std::runtime_error("exact_eigs: Jacobi iteration did not converge");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (m[p][q] == Real(0)) continue;
                const Real tau = (m[q][q] - m[p][p]) / (Real(2) * m[p][q]);
                const Real t = (tau >= Real(0) ? Real(1) : Real(-1)) /
                               (std::abs(tau) + std::sqrt(Real(1) + tau * tau));
                const Real cs = Real(1) / std::sqrt(Real(1) + t * t);
                const Real sn = t * cs;
                for (int k = 0; k < n; ++k) {
                    const Real mkp = m[k][p];
                    const Real mkq = m[k][q];
                    m[k][p] = cs * mkp - sn * mkq;
                    m[k][q] = sn * mkp + cs * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const Real mpk = m[p][k];
                    const Real mqk = m[q][k];
                    m[p][k] = cs * mpk - sn * mqk;
                    m[q][k] = sn * mpk + cs * mqk;
                }
            }
        }
    }

    std::array<Real, n> diag{};
    for (int i = 0; i < n; ++i) diag[i] = m[i][i];
    std::sort(diag.begin(), diag.end());
    return {diag[0], diag[2], diag[4]};
}

struct ReductionError {
    double upper = 0.0;  // |lambda_1 - exact|
    double lower = 0.0;  // |lambda_2 - exact|
};

/// Distance between the eliminated two-level spectrum and the exact spectrum of the
/// full cyclic Hamiltonian. The exact level near Delta is the one that was eliminated.
/// `Real` selects the precision of the reference diagonalization.
template <typename Real = double>
ReductionError reduction_error(const NormalizedParams& p, double x, double z, Chirality c) {
    const EffectiveTwoLevel r = reduce(p, x, z, c);
    const auto exact = exact_eigs(full_three_level(p, x, z, c).template cast<Real>());
    const Real lo = p.detuning > 0 ? exact[0] : exact[1];
    const Real hi = p.detuning > 0 ? exact[1] : exact[2];
    return {static_cast<double>(std::abs(static_cast<Real>(r.lambda1) - hi)),
            static_cast<double>(std::abs(static_cast<Real>(r.lambda2) - lo))};
}

}  // namespace chiralsg
