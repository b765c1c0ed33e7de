#pragma once

// Gaussian Rabi envelopes of the three driving lasers. All beams co-propagate
// along -z and are independent of y.

#include <cmath>
#include <complex>

#include "jet.hpp"
#include "units.hpp"

namespace chiralsg {

struct GaussianBeam {
    double amplitude = 0.0;  // real peak Rabi frequency
    double center = 0.0;
    double width = 1.0;
    double wavevector = 0.0;
};

/// Omega0 exp(-(x - xc)^2 / sigma^2) exp(-i k z).
inline std::complex<double> rabi(const GaussianBeam& b, double x, double z) {
    const double u = x - b.center;
    const double env = b.amplitude * std::exp(-u * u / (b.width * b.width));
    return std::polar(env, -b.wavevector * z);
}

inline double envelope(const GaussianBeam& b, double x) {
    const double u = x - b.center;
    return b.amplitude * std::exp(-u * u / (b.width * b.width));
}

inline double envelope_dx(const GaussianBeam& b, double x) {
    const double u = x - b.center;
    const double w2 = b.width * b.width;
    return -2.0 * u / w2 * b.amplitude * std::exp(-u * u / w2);
}

/// Envelope with first and second x-derivatives.
inline Jet<double> envelope_jet(const GaussianBeam& b, double x) {
    return b.amplitude * gaussian_jet(x, b.center, b.width);
}

struct BeamTriple {
    GaussianBeam b12;
    GaussianBeam b13;
    GaussianBeam b23;
};

/// k12 + k23 - k13 == 0, compared exactly.
inline bool check_closure(const BeamTriple& t) {
    return t.b12.wavevector + t.b23.wavevector - t.b13.wavevector == 0.0;
}

/// Beam 1-2 centred at 0, 1-3 at +offset, 2-3 at -offset.
inline BeamTriple make_beams(const NormalizedParams& p) {
    BeamTriple t;
    t.b12 = {p.rabi12, 0.0, p.sigma12, p.k12};
    t.b13 = {p.rabi13, p.beamOffset, p.sigma13, p.k13()};
    t.b23 = {p.rabi23, -p.beamOffset, p.sigma23, p.k23};
    return t;
}

}  // namespace chiralsg
