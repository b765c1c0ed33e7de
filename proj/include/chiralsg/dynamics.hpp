#pragma once

// Classical center-of-mass motion in the induced gauge fields:
//   dx/dt = p_x/m,  dz/dt = (p_z - A_z)/m,  dp_z/dt = m G,
//   dp_x/dt = [(dA_z/dx) p_z - A_z dA_z/dx]/m - dV/dx,
// which is Hamiltonian with H = [p_x^2 + (p_z - A_z)^2]/2m + V(x) - m G z.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gauge.hpp"
#include "units.hpp"

namespace chiralsg {

struct PhaseSpaceState {
    double x = 0.0;
    double z = 0.0;
    double px = 0.0;
    double pz = 0.0;

    bool finite() const {
        return std::isfinite(x) && std::isfinite(z) && std::isfinite(px) && std::isfinite(pz);
    }

    friend constexpr bool operator==(const PhaseSpaceState&, const PhaseSpaceState&) = default;
};

constexpr PhaseSpaceState operator+(const PhaseSpaceState& a, const PhaseSpaceState& b) {
    return {a.x + b.x, a.z + b.z, a.px + b.px, a.pz + b.pz};
}

constexpr PhaseSpaceState operator*(double s, const PhaseSpaceState& a) {
    return {s * a.x, s * a.z, s * a.px, s * a.pz};
}

/// Non-finite state during integration. Context is appended as it propagates.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Field evaluator for one species.
class SpeciesDynamics {
public:
    SpeciesDynamics(const NormalizedParams& params, Species species, FieldModel model = {})
        : params_(params), species_(species), model_(model) {}

    struct Evaluation {
        PhaseSpaceState rate;
        SpinFields fields;
        LocalGeometry geometry;
    };

    Evaluation evaluate(const PhaseSpaceState& s) const {
        Evaluation e;
        if (model_.gaugeFields) {
            e.geometry = local_geometry(params_, s.x, species_.chirality);
            e.fields = spin_fields(e.geometry, species_.spin, model_.convention, params_.k12, params_.mass);
        }
        const double m = params_.mass;
        const SpinFields& f = e.fields;
        e.rate.x = s.px / m;
        e.rate.z = (s.pz - f.A) / m;
        e.rate.px = (f.dA * s.pz - f.A * f.dA) / m - f.dV;
        e.rate.pz = m * params_.gravity;
        return e;
    }

    PhaseSpaceState operator()(const PhaseSpaceState& s) const { return evaluate(s).rate; }

    /// Conserved energy given the fields already evaluated at `s`.
    double energy(const PhaseSpaceState& s, const SpinFields& f) const {
        const double m = params_.mass;
        const double kz = s.pz - f.A;
        return (s.px * s.px + kz * kz) / (2.0 * m) + f.V - m * params_.gravity * s.z;
    }

    double energy(const PhaseSpaceState& s) const { return energy(s, evaluate(s).fields); }

    double adiabaticity(const Evaluation& e) const {
        if (!model_.gaugeFields) return 0.0;
        return adiabaticity_ratio(e.geometry, std::sqrt(e.rate.x * e.rate.x + e.rate.z * e.rate.z), params_.k12);
    }

    const NormalizedParams& params() const { return params_; }
    Species species() const { return species_; }
    const FieldModel& model() const { return model_; }

private:
    NormalizedParams params_;
    Species species_;
    FieldModel model_;
};

inline PhaseSpaceState eom_rhs(const PhaseSpaceState& s, Spin spin, Chirality c,
                               const NormalizedParams& params, FieldModel model = {}) {
    return SpeciesDynamics(params, {c, spin}, model)(s);
}

/// Classical fourth-order Runge-Kutta step. dt = 0 returns `s` unchanged; a negative
/// dt steps backwards in time.
template <typename Rhs>
PhaseSpaceState rk4_step(const PhaseSpaceState& s, double dt, Rhs&& rhs, const PhaseSpaceState& k1) {
    if (dt == 0.0) return s;
    const PhaseSpaceState k2 = rhs(s + (0.5 * dt) * k1);
    const PhaseSpaceState k3 = rhs(s + (0.5 * dt) * k2);
    const PhaseSpaceState k4 = rhs(s + dt * k3);
    const PhaseSpaceState next = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.finite()) throw IntegrationError("non-finite state after RK4 step");
    return next;
}

template <typename Rhs>
PhaseSpaceState rk4_step(const PhaseSpaceState& s, double dt, Rhs&& rhs) {
    if (dt == 0.0) return s;
    return rk4_step(s, dt, rhs, rhs(s));
}

struct IntegratorConfig {
    double dt = 1e-4;
    double tFinal = 1.25;
    std::vector<double> snapshotTimes{0.0, 0.25, 0.5, 0.75, 1.0, 1.25};

    /// Step index of t, or -1 if t is not an integer multiple of dt.
    std::int64_t step_of(double t) const {
        const double n = t / dt;
        const double rounded = std::round(n);
        if (std::abs(n - rounded) > 1e-9 * std::max(1.0, std::abs(n))) return -1;
        return static_cast<std::int64_t>(rounded);
    }

    std::vector<std::pair<std::string, std::string>> violations() const {
        std::vector<std::pair<std::string, std::string>> out;
        if (!(std::isfinite(dt) && dt > 0.0)) {
            out.emplace_back("integrator.dt", "must be a finite positive number");
            return out;
        }
        if (!(std::isfinite(tFinal) && tFinal >= 0.0)) {
            out.emplace_back("integrator.tFinal", "must be finite and non-negative");
        } else if (step_of(tFinal) < 0) {
            out.emplace_back("integrator.tFinal", "must be an integer multiple of dt");
        }
        if (snapshotTimes.empty()) out.emplace_back("integrator.snapshotTimes", "must not be empty");
        for (std::size_t i = 0; i < snapshotTimes.size(); ++i) {
            const double t = snapshotTimes[i];
            std::ostringstream where;
            where << "integrator.snapshotTimes[" << i << "]";
            if (!std::isfinite(t) || t < 0.0 || t > tFinal) {
                out.emplace_back(where.str(), "must lie in [0, tFinal]");
            } else if (step_of(t) < 0) {
                out.emplace_back(where.str(), "must be an integer multiple of dt");
            }
            if (i > 0 && !(t > snapshotTimes[i - 1])) {
                out.emplace_back(where.str(), "snapshot times must be strictly ascending");
            } else if (i > 0 && dt > (t - snapshotTimes[i - 1]) * (1.0 + 1e-9)) {
                out.emplace_back("integrator.dt", "must not exceed the snapshot spacing");
            }
        }
        return out;
    }

    void validate() const {
        for (const auto& v : violations()) throw ValidationError(v.first, v.second);
    }
};

struct EnergyDiagnostic {
    double initial = 0.0;
    double maxDrift = 0.0;  // max |E(t) - E0| / max(|E0|, 1)
};

struct Trajectory {
    std::vector<PhaseSpaceState> snapshots;
    EnergyDiagnostic energy;
    double maxAdiabaticity = 0.0;
};

inline Trajectory integrate(const SpeciesDynamics& dyn, const PhaseSpaceState& s0,
                            const IntegratorConfig& cfg) {
    cfg.validate();
    std::vector<std::int64_t> marks;
    marks.reserve(cfg.snapshotTimes.size());
    for (double t : cfg.snapshotTimes) marks.push_back(cfg.step_of(t));
    const std::int64_t total = cfg.step_of(cfg.tFinal);

    Trajectory traj;
    traj.snapshots.reserve(marks.size());
    PhaseSpaceState s = s0;
    std::size_t next_mark = 0;
    double e0 = 0.0;
    double scale = 1.0;

    for (std::int64_t step = 0;; ++step) {
        while (next_mark < marks.size() && marks[next_mark] == step) {
            traj.snapshots.push_back(s);
            ++next_mark;
        }
        const auto eval = dyn.evaluate(s);
        const double e = dyn.energy(s, eval.fields);
        if (step == 0) {
            e0 = e;
            scale = std::max(std::abs(e0), 1.0);
            traj.energy.initial = e0;
        }
        traj.energy.maxDrift = std::max(traj.energy.maxDrift, std::abs(e - e0) / scale);
        traj.maxAdiabaticity = std::max(traj.maxAdiabaticity, dyn.adiabaticity(eval));
        if (step == total) break;
        try {
            s = rk4_step(s, cfg.dt, dyn, eval.rate);
        } catch (const IntegrationError& err) {
            std::ostringstream msg;
            msg << err.what() << " at t=" << static_cast<double>(step + 1) * cfg.dt;
            throw IntegrationError(msg.str());
        }
    }
    return traj;
}

inline Trajectory integrate(const PhaseSpaceState& s0, Spin spin, Chirality c,
                            const NormalizedParams& params, const IntegratorConfig& cfg,
                            FieldModel model = {}) {
    return integrate(SpeciesDynamics(params, {c, spin}, model), s0, cfg);
}

}  // namespace chiralsg
