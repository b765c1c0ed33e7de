#pragma once

// Self-check suite behind `chiralsg validate`: every check compares the production
// path against an independent route (exact diagonalization, finite differences,
// closed-form motion, resolution study, symmetry).

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "dynamics.hpp"
#include "ensemble.hpp"
#include "gauge.hpp"
#include "reduction.hpp"
#include "units.hpp"

namespace chiralsg {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string comparison;  // "<=", "<", ">=", "==", or "~" (target value, range in detail)
    bool passed = false;
    std::string detail;
};

struct ValidationOptions {
    unsigned threads = 1;
    bool injectVectorPotentialSignError = false;  // mutation hook for the harness
    std::optional<NormalizedParams> params;       // replaces the fig3abc set when given
};

inline NormalizedParams preset_params(Preset preset) {
    RunConfig cfg;
    apply_preset(cfg, preset);
    return normalize(cfg.physical);
}

namespace validation {

inline double rel_err(double a, double b, double floor) {
    return std::abs(a - b) / std::max(std::abs(b), floor);
}

/// Non-degenerate sample points: x uniform in [-15, 15], both chiralities alternating.
inline std::vector<std::pair<double, Chirality>> sample_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-15.0, 15.0);
    std::vector<std::pair<double, Chirality>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(ux(rng), i % 2 == 0 ? Chirality::Left : Chirality::Right);
    }
    return out;
}

inline double wrap_half_turn(double d) {
    return d - std::numbers::pi * std::round(d / std::numbers::pi);
}

}  // namespace validation

/// max |A_up + A_down + k12| / k12 and max |B_up + B_down| / k12^2 on a 10^4-point grid.
inline CheckResult check_gauge_identity(const NormalizedParams& p, bool inject_sign_error = false) {
    const std::size_t n = 10000;
    double worst = 0.0;
    const double k = p.k12;
    for (Chirality c : {Chirality::Left, Chirality::Right}) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -30.0 + 60.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            const GaugePoint gp = gauge_point(p, x, c);
            const double a_up = inject_sign_error ? -gp.A_up : gp.A_up;
            worst = std::max(worst, std::abs(a_up + gp.A_down + k) / k);
            worst = std::max(worst, std::abs(gp.B_up + gp.B_down) / (k * k));
        }
    }
    return {"gauge_identity", worst, 1e-12, "<=", worst <= 1e-12,
            "A_up + A_down = -k12 and B_up = -B_down, in k12 units"};
}

/// Largest |lambda_j - exact_j| / |Lambda_1| over sample points in [-10, 10].
inline double max_reduction_error(const NormalizedParams& p, std::size_t points) {
    double worst = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double x = -10.0 + 20.0 * static_cast<double>(i) / static_cast<double>(points - 1);
        const double z = 0.37 * static_cast<double>(i % 7);
        for (Chirality c : {Chirality::Left, Chirality::Right}) {
            const ReductionError e = reduction_error<long double>(p, x, z, c);
            const double scale = std::abs(energy_shifts(p, x).lambda1);
            worst = std::max(worst, std::max(e.upper, e.lower) / scale);
        }
    }
    return worst;
}

inline CheckResult check_reduction_accuracy(const NormalizedParams& p) {
    const double worst = max_reduction_error(p, 100);
    return {"reduction_accuracy", worst, 1e-3, "<=", worst < 1e-3,
            "max |lambda_j - exact| / |Lambda_1| at 100 points"};
}

/// Error shrink factor when the detuning doubles at fixed Rabi amplitudes.
inline CheckResult check_reduction_scaling(const NormalizedParams& p) {
    NormalizedParams doubled = p;
    doubled.detuning *= 2.0;
    const double ratio = max_reduction_error(p, 100) / max_reduction_error(doubled, 100);
    return {"reduction_scaling", ratio, 2.0, ">=", ratio >= 2.0,
            "error(Delta) / error(2 Delta) with the Rabi amplitudes fixed"};
}

inline CheckResult check_theta_gradient(const NormalizedParams& p) {
    const double h = 1e-4;
    double worst = 0.0;
    for (const auto& [x, c] : validation::sample_points(100, 7)) {
        const double fd =
            validation::wrap_half_turn(local_geometry(p, x + h, c).theta() - local_geometry(p, x - h, c).theta()) /
            (2.0 * h);
        worst = std::max(worst, validation::rel_err(theta_gradient(p, x, c), fd, 1e-3));
    }
    return {"theta_gradient_fd", worst, 1e-6, "<=", worst <= 1e-6,
            "analytic dtheta/dx vs central difference, h = 1e-4"};
}

inline CheckResult check_magnetic_field(const NormalizedParams& p) {
    const double h = 1e-4;
    double worst = 0.0;
    for (const auto& [x, c] : validation::sample_points(100, 11)) {
        for (Spin s : {Spin::Up, Spin::Down}) {
            const double ap = vector_potential(local_geometry(p, x + h, c).theta(), s, p.k12);
            const double am = vector_potential(local_geometry(p, x - h, c).theta(), s, p.k12);
            const double fd = -(ap - am) / (2.0 * h);
            worst = std::max(worst, validation::rel_err(magnetic_field(p, x, s, c), fd, 1e-3));
        }
    }
    return {"magnetic_field_fd", worst, 1e-6, "<=", worst <= 1e-6,
            "analytic B_y vs -dA_z/dx by central difference, h = 1e-4"};
}

/// dp_x/dt against -d/dx [(p_z - A_z)^2 / 2m + V] at fixed p_z.
inline CheckResult check_force(const NormalizedParams& p, std::string name = "force_fd") {
    const double h = 1e-4;
    double worst = 0.0;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> upz(-5.0, 30.0);
    for (const auto& [x, c] : validation::sample_points(100, 17)) {
        for (Spin s : {Spin::Up, Spin::Down}) {
            const double pz = upz(rng);
            auto hamiltonian = [&](double xx) {
                const auto f = spin_fields(local_geometry(p, xx, c), s, ScalarConvention::Paper, p.k12, p.mass);
                return (pz - f.A) * (pz - f.A) / (2.0 * p.mass) + f.V;
            };
            const double fd = -(hamiltonian(x + h) - hamiltonian(x - h)) / (2.0 * h);
            const double an = eom_rhs({x, 0.0, 0.0, pz}, s, c, p).px;
            worst = std::max(worst, validation::rel_err(an, fd, 1.0));
        }
    }
    return {std::move(name), worst, 1e-6, "<=", worst <= 1e-6,
            "dp_x/dt vs -dH/dx by central difference, h = 1e-4"};
}

inline CheckResult check_free_fall(const NormalizedParams& p) {
    IntegratorConfig cfg;
    cfg.dt = 1e-4;
    cfg.tFinal = 1.0;
    cfg.snapshotTimes = {1.0};
    const Trajectory t = integrate({0.0, 0.0, 0.0, 0.0}, Spin::Up, Chirality::Left, p, cfg,
                                   FieldModel{ScalarConvention::Paper, false});
    const double exact = 0.5 * p.gravity;
    const double err = std::abs(t.snapshots.back().z - exact) / exact;
    return {"free_fall", err, 1e-10, "<=", err <= 1e-10, "z(1) vs G t^2 / 2 with gauge fields off"};
}

/// ||y(dt) - y(dt/2)|| / ||y(dt/2) - y(dt/4)|| for one particle over t = 1.
inline double rk4_convergence_ratio(const NormalizedParams& p, Species sp, PhaseSpaceState s0, double dt) {
    auto run = [&](double step) {
        IntegratorConfig cfg;
        cfg.dt = step;
        cfg.tFinal = 1.0;
        cfg.snapshotTimes = {1.0};
        return integrate(SpeciesDynamics(p, sp), s0, cfg).snapshots.back();
    };
    auto dist = [](const PhaseSpaceState& a, const PhaseSpaceState& b) {
        return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.z - b.z) * (a.z - b.z) + (a.px - b.px) * (a.px - b.px) +
                         (a.pz - b.pz) * (a.pz - b.pz));
    };
    const PhaseSpaceState y1 = run(dt);
    const PhaseSpaceState y2 = run(dt / 2);
    const PhaseSpaceState y4 = run(dt / 4);
    return dist(y1, y2) / dist(y2, y4);
}

inline CheckResult check_rk4_order(const NormalizedParams& p) {
    const double ratio = rk4_convergence_ratio(p, {Chirality::Left, Spin::Up}, {1.0, 0.0, 0.0, 0.0}, 0.01);
    return {"rk4_order", ratio, 16.0, "~", ratio >= 12.0 && ratio <= 20.0,
            "self-convergence ratio at dt = 0.01, 0.005, 0.0025; accepted range [12, 20]"};
}

inline CheckResult check_energy_drift(const NormalizedParams& abc, const NormalizedParams& def) {
    IntegratorConfig cfg;
    cfg.dt = 1e-4;
    cfg.tFinal = 2.0;
    cfg.snapshotTimes = {2.0};
    double worst = 0.0;
    const std::array<PhaseSpaceState, 3> starts{{{0.5, 0.0, 0.0, 0.0}, {-2.0, 1.0, 0.0, 0.0}, {3.0, -1.0, 0.0, 0.0}}};
    for (const NormalizedParams* p : {&abc, &def}) {
        for (const Species& sp : all_species) {
            for (const auto& s0 : starts) {
                worst = std::max(worst, integrate(SpeciesDynamics(*p, sp), s0, cfg).energy.maxDrift);
            }
        }
    }
    return {"energy_drift", worst, 1e-7, "<", worst < 1e-7,
            "max relative energy drift over t = 2 at dt = 1e-4, both presets"};
}

/// Flipping Omega12 and swapping L <-> R must reproduce the snapshots bit for bit.
inline bool mirror_symmetric(const NormalizedParams& p, EnsembleConfig ens, const IntegratorConfig& icfg,
                             unsigned threads, std::size_t* mismatches = nullptr) {
    ens.species = {all_species.begin(), all_species.end()};
    NormalizedParams flipped = p;
    flipped.rabi12 = -p.rabi12;
    EnsembleConfig swapped = ens;
    for (auto& s : swapped.species) s.chirality = mirrored(s.chirality);

    const ExperimentResult a = run_experiment(p, ens, icfg, {}, threads);
    const ExperimentResult b = run_experiment(flipped, swapped, icfg, {}, threads);
    std::size_t bad = 0;
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
        const auto& ra = a.snapshots[k].records;
        const auto& rb = b.snapshots[k].records;
        for (std::size_t i = 0; i < ra.size(); ++i) {
            const bool same = ra[i].species == Species{mirrored(rb[i].species.chirality), rb[i].species.spin} &&
                              ra[i].particleId == rb[i].particleId && ra[i].state == rb[i].state;
            if (!same) ++bad;
        }
    }
    if (mismatches) *mismatches = bad;
    return bad == 0;
}

inline CheckResult check_mirror(const NormalizedParams& p, unsigned threads) {
    EnsembleConfig ens;
    ens.particlesPerSpecies = 16;
    IntegratorConfig icfg;
    icfg.dt = 1e-3;
    icfg.tFinal = 1.0;
    icfg.snapshotTimes = {0.0, 0.5, 1.0};
    std::size_t bad = 0;
    const bool ok = mirror_symmetric(p, ens, icfg, threads, &bad);
    return {"chirality_mirror", static_cast<double>(bad), 0.0, "==", ok,
            "records differing after Omega12 -> -Omega12 and L <-> R"};
}

inline std::vector<CheckResult> run_validation(const ValidationOptions& opt = {}) {
    const NormalizedParams abc = opt.params.value_or(preset_params(Preset::Fig3abc));
    const NormalizedParams def = preset_params(Preset::Fig3def);
    return {
        check_gauge_identity(abc, opt.injectVectorPotentialSignError),
        check_reduction_accuracy(abc),
        check_reduction_scaling(abc),
        check_theta_gradient(abc),
        check_magnetic_field(abc),
        check_force(abc),
        check_force(def, "force_fd_fig3def"),
        check_free_fall(abc),
        check_rk4_order(abc),
        check_energy_drift(abc, def),
        check_mirror(def, opt.threads),
    };
}

inline nlohmann::json to_json(const std::vector<CheckResult>& checks) {
    nlohmann::json list = nlohmann::json::array();
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        list.push_back({{"name", c.name},
                        {"measured", c.measured},
                        {"tolerance", c.tolerance},
                        {"comparison", c.comparison},
                        {"passed", c.passed},
                        {"detail", c.detail}});
    }
    return {{"checks", list}, {"passed", all}};
}

}  // namespace chiralsg
