#pragma once

// CSV/JSON export. Every floating-point cell is written with 17 significant
// digits so that parsing it back reproduces the double exactly.

#include <array>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "ensemble.hpp"
#include "gauge.hpp"
#include "units.hpp"

namespace chiralsg {

inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

inline constexpr std::string_view fields_csv_header =
    "x,chirality,A_up,A_down,V_up,V_down,B_up,B_down,theta,dtheta_dx";

inline constexpr std::string_view snapshots_csv_header = "time,time_ms,species,particle_id,x,z,px,pz";

/// One row per (chirality, x). A in units of k12, B in units of k12^2, V in
/// hbar^2/(m lambda^2), theta in rad, dtheta_dx in 1/lambda.
inline void write_fields_csv(std::ostream& out, const NormalizedParams& params, const FieldGrid& grid,
                             ScalarConvention conv) {
    out << fields_csv_header << '\n';
    const double k = params.k12;
    for (Chirality c : {Chirality::Left, Chirality::Right}) {
        for (std::size_t i = 0; i < grid.points; ++i) {
            const double x = grid.at(i);
            const GaugePoint gp = gauge_point(params, x, c, conv);
            out << format_double(x) << ',' << to_string(c) << ',' << format_double(gp.A_up / k) << ','
                << format_double(gp.A_down / k) << ',' << format_double(gp.V_up) << ','
                << format_double(gp.V_down) << ',' << format_double(gp.B_up / (k * k)) << ','
                << format_double(gp.B_down / (k * k)) << ',' << format_double(gp.theta) << ','
                << format_double(gp.dThetaDx) << '\n';
        }
    }
}

inline void write_snapshots_csv(std::ostream& out, const ExperimentResult& result,
                                const NormalizedParams& params) {
    out << snapshots_csv_header << '\n';
    const double ms = params.time_unit_ms();
    for (const auto& snap : result.snapshots) {
        const std::string t = format_double(snap.time);
        const std::string t_ms = format_double(snap.time * ms);
        for (const auto& r : snap.records) {
            out << t << ',' << t_ms << ',' << species_name(r.species) << ',' << r.particleId << ','
                << format_double(r.state.x) << ',' << format_double(r.state.z) << ','
                << format_double(r.state.px) << ',' << format_double(r.state.pz) << '\n';
        }
    }
}

inline nlohmann::json to_json(const PhysicalParams& p) {
    return {{"wavelength_m", p.wavelength}, {"massFactor", p.massFactor},   {"detuning_rad_s", p.detuning},
            {"rabi12_rad_s", p.rabi12},     {"rabi13_rad_s", p.rabi13},     {"rabi23_rad_s", p.rabi23},
            {"sigma12", p.sigma12},         {"sigma13", p.sigma13},         {"sigma23", p.sigma23},
            {"beamOffset", p.beamOffset},   {"gravity_m_s2", p.gravity},    {"sigmaR", p.ensembleWidth},
            {"largeDetuningRegime", p.large_detuning_regime()}};
}

inline nlohmann::json to_json(const NormalizedParams& n) {
    return {{"k12", n.k12},         {"mass", n.mass},           {"detuning", n.detuning},
            {"rabi12", n.rabi12},   {"rabi13", n.rabi13},       {"rabi23", n.rabi23},
            {"gravity", n.gravity}, {"sigma12", n.sigma12},     {"sigma13", n.sigma13},
            {"sigma23", n.sigma23}, {"beamOffset", n.beamOffset}, {"sigmaR", n.ensembleWidth},
            {"timeUnit_s", n.timeUnit}, {"lengthUnit_m", n.lengthUnit}};
}

inline nlohmann::json to_json(const SeparationStats& st, double time_ms) {
    nlohmann::json species = nlohmann::json::object();
    for (const auto& s : st.species) {
        species[species_name(s.species)] = {{"count", s.count},
                                            {"centroid", {s.meanX, s.meanZ}},
                                            {"spreadX", s.spreadX},
                                            {"spreadZ", s.spreadZ},
                                            {"spread", s.spread}};
    }
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : st.pairs) {
        pairs.push_back({{"a", species_name(p.a)}, {"b", species_name(p.b)}, {"distance", p.distance}});
    }
    return {{"time", st.time},
            {"time_ms", time_ms},
            {"species", species},
            {"pairwise", pairs},
            {"notes", st.notes}};
}

/// Separation statistics per snapshot plus run diagnostics.
inline nlohmann::json stats_json(const RunConfig& cfg, const NormalizedParams& params,
                                 const ExperimentResult& result) {
    nlohmann::json snapshots = nlohmann::json::array();
    for (const auto& snap : result.snapshots) {
        snapshots.push_back(to_json(separation_stats(snap, cfg.ensemble.species),
                                    snap.time * params.time_unit_ms()));
    }
    nlohmann::json drift = nlohmann::json::object();
    nlohmann::json eta = nlohmann::json::object();
    double max_drift = 0.0;
    double max_eta = 0.0;
    for (const auto& d : result.diagnostics) {
        drift[species_name(d.species)] = d.maxEnergyDrift;
        eta[species_name(d.species)] = std::isfinite(d.maxAdiabaticity) ? nlohmann::json(d.maxAdiabaticity)
                                                                          : nlohmann::json("inf");
        max_drift = std::max(max_drift, d.maxEnergyDrift);
        max_eta = std::max(max_eta, d.maxAdiabaticity);
    }
    nlohmann::json out;
    out["preset"] = cfg.preset ? nlohmann::json(std::string(to_string(*cfg.preset))) : nlohmann::json(nullptr);
    out["scalarConvention"] = std::string(to_string(cfg.model.convention));
    out["gaugeFields"] = cfg.model.gaugeFields;
    out["seed"] = cfg.ensemble.seed;
    out["particlesPerSpecies"] = cfg.ensemble.particlesPerSpecies;
    out["dt"] = cfg.integrator.dt;
    out["physical"] = to_json(cfg.physical);
    out["normalized"] = to_json(params);
    out["snapshots"] = snapshots;
    out["energyDrift"] = {{"perSpecies", drift}, {"max", max_drift}};
    out["adiabaticityRatio"] = {{"perSpecies", eta},
                                {"max", std::isfinite(max_eta) ? nlohmann::json(max_eta) : nlohmann::json("inf")}};
    return out;
}

}  // namespace chiralsg
