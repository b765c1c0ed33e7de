#pragma once

// Mixed molecular cloud released at t = 0: sampling, parallel integration of all
// species, and separation statistics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "beams.hpp"
#include "dynamics.hpp"
#include "units.hpp"

namespace chiralsg {

struct EnsembleConfig {
    std::size_t particlesPerSpecies = 1000;
    double sigmaR = 3.0;  // density ~ exp(-(x^2 + z^2) / sigmaR^2)
    std::uint64_t seed = 1;
    std::vector<Species> species{all_species.begin(), all_species.end()};
    bool pairedSampling = true;  // L and R of the same spin share one cloud

    std::vector<std::pair<std::string, std::string>> violations() const {
        std::vector<std::pair<std::string, std::string>> out;
        if (particlesPerSpecies < 1) out.emplace_back("ensemble.particlesPerSpecies", "must be at least 1");
        if (!(std::isfinite(sigmaR) && sigmaR > 0.0))
            out.emplace_back("ensemble.sigmaR", "must be a finite positive number");
        if (species.empty()) out.emplace_back("ensemble.species", "must list at least one species");
        for (std::size_t i = 0; i < species.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (species[i] == species[j])
                    out.emplace_back("ensemble.species", "duplicate species " + species_name(species[i]));
            }
        }
        return out;
    }

    void validate() const {
        for (const auto& v : violations()) throw ValidationError(v.first, v.second);
    }
};

inline std::size_t species_index(const Species& s) {
    return static_cast<std::size_t>(s.chirality) * 2 + static_cast<std::size_t>(s.spin);
}

/// Initial states per configured species: positions i.i.d. normal with standard
/// deviation sigmaR/sqrt(2) per axis, momenta zero. Each species draws from its own
/// generator keyed by (seed, stream); paired sampling keys the stream by spin only.
inline std::vector<std::vector<PhaseSpaceState>> sample_initial(const EnsembleConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<PhaseSpaceState>> out;
    out.reserve(cfg.species.size());
    for (const Species& sp : cfg.species) {
        const std::uint32_t stream = cfg.pairedSampling
                                         ? 1u + static_cast<std::uint32_t>(sp.spin)
                                         : 16u + static_cast<std::uint32_t>(species_index(sp));
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu),
                          static_cast<std::uint32_t>(cfg.seed >> 32), stream};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, cfg.sigmaR / std::sqrt(2.0));

        std::vector<PhaseSpaceState> cloud(cfg.particlesPerSpecies);
        for (auto& s : cloud) {
            s.x = normal(rng);
            s.z = normal(rng);
        }
        out.push_back(std::move(cloud));
    }
    return out;
}

struct ParticleRecord {
    Species species;
    std::size_t particleId = 0;
    PhaseSpaceState state;
};

struct EnsembleSnapshot {
    double time = 0.0;
    std::vector<ParticleRecord> records;  // species-major, then particle id
};

struct SpeciesDiagnostics {
    Species species;
    double maxEnergyDrift = 0.0;
    double maxAdiabaticity = 0.0;
};

struct ExperimentResult {
    std::vector<EnsembleSnapshot> snapshots;
    std::vector<SpeciesDiagnostics> diagnostics;
};

/// Integrates every particle of every configured species. Work is split across
/// `threads` workers (0 = hardware concurrency); the result does not depend on it.
inline ExperimentResult run_experiment(const NormalizedParams& params, const EnsembleConfig& cfg,
                                       const IntegratorConfig& icfg, FieldModel model = {},
                                       unsigned threads = 1) {
    cfg.validate();
    icfg.validate();
    if (!check_closure(make_beams(params)))
        throw ValidationError("beams", "wavevector closure k12 + k23 - k13 = 0 violated");

    const auto initial = sample_initial(cfg);
    const std::size_t n = cfg.particlesPerSpecies;
    const std::size_t jobs = cfg.species.size() * n;
    std::vector<Trajectory> results(jobs);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));

    std::vector<std::exception_ptr> failures(threads);
    auto worker = [&](unsigned w) {
        const std::size_t begin = jobs * w / threads;
        const std::size_t end = jobs * (w + 1) / threads;
        for (std::size_t job = begin; job < end; ++job) {
            const std::size_t si = job / n;
            const std::size_t pi = job % n;
            try {
                results[job] = integrate(SpeciesDynamics(params, cfg.species[si], model),
                                         initial[si][pi], icfg);
            } catch (const IntegrationError& e) {
                std::ostringstream msg;
                msg << e.what() << " (species " << species_name(cfg.species[si]) << ", particle " << pi
                    << ")";
                failures[w] = std::make_exception_ptr(IntegrationError(msg.str()));
                return;
            }
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    ExperimentResult out;
    out.snapshots.resize(icfg.snapshotTimes.size());
    for (std::size_t k = 0; k < out.snapshots.size(); ++k) {
        auto& snap = out.snapshots[k];
        snap.time = icfg.snapshotTimes[k];
        snap.records.reserve(jobs);
        for (std::size_t job = 0; job < jobs; ++job) {
            snap.records.push_back({cfg.species[job / n], job % n, results[job].snapshots[k]});
        }
    }
    for (std::size_t si = 0; si < cfg.species.size(); ++si) {
        SpeciesDiagnostics d{cfg.species[si], 0.0, 0.0};
        for (std::size_t pi = 0; pi < n; ++pi) {
            const Trajectory& t = results[si * n + pi];
            d.maxEnergyDrift = std::max(d.maxEnergyDrift, t.energy.maxDrift);
            d.maxAdiabaticity = std::max(d.maxAdiabaticity, t.maxAdiabaticity);
        }
        out.diagnostics.push_back(d);
    }
    return out;
}

struct SpeciesStats {
    Species species;
    std::size_t count = 0;
    double meanX = 0.0;
    double meanZ = 0.0;
    double spreadX = 0.0;  // population standard deviation
    double spreadZ = 0.0;
    double spread = 0.0;   // rms distance from the centroid
};

struct PairDistance {
    Species a;
    Species b;
    double distance = 0.0;
};

struct SeparationStats {
    double time = 0.0;
    std::vector<SpeciesStats> species;
    std::vector<PairDistance> pairs;
    std::vector<std::string> notes;

    const SpeciesStats* find(const Species& s) const {
        for (const auto& st : species)
            if (st.species == s) return &st;
        return nullptr;
    }
};

/// Centroids and spreads for each species in `expected`, plus pairwise centroid
/// distances. Species with no records are skipped and noted.
inline SeparationStats separation_stats(const EnsembleSnapshot& snap,
                                        const std::vector<Species>& expected = {all_species.begin(),
                                                                                all_species.end()}) {
    SeparationStats out;
    out.time = snap.time;
    for (const Species& sp : expected) {
        SpeciesStats st;
        st.species = sp;
        for (const auto& r : snap.records) {
            if (!(r.species == sp)) continue;
            ++st.count;
            st.meanX += r.state.x;
            st.meanZ += r.state.z;
        }
        if (st.count == 0) {
            out.notes.push_back("species " + species_name(sp) + " has no records; omitted");
            continue;
        }
        const double inv = 1.0 / static_cast<double>(st.count);
        st.meanX *= inv;
        st.meanZ *= inv;
        double vx = 0.0;
        double vz = 0.0;
        for (const auto& r : snap.records) {
            if (!(r.species == sp)) continue;
            vx += (r.state.x - st.meanX) * (r.state.x - st.meanX);
            vz += (r.state.z - st.meanZ) * (r.state.z - st.meanZ);
        }
        st.spreadX = std::sqrt(vx * inv);
        st.spreadZ = std::sqrt(vz * inv);
        st.spread = std::sqrt((vx + vz) * inv);
        out.species.push_back(st);
    }
    for (std::size_t i = 0; i < out.species.size(); ++i) {
        for (std::size_t j = i + 1; j < out.species.size(); ++j) {
            const auto& a = out.species[i];
            const auto& b = out.species[j];
            out.pairs.push_back({a.species, b.species, std::hypot(a.meanX - b.meanX, a.meanZ - b.meanZ)});
        }
    }
    return out;
}

}  // namespace chiralsg
