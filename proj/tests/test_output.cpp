#include <cstdlib>
#include <cstring>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "chiralsg/output.hpp"

using namespace chiralsg;

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    return out;
}

std::vector<std::string> lines_of(const std::string& text) { return split(text, '\n'); }

RunConfig preset_config(Preset p) {
    RunConfig cfg;
    apply_preset(cfg, p);
    return cfg;
}

}  // namespace

TEST(Format, RoundTrips) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint64_t> bits;
    int tested = 0;
    while (tested < 10000) {
        const std::uint64_t b = bits(rng);
        double v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isfinite(v)) continue;
        ++tested;
        ASSERT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
    }
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(-30.0), "-30");
}

TEST(FieldsCsv, HeaderAndGaugeIdentity) {
    const RunConfig cfg = preset_config(Preset::Fig3abc);
    FieldGrid grid{-10.0, 10.0, 41};
    std::ostringstream out;
    write_fields_csv(out, normalize(cfg.physical), grid, ScalarConvention::Paper);
    const auto lines = lines_of(out.str());
    ASSERT_EQ(lines.size(), 1u + 2u * 41u);
    EXPECT_EQ(lines[0], "x,chirality,A_up,A_down,V_up,V_down,B_up,B_down,theta,dtheta_dx");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        ASSERT_EQ(cells.size(), 10u);
        EXPECT_EQ(cells[1], i <= 41 ? "L" : "R");
        const double a_up = std::stod(cells[2]);
        const double a_down = std::stod(cells[3]);
        EXPECT_NEAR(a_up + a_down, -1.0, 1e-12);
        EXPECT_EQ(std::stod(cells[6]), -std::stod(cells[7]));
    }
    EXPECT_EQ(split(lines[1])[0], "-10");
}

TEST(FieldsCsv, ReportingUnits) {
    const RunConfig cfg = preset_config(Preset::Fig3def);
    const NormalizedParams p = normalize(cfg.physical);
    FieldGrid grid{1.5, 1.5, 1};
    std::ostringstream out;
    write_fields_csv(out, p, grid, ScalarConvention::Paper);
    const auto cells = split(lines_of(out.str())[1]);
    const GaugePoint g = gauge_point(p, 1.5, Chirality::Left);
    EXPECT_EQ(std::stod(cells[2]), g.A_up / p.k12);
    EXPECT_EQ(std::stod(cells[6]), g.B_up / (p.k12 * p.k12));
    EXPECT_EQ(std::stod(cells[4]), g.V_up);
    EXPECT_EQ(std::stod(cells[9]), g.dThetaDx);
}

TEST(SnapshotsCsv, RowsAndTimeColumns) {
    const RunConfig cfg = preset_config(Preset::Fig3abc);
    const NormalizedParams p = normalize(cfg.physical);
    EnsembleConfig ens;
    ens.particlesPerSpecies = 3;
    IntegratorConfig icfg;
    icfg.dt = 1e-3;
    icfg.tFinal = 0.1;
    icfg.snapshotTimes = {0.0, 0.05, 0.1};
    const ExperimentResult r = run_experiment(p, ens, icfg);
    std::ostringstream out;
    write_snapshots_csv(out, r, p);
    const auto lines = lines_of(out.str());
    ASSERT_EQ(lines.size(), 1u + 3u * 12u);
    EXPECT_EQ(lines[0], "time,time_ms,species,particle_id,x,z,px,pz");
    const auto row = split(lines[1 + 12 + 4]);  // second snapshot, second species, first particle
    EXPECT_EQ(std::stod(row[0]), 0.05);
    EXPECT_NEAR(std::stod(row[1]), 0.05 * p.timeUnit * 1e3, 1e-15);
    EXPECT_EQ(row[2], "L_down");
    EXPECT_EQ(row[3], "1");
    EXPECT_EQ(std::stod(row[4]), r.snapshots[1].records[4].state.x);
    EXPECT_EQ(std::stod(row[7]), r.snapshots[1].records[4].state.pz);
}

TEST(StatsJson, Structure) {
    RunConfig cfg = preset_config(Preset::Fig3def);
    cfg.ensemble.particlesPerSpecies = 4;
    cfg.integrator.dt = 1e-3;
    cfg.integrator.tFinal = 0.2;
    cfg.integrator.snapshotTimes = {0.0, 0.2};
    const NormalizedParams p = normalize(cfg.physical);
    const ExperimentResult r = run_experiment(p, cfg.ensemble, cfg.integrator);
    const nlohmann::json j = stats_json(cfg, p, r);
    EXPECT_EQ(j["preset"], "fig3def");
    EXPECT_EQ(j["scalarConvention"], "paper");
    EXPECT_EQ(j["particlesPerSpecies"], 4);
    ASSERT_EQ(j["snapshots"].size(), 2u);
    const auto& last = j["snapshots"][1];
    EXPECT_EQ(last["time"], 0.2);
    EXPECT_EQ(last["species"].size(), 4u);
    EXPECT_EQ(last["pairwise"].size(), 6u);
    const SeparationStats st = separation_stats(r.snapshots[1]);
    EXPECT_EQ(last["species"]["R_up"]["centroid"][0].get<double>(), st.find({Chirality::Right, Spin::Up})->meanX);
    EXPECT_TRUE(j["energyDrift"]["max"].is_number());
    EXPECT_EQ(j["energyDrift"]["perSpecies"].size(), 4u);
    EXPECT_TRUE(j["adiabaticityRatio"]["max"].is_number());
    EXPECT_TRUE(j["physical"]["largeDetuningRegime"].get<bool>());
    EXPECT_EQ(j["normalized"]["k12"].get<double>(), p.k12);
    // round trip through text keeps doubles exact
    const nlohmann::json back = nlohmann::json::parse(j.dump());
    EXPECT_EQ(back["normalized"]["gravity"].get<double>(), p.gravity);
}
