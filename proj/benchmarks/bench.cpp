#include <benchmark/benchmark.h>

#include <random>

#include "aircal/fitting.hpp"
#include "aircal/geodesy.hpp"
#include "aircal/ingest.hpp"
#include "aircal/link_budget.hpp"
#include "aircal/pattern.hpp"
#include "aircal/segmentation.hpp"
#include "aircal/simulator.hpp"

namespace {

aircal::AntennaPattern dense_pattern() {
    aircal::AntennaPattern p;
    for (double az = 0.0; az < 360.0; az += 2.0) p.azimuth_deg.push_back(az);
    for (double el = -90.0; el <= 90.0; el += 2.0) p.elevation_deg.push_back(el);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> g(-20.0, 15.0);
    p.gain_dbi.resize(p.n_azimuth() * p.n_elevation());
    for (double& v : p.gain_dbi) v = g(rng);
    return p;
}

aircal::SimulationScenario bench_scenario() {
    aircal::SimulationScenario sc;
    sc.tx_position = {60.3330, 24.2960, 51.5};
    aircal::WaypointMission mission;
    for (int i = 0; i < 11; ++i) {
        const double h = 30.0 + 30.0 * i;
        mission.waypoints.push_back(aircal::enu_to_geodetic({h * 0.6428, h * 0.766, 15.0}, sc.tx_position));
    }
    sc.mission = mission;
    sc.cfg.tx_mount.boresight_azimuth_deg = 40.0;
    sc.seed = 7;
    return sc;
}

void BM_GainAt(benchmark::State& state) {
    const aircal::AntennaPattern p = dense_pattern();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> az(0.0, 360.0);
    std::uniform_real_distribution<double> el(-90.0, 90.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aircal::gain_at(p, az(rng), el(rng)));
    }
}
BENCHMARK(BM_GainAt);

void BM_GeodeticToEnu(benchmark::State& state) {
    const aircal::GeodeticPosition origin{60.3330, 24.2960, 51.5};
    const aircal::GeodeticPosition p{60.3350, 24.2990, 66.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(aircal::geodetic_to_enu(p, origin));
    }
}
BENCHMARK(BM_GeodeticToEnu);

void BM_EcefToGeodetic(benchmark::State& state) {
    const aircal::Vec3 ecef = aircal::geodetic_to_ecef({60.3330, 24.2960, 51.5});
    for (auto _ : state) {
        benchmark::DoNotOptimize(aircal::ecef_to_geodetic(ecef));
    }
}
BENCHMARK(BM_EcefToGeodetic);

void BM_Simulate(benchmark::State& state) {
    const aircal::SimulationScenario sc = bench_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(aircal::simulate(sc));
    }
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

void BM_FullPipeline(benchmark::State& state) {
    const aircal::SimulationScenario sc = bench_scenario();
    const aircal::SimulationResult sim = aircal::simulate(sc);
    for (auto _ : state) {
        const aircal::AlignResult aligned = aircal::align(sim.reported_track, sim.samples);
        const auto segments = aircal::detect_hovers(aligned.positioned);
        std::vector<aircal::PathLossPoint> points;
        for (std::size_t i = 0; i < segments.size(); ++i) {
            points.push_back(aircal::extract_path_loss(segments[i], sc.tx_position, sc.cfg,
                                                       sc.tx_pattern, sc.rx_pattern, i));
        }
        benchmark::DoNotOptimize(aircal::fit_log_distance(points, sc.cfg.frequency_hz));
    }
}
BENCHMARK(BM_FullPipeline)->Unit(benchmark::kMillisecond);

void BM_FitLogDistance(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dd(5.0, 400.0);
    std::uniform_real_distribution<double> nn(-4.0, 4.0);
    std::vector<aircal::PathLossPoint> pts;
    for (int i = 0; i < state.range(0); ++i) {
        aircal::PathLossPoint p;
        p.distance3d_m = dd(rng);
        p.path_loss_db = 61.0 + 22.0 * std::log10(p.distance3d_m) + nn(rng);
        pts.push_back(p);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(aircal::fit_log_distance(pts, 28e9));
    }
}
BENCHMARK(BM_FitLogDistance)->Arg(11)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
