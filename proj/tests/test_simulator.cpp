#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aircal/fitting.hpp"
#include "aircal/ingest.hpp"
#include "aircal/link_budget.hpp"
#include "aircal/segmentation.hpp"
#include "aircal/simulator.hpp"
#include "helpers.hpp"

using namespace aircal;

namespace {

PathLossFit fit_campaign(const SimulationScenario& sc, const SimulationResult& sim) {
    const AlignResult aligned = align(sim.reported_track, sim.samples);
    const auto segments = detect_hovers(aligned.positioned);
    std::vector<PathLossPoint> points;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        points.push_back(
            extract_path_loss(segments[i], sc.tx_position, sc.cfg, sc.tx_pattern, sc.rx_pattern, i));
    }
    return fit_log_distance(points, sc.cfg.frequency_hz);
}

std::string render_campaign(const SimulationResult& sim) {
    std::ostringstream buf;
    emit_flight_log(buf, sim.reported_track);
    emit_samples(buf, sim.samples);
    emit_truth_csv(buf, sim.truth);
    return buf.str();
}

} // namespace

TEST_CASE("simulate: zero-noise campaign") {
    const SimulationScenario sc = testutil::zero_noise_scenario();
    const SimulationResult sim = simulate(sc);

    SUBCASE("cadence is exactly the sample rate") {
        for (std::size_t i = 1; i < sim.samples.size(); ++i) {
            CHECK(std::abs((sim.samples[i].t_s - sim.samples[i - 1].t_s) - 1.0 / 9.0) < 1e-12);
        }
    }

    SUBCASE("reported track equals the true track") {
        REQUIRE(sim.reported_track.fixes.size() == sim.true_track.fixes.size());
        for (std::size_t i = 0; i < sim.true_track.fixes.size(); ++i) {
            CHECK(sim.reported_track.fixes[i].position.latitude_deg ==
                  sim.true_track.fixes[i].position.latitude_deg);
            CHECK(sim.reported_track.fixes[i].position.longitude_deg ==
                  sim.true_track.fixes[i].position.longitude_deg);
            CHECK(sim.reported_track.fixes[i].position.altitude_m ==
                  sim.true_track.fixes[i].position.altitude_m);
        }
    }

    SUBCASE("truth path loss equals fspl of the true distance") {
        for (std::size_t i = 0; i < sim.truth.size(); i += 53) {
            CHECK(sim.truth[i].pl_true_db ==
                  doctest::Approx(fspl_db(sim.truth[i].d_true_m, sc.cfg.frequency_hz)).epsilon(1e-15));
        }
    }

    SUBCASE("pipeline recovers the free-space exponent") {
        const PathLossFit fit = fit_campaign(sc, sim);
        CHECK(std::abs(fit.alpha - 2.0) < 1e-3);
        CHECK(std::abs(fit.beta_excess_db) < 1e-3);
        CHECK(fit.n_points == 11);
    }

    SUBCASE("segmentation bookkeeping: 11 dwells of 270 +- 2 samples") {
        const AlignResult aligned = align(sim.reported_track, sim.samples);
        const auto segments = detect_hovers(aligned.positioned);
        REQUIRE(segments.size() == 11);
        for (const HoverSegment& s : segments) {
            CHECK(s.sample_count >= 268);
            CHECK(s.sample_count <= 272);
        }
    }

    SUBCASE("same seed is bit-identical, different seed is not required to be") {
        const SimulationResult again = simulate(sc);
        CHECK(render_campaign(sim) == render_campaign(again));
    }
}

TEST_CASE("simulate: error models") {
    SUBCASE("constant vertical bias shifts every reported altitude equally") {
        SimulationScenario sc = testutil::zero_noise_scenario(99);
        sc.error_model.gps_vertical_sigma_m = 3.0;
        const SimulationResult sim = simulate(sc);
        std::vector<double> deltas;
        for (std::size_t i = 0; i < sim.true_track.fixes.size(); i += 211) {
            deltas.push_back(sim.reported_track.fixes[i].position.altitude_m -
                             sim.true_track.fixes[i].position.altitude_m);
        }
        for (double d : deltas) {
            CHECK(std::abs(d - deltas.front()) < 1e-6);
        }
        CHECK(std::abs(deltas.front()) > 1e-3); // a draw of exactly zero is not credible
    }

    SUBCASE("wind drift scales with altitude") {
        SimulationScenario low = testutil::zero_noise_scenario(7);
        low.mission = testutil::line_mission(low.tx_position, 40.0, {100.0}, {15.0});
        SimulationScenario high = low;
        high.mission = testutil::line_mission(high.tx_position, 40.0, {100.0}, {30.0});
        low.error_model.wind_drift_gain_per_m = 0.1;
        high.error_model.wind_drift_gain_per_m = 0.1;
        const SimulationResult sim_low = simulate(low);
        const SimulationResult sim_high = simulate(high);
        // True position includes the drift; compare against the planned point.
        const EnuVector planned_low = geodetic_to_enu(low.mission.waypoints[0], low.tx_position);
        const EnuVector planned_high = geodetic_to_enu(high.mission.waypoints[0], high.tx_position);
        const EnuVector p_low =
            geodetic_to_enu(sim_low.true_track.fixes[0].position, low.tx_position) - planned_low;
        const EnuVector p_high =
            geodetic_to_enu(sim_high.true_track.fixes[0].position, high.tx_position) - planned_high;
        const double drift_low = std::hypot(p_low.east_m, p_low.north_m);
        const double drift_high = std::hypot(p_high.east_m, p_high.north_m);
        CHECK(drift_low == doctest::Approx(1.5).epsilon(1e-6));
        CHECK(drift_high == doctest::Approx(3.0).epsilon(1e-6));
    }

    SUBCASE("amplifier droop tilts received power over time") {
        SimulationScenario sc = testutil::zero_noise_scenario(5);
        sc.mission = testutil::line_mission(sc.tx_position, 40.0, {100.0}, {15.0});
        sc.error_model.amp_droop_db_per_min = 1.2;
        const SimulationResult sim = simulate(sc);
        // Static hover: power at t should decay linearly at 1.2 dB/min.
        const double p0 = sim.samples.front().received_power_dbm;
        const double t_last = sim.samples.back().t_s;
        const double p_last = sim.samples.back().received_power_dbm;
        CHECK(std::abs((p0 - p_last) - 1.2 * t_last / 60.0) < 1e-9);
    }

    SUBCASE("yaw jitter lands in the true track, not the reported one") {
        SimulationScenario sc = testutil::zero_noise_scenario(13);
        sc.error_model.yaw_jitter_sigma_deg = 4.0;
        const SimulationResult sim = simulate(sc);
        bool some_yaw_differs = false;
        for (std::size_t i = 0; i < sim.true_track.fixes.size(); ++i) {
            CHECK(sim.reported_track.fixes[i].yaw_deg == 0.0);
            const double y = *sim.true_track.fixes[i].yaw_deg;
            if (std::fmin(y, 360.0 - y) > 0.1) some_yaw_differs = true;
        }
        CHECK(some_yaw_differs);
    }
}

TEST_CASE("monte_carlo") {
    SUBCASE("zero-noise scenario has zero variance at alpha = 2") {
        const MonteCarloResult mc = monte_carlo(testutil::zero_noise_scenario(), 8);
        CHECK(mc.n_failed == 0);
        CHECK(std::abs(mc.alpha.mean - 2.0) < 1e-3);
        CHECK(mc.alpha.stddev < 1e-9);
    }

    SUBCASE("results are identical regardless of worker count") {
        SimulationScenario sc = testutil::zero_noise_scenario(77);
        sc.error_model.power_noise_sigma_db = 1.0;
        MonteCarloOptions serial;
        serial.jobs = 1;
        MonteCarloOptions parallel;
        parallel.jobs = 4;
        const MonteCarloResult a = monte_carlo(sc, 12, serial);
        const MonteCarloResult b = monte_carlo(sc, 12, parallel);
        REQUIRE(a.runs.size() == b.runs.size());
        for (std::size_t i = 0; i < a.runs.size(); ++i) {
            CHECK(a.runs[i].seed == b.runs[i].seed);
            CHECK(a.runs[i].alpha == b.runs[i].alpha);
            CHECK(a.runs[i].rmse_db == b.runs[i].rmse_db);
        }
    }

    SUBCASE("vertical GPS sigma spreads the fitted exponent") {
        SimulationScenario sc = testutil::zero_noise_scenario(2024);
        sc.mission = testutil::line_mission(sc.tx_position, 40.0, testutil::spacings(30.0, 30.0, 11),
                                            {15.0, 30.0});
        sc.error_model.gps_vertical_sigma_m = 3.0;
        const MonteCarloResult mc = monte_carlo(sc, 40);
        CHECK(mc.n_failed == 0);
        CHECK(mc.alpha.stddev > 0.0);
        CHECK(std::abs(mc.alpha.mean - 2.0) > 1e-6); // biased away from free space
    }

    SUBCASE("power-noise sigma drives fit rmse monotonically") {
        SimulationScenario sc = testutil::zero_noise_scenario(31337);
        double last = -1.0;
        for (double sigma : {0.5, 1.0, 2.0}) {
            sc.error_model.power_noise_sigma_db = sigma;
            const MonteCarloResult mc = monte_carlo(sc, 100);
            CHECK(mc.n_failed == 0);
            CHECK(mc.rmse_db.mean > last);
            last = mc.rmse_db.mean;
        }
    }
}
