#include "aircal/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"
#include "aircal/rng.hpp"

namespace aircal {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

// Piecewise hover/transit trajectory through the waypoints, in the ENU frame
// anchored at the transmitter.
struct Leg {
    double t_begin;
    double t_end;
    EnuVector from;
    EnuVector to; // == from while hovering
};

struct Trajectory {
    std::vector<Leg> legs;
    double duration_s = 0.0;

    EnuVector at(double t) const {
        for (const Leg& leg : legs) {
            if (t <= leg.t_end) {
                if (leg.t_end == leg.t_begin) return leg.from;
                const double w = (t - leg.t_begin) / (leg.t_end - leg.t_begin);
                return {leg.from.east_m + w * (leg.to.east_m - leg.from.east_m),
                        leg.from.north_m + w * (leg.to.north_m - leg.from.north_m),
                        leg.from.up_m + w * (leg.to.up_m - leg.from.up_m)};
            }
        }
        return legs.back().to;
    }
};

Trajectory plan_trajectory(const SimulationScenario& sc) {
    Trajectory traj;
    std::vector<EnuVector> wp;
    wp.reserve(sc.mission.waypoints.size());
    for (const GeodeticPosition& g : sc.mission.waypoints) {
        wp.push_back(geodetic_to_enu(g, sc.tx_position));
    }
    double t = 0.0;
    for (std::size_t i = 0; i < wp.size(); ++i) {
        traj.legs.push_back({t, t + sc.dwell_s, wp[i], wp[i]});
        t += sc.dwell_s;
        if (i + 1 < wp.size()) {
            const double dist = (wp[i + 1] - wp[i]).norm();
            if (dist > 0.0) {
                const double dur = dist / sc.transit_speed_mps;
                traj.legs.push_back({t, t + dur, wp[i], wp[i + 1]});
                t += dur;
            }
        }
    }
    traj.duration_s = t;
    return traj;
}

} // namespace

SimulationResult simulate(const SimulationScenario& scenario) {
    if (scenario.sample_rate_hz <= 0.0 || scenario.dwell_s <= 0.0 ||
        scenario.transit_speed_mps <= 0.0) {
        throw Error(ErrorCategory::ConfigError, "scenario rates and durations must be positive");
    }
    const ErrorModel& em = scenario.error_model;
    const LinkBudgetConfig& cfg = scenario.cfg;
    const Trajectory traj = plan_trajectory(scenario);

    RandomStream rng(scenario.seed);
    // Per-run draws, in pinned order. Every stochastic term is drawn whether
    // or not its sigma is zero, so streams line up across error settings.
    const double bias_e = rng.normal(em.gps_horizontal_sigma_m);
    const double bias_n = rng.normal(em.gps_horizontal_sigma_m);
    const double bias_u = rng.normal(em.gps_vertical_sigma_m);
    const double wind_az = rng.uniform01() * 360.0;
    const double wobble_phase_roll = rng.uniform01() * kTwoPi;
    const double wobble_phase_pitch = rng.uniform01() * kTwoPi;

    const Vec3 wind_dir = direction_from_angles(wind_az, 0.0);
    const Mat3 rx_offset = world_to_antenna_matrix(cfg.rx_mount);
    const Mat3 tx_frame = world_to_antenna_matrix(cfg.tx_mount);

    const double dt = 1.0 / scenario.sample_rate_hz;
    const std::size_t n = static_cast<std::size_t>(std::floor(traj.duration_s * scenario.sample_rate_hz)) + 1;

    SimulationResult result;
    result.true_track.fixes.reserve(n);
    result.reported_track.fixes.reserve(n);
    result.samples.reserve(n);
    result.truth.reserve(n);

    double walk_e = 0.0, walk_n = 0.0, walk_u = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / scenario.sample_rate_hz;

        // Per-sample draws, pinned order.
        walk_e += rng.normal(em.gps_bias_walk_sigma_mps) * dt;
        walk_n += rng.normal(em.gps_bias_walk_sigma_mps) * dt;
        walk_u += rng.normal(em.gps_bias_walk_sigma_mps) * dt;
        const double jit_e = rng.normal(em.gps_jitter_sigma_m);
        const double jit_n = rng.normal(em.gps_jitter_sigma_m);
        const double jit_u = rng.normal(em.gps_jitter_sigma_m);
        const double yaw_err = rng.normal(em.yaw_jitter_sigma_deg);
        const double power_noise = rng.normal(em.power_noise_sigma_db);

        EnuVector p = traj.at(t);
        // Wind pushes the true position, more with altitude.
        const double wind_mag = em.wind_drift_gain_per_m * std::max(0.0, p.up_m);
        p.east_m += wind_mag * wind_dir.x;
        p.north_m += wind_mag * wind_dir.y;

        const double yaw_true = wrap_azimuth_deg(yaw_err); // planned nose-north
        const double roll = em.wobble_amplitude_deg * std::sin(kTwoPi * em.wobble_rate_hz * t + wobble_phase_roll);
        const double pitch = em.wobble_amplitude_deg * std::sin(kTwoPi * em.wobble_rate_hz * t + wobble_phase_pitch);

        const double d_true = p.norm();
        const RayGeometry ray = ray_geometry(EnuVector{}, p);
        const double g_tx = gain_at(scenario.tx_pattern,
                                    angles_in_frame(tx_frame, direction_from_angles(ray.azimuth_deg, ray.elevation_deg)));

        const RayGeometry back = ray_geometry(p, EnuVector{});
        const Mat3 attitude = world_to_antenna_matrix({yaw_true, pitch, roll});
        const double g_rx = gain_at(scenario.rx_pattern,
                                    angles_in_frame(rx_offset * attitude,
                                                    direction_from_angles(back.azimuth_deg, back.elevation_deg)));

        const double amp_gain = cfg.amplifier_gain_db - em.amp_droop_db_per_min * (t / 60.0);
        const double pl_true = fspl_db(d_true, cfg.frequency_hz);
        const double power = cfg.tx_power_dbm - cfg.tx_cable_loss_db + g_tx + g_rx + amp_gain -
                             cfg.rx_cable_loss_db - pl_true + power_noise;

        TrackFix true_fix;
        true_fix.t_s = t;
        true_fix.position = enu_to_geodetic(p, scenario.tx_position);
        true_fix.yaw_deg = yaw_true;
        result.true_track.fixes.push_back(true_fix);

        TrackFix rep_fix;
        rep_fix.t_s = t;
        rep_fix.position = enu_to_geodetic(
            EnuVector{p.east_m + bias_e + walk_e + jit_e, p.north_m + bias_n + walk_n + jit_n,
                      p.up_m + bias_u + walk_u + jit_u},
            scenario.tx_position);
        rep_fix.yaw_deg = 0.0; // what the autopilot log claims
        result.reported_track.fixes.push_back(rep_fix);

        result.samples.push_back({t, power});
        result.truth.push_back({t, d_true, pl_true});
    }
    return result;
}

void emit_truth_csv(std::ostream& out, const std::vector<TruthPoint>& truth) {
    out << "t_s,d_true_m,pl_true_db\n";
    for (const TruthPoint& p : truth) {
        out << csv::format_double(p.t_s, 12) << "," << csv::format_double(p.d_true_m, 12) << ","
            << csv::format_double(p.pl_true_db, 12) << "\n";
    }
}

namespace {

DistributionSummary summarize(std::vector<double> values) {
    DistributionSummary s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::sort(values.begin(), values.end());
    auto q = [&](double p) {
        if (values.size() == 1) return values[0];
        const double h = p * (n - 1.0);
        const std::size_t lo = static_cast<std::size_t>(h);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = h - static_cast<double>(lo);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    s.min = values.front();
    s.q25 = q(0.25);
    s.median = q(0.5);
    s.q75 = q(0.75);
    s.max = values.back();
    return s;
}

} // namespace

MonteCarloResult monte_carlo(const SimulationScenario& scenario, std::size_t n_runs,
                             const MonteCarloOptions& options) {
    if (n_runs < 1) {
        throw Error(ErrorCategory::ConfigError, "monte carlo needs at least 1 run");
    }
    MonteCarloResult result;
    result.runs.resize(n_runs);

    auto run_one = [&](std::size_t i) {
        MonteCarloRun& run = result.runs[i];
        run.seed = derive_seed(scenario.seed, i);
        try {
            SimulationScenario sc = scenario;
            sc.seed = run.seed;
            const SimulationResult sim = simulate(sc);
            const AlignResult aligned = align(sim.reported_track, sim.samples);
            const std::vector<HoverSegment> segments = detect_hovers(aligned.positioned, options.detect);
            std::vector<PathLossPoint> points;
            points.reserve(segments.size());
            for (std::size_t s = 0; s < segments.size(); ++s) {
                points.push_back(extract_path_loss(segments[s], scenario.tx_position, scenario.cfg,
                                                   scenario.tx_pattern, scenario.rx_pattern, s));
            }
            const PathLossFit fit = fit_log_distance(points, scenario.cfg.frequency_hz, options.fit);
            run.alpha = fit.alpha;
            run.beta_excess_db = fit.beta_excess_db;
            run.rmse_db = fit.rmse_db;
            run.n_segments = segments.size();
            run.ok = true;
        } catch (const Error& e) {
            run.ok = false;
            run.error_category = to_string(e.category());
        }
    };

    unsigned jobs = options.jobs != 0 ? options.jobs : std::thread::hardware_concurrency();
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_runs)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n_runs; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n_runs; i = next.fetch_add(1)) {
                    run_one(i);
                }
            });
        }
        for (std::thread& t : workers) t.join();
    }

    std::vector<double> alphas, betas, rmses;
    for (const MonteCarloRun& run : result.runs) {
        if (!run.ok) {
            ++result.n_failed;
            continue;
        }
        alphas.push_back(run.alpha);
        betas.push_back(run.beta_excess_db);
        rmses.push_back(run.rmse_db);
    }
    result.alpha = summarize(alphas);
    result.beta_excess_db = summarize(betas);
    result.rmse_db = summarize(rmses);
    return result;
}

} // namespace aircal
