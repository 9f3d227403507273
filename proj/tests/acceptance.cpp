// Acceptance suite: drives the built CLI binary and the library through the
// campaign-scale checks and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"
#include "aircal/fitting.hpp"
#include "aircal/geodesy.hpp"
#include "aircal/ingest.hpp"
#include "aircal/link_budget.hpp"
#include "aircal/pattern.hpp"
#include "aircal/segmentation.hpp"
#include "aircal/sensitivity.hpp"
#include "aircal/simulator.hpp"
#include "helpers.hpp"

#ifndef AIRCAL_CLI_PATH
#error "AIRCAL_CLI_PATH must point at the built aircal binary"
#endif

using namespace aircal;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %d. %s — %s\n", pass ? "PASS" : "FAIL", index, name.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + AIRCAL_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_campaign_configs(const fs::path& dir, const fs::path& campaign, const fs::path& out,
                            std::uint64_t seed, const std::vector<double>& up_m) {
    const WaypointMission mission =
        testutil::line_mission(testutil::test_tx(), 40.0, testutil::spacings(30.0, 30.0, 11), up_m);
    {
        std::ofstream o(dir / "mission_in.csv", std::ios::binary);
        emit_mission(o, mission);
    }
    std::ostringstream sim;
    sim << "[paths]\nmission = " << (dir / "mission_in.csv").string()
        << "\ntx_pattern = isotropic:0\nrx_pattern = isotropic:0\nout_dir = " << campaign.string()
        << "\n[transmitter]\nlat_deg = 60.3330\nlon_deg = 24.2960\nalt_m = 51.5\n"
           "boresight_azimuth_deg = 40\nuptilt_deg = 15\n[simulation]\n"
           "transit_speed_mps = 5\ndwell_s = 30\nsample_rate_hz = 9\nseed = "
        << seed << "\n";
    testutil::write_file(dir / "sim.ini", sim.str());

    std::ostringstream proc;
    proc << "[paths]\ntrack = " << (campaign / "track.csv").string()
         << "\nsamples = " << (campaign / "samples.csv").string()
         << "\nmission = " << (campaign / "mission.csv").string()
         << "\ntx_pattern = isotropic:0\nrx_pattern = isotropic:0\nout_dir = " << out.string()
         << "\n[transmitter]\nlat_deg = 60.3330\nlon_deg = 24.2960\nalt_m = 51.5\n"
            "boresight_azimuth_deg = 40\nuptilt_deg = 15\n";
    testutil::write_file(dir / "process.ini", proc.str());
}

// --- criterion 1 & 2 -------------------------------------------------------

fs::path g_campaign_dir;

void criterion_1_zero_noise_end_to_end(const fs::path& root) {
    const fs::path dir = root / "c1";
    fs::create_directories(dir);
    const fs::path campaign = dir / "campaign";
    const fs::path out = dir / "out";
    write_campaign_configs(dir, campaign, out, 424242, {15.0});
    g_campaign_dir = campaign;

    const auto t0 = std::chrono::steady_clock::now();
    const int rc_sim = run_cli("simulate --config " + (dir / "sim.ini").string());
    const int rc_proc = run_cli("process --config " + (dir / "process.ini").string());
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool pass = rc_sim == 0 && rc_proc == 0;
    double alpha = 0.0, beta = 0.0;
    if (pass) {
        const auto j = nlohmann::json::parse(slurp(out / "fit.json"));
        alpha = j["alpha"].get<double>();
        beta = j["beta_excess_db"].get<double>();
        pass = std::abs(alpha - 2.0) <= 1e-3 && std::abs(beta) <= 1e-3 && elapsed < 5.0;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail), "alpha=%.6f (want 2.000+-0.001), beta_excess=%.6f dB (want 0+-0.001), %.2fs (<5s)",
                  alpha, beta, elapsed);
    report(1, "zero-noise end-to-end recovery", pass, detail);
}

void criterion_2_sample_bookkeeping() {
    bool pass = !g_campaign_dir.empty();
    std::size_t n_segments = 0;
    std::size_t lo = 0, hi = 0;
    if (pass) {
        std::ifstream tin(g_campaign_dir / "track.csv");
        const FlightTrack track = parse_flight_log(tin);
        std::ifstream sin(g_campaign_dir / "samples.csv");
        const auto samples = parse_samples(sin);
        const auto positioned = align(track, samples).positioned;
        const auto segments = detect_hovers(positioned);
        n_segments = segments.size();
        pass = n_segments == 11;
        lo = hi = segments.empty() ? 0 : segments.front().sample_count;
        for (const HoverSegment& s : segments) {
            lo = std::min(lo, s.sample_count);
            hi = std::max(hi, s.sample_count);
            if (s.sample_count + 2 < 270 || s.sample_count > 272) pass = false;
        }
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail), "%zu segments (want 11), samples per dwell %zu..%zu (want 270+-2)",
                  n_segments, lo, hi);
    report(2, "sample bookkeeping", pass, detail);
}

// --- criterion 3 ------------------------------------------------------------

void criterion_3_pattern_oracle(const fs::path& root) {
    const fs::path dir = root / "c3";
    fs::create_directories(dir);
    // Round-trip both patterns through files, as the pipeline would load them.
    {
        std::ofstream o(dir / "horn.csv", std::ios::binary);
        emit_pattern(o, testutil::make_horn());
    }
    {
        std::ofstream o(dir / "uav.csv", std::ios::binary);
        emit_pattern(o, testutil::make_omni_on_uav());
    }
    const AntennaPattern horn = load_pattern_file(dir / "horn.csv");
    const AntennaPattern uav = load_pattern_file(dir / "uav.csv");

    double worst = 0.0;
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> az(0.0, 360.0);
    std::uniform_real_distribution<double> el(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = az(rng), e = el(rng);
        worst = std::fmax(worst, std::abs(gain_at(horn, a, e) - testutil::bilinear_oracle(horn, a, e)));
        worst = std::fmax(worst, std::abs(gain_at(uav, a, e) - testutil::bilinear_oracle(uav, a, e)));
    }
    bool nodes_exact = true;
    for (const AntennaPattern* p : {&horn, &uav}) {
        for (std::size_t i = 0; i < p->n_azimuth(); ++i) {
            for (std::size_t j = 0; j < p->n_elevation(); ++j) {
                if (gain_at(*p, p->azimuth_deg[i], p->elevation_deg[j]) != p->node(i, j)) {
                    nodes_exact = false;
                }
            }
        }
    }
    double seam = 0.0;
    for (double e : {-60.0, -15.0, 0.0, 30.0}) {
        seam = std::fmax(seam, std::abs(gain_at(uav, 359.999, e) - gain_at(uav, 0.001, e)));
        seam = std::fmax(seam, std::abs(gain_at(horn, 359.999, e) - gain_at(horn, 0.001, e)));
    }
    const bool pass = worst <= 1e-12 && nodes_exact && seam < 0.01;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "max |gain_at - oracle| = %.2e (<=1e-12), nodes exact: %s, seam gap %.2e dB (<0.01)",
                  worst, nodes_exact ? "yes" : "no", seam);
    report(3, "pattern oracle equivalence", pass, detail);
}

// --- criterion 4 ------------------------------------------------------------

void criterion_4_budget_identity() {
    const GeodeticPosition tx = testutil::test_tx();
    const GeodeticPosition rx = enu_to_geodetic({0.0, 100.0, 30.0}, tx);
    HoverSegment seg;
    seg.centroid = rx;
    seg.mean_power_dbm = -50.0;
    seg.sample_count = 270;
    seg.end_s = 30.0;
    const LinkBudgetConfig cfg; // +22 dBm, 10 dB, 55 dB, 2.5 dB
    const AntennaPattern g_tx = make_uniform_pattern(14.7);
    const AntennaPattern g_rx = make_uniform_pattern(2.1);
    const PathLossPoint p = extract_path_loss(seg, tx, cfg, g_tx, g_rx);
    const double budget_err = std::abs(p.path_loss_db - 131.3);
    const double invert_err = std::abs(invert_path_loss(p) - (-50.0));
    const bool pass = budget_err < 1e-12 && invert_err <= 1e-12;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "PL = %.13f dB (want 131.3, err %.1e), inversion err %.1e (<=1e-12)",
                  p.path_loss_db, budget_err, invert_err);
    report(4, "budget identity", pass, detail);
}

// --- criterion 5 ------------------------------------------------------------

void criterion_5_fspl_anchor() {
    // Independent closed-form evaluation of 20*log10(4*pi*d*f/c), frozen.
    const double anchor = 61.39094384872776;
    const double got = fspl_db(1.0, 28e9);
    const double err = std::abs(got - anchor);
    double decade_err = 0.0;
    for (double d : {1.0, 3.7, 50.0, 211.0}) {
        decade_err = std::fmax(decade_err, std::abs((fspl_db(10.0 * d, 28e9) - fspl_db(d, 28e9)) - 20.0));
    }
    const bool pass = err <= 1e-3 && decade_err <= 1e-9;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "fspl(1 m, 28 GHz) = %.6f dB (closed form %.6f, err %.1e <= 1e-3); decade law err %.1e",
                  got, anchor, err, decade_err);
    report(5, "free-space path loss anchor", pass, detail);
}

// --- criterion 6 ------------------------------------------------------------

void criterion_6_regression_properties() {
    bool pass = true;
    std::string note;

    // Two-point exact case.
    PathLossPoint a, b;
    a.distance3d_m = 1.0;
    a.path_loss_db = 60.0;
    b.distance3d_m = 10.0;
    b.path_loss_db = 82.0;
    b.segment_id = 1;
    const PathLossFit two = fit_log_distance({a, b}, 28e9);
    if (two.alpha != 2.2) {
        pass = false;
        note += "two-point alpha != 2.2; ";
    }

    // Normal equations on noisy data.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dd(5.0, 400.0);
    std::uniform_real_distribution<double> nn(-6.0, 6.0);
    std::vector<PathLossPoint> pts;
    for (std::size_t i = 0; i < 48; ++i) {
        PathLossPoint p;
        p.distance3d_m = dd(rng);
        p.path_loss_db = 61.0 + 21.5 * std::log10(p.distance3d_m) + nn(rng);
        p.segment_id = i;
        pts.push_back(p);
    }
    const PathLossFit fit = fit_log_distance(pts, 28e9);
    double sum_r = 0.0, sum_rx = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        sum_r += fit.residuals_db[i];
        sum_rx += fit.residuals_db[i] * 10.0 * std::log10(pts[i].distance3d_m);
    }
    const double n = static_cast<double>(pts.size());
    if (std::abs(sum_r) > 1e-9 * n || std::abs(sum_rx) > 1e-9 * n * 30.0) {
        pass = false;
        note += "normal equations violated; ";
    }

    // Distance rescaling.
    std::vector<PathLossPoint> scaled = pts;
    const double k = 2.75;
    for (PathLossPoint& p : scaled) p.distance3d_m *= k;
    const PathLossFit fit2 = fit_log_distance(scaled, 28e9);
    const double alpha_shift = std::abs(fit2.alpha - fit.alpha);
    const double intercept_shift =
        std::abs((fit2.intercept_db - fit.intercept_db) + fit.alpha * 10.0 * std::log10(k));
    if (alpha_shift > 1e-9 || intercept_shift > 1e-9) {
        pass = false;
        note += "rescaling invariance violated; ";
    }

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "two-point alpha = %.17g; |sum r| = %.1e, |sum r*x| = %.1e; rescale d(alpha) = %.1e%s%s",
                  two.alpha, std::abs(sum_r), std::abs(sum_rx), alpha_shift,
                  note.empty() ? "" : " — ", note.c_str());
    report(6, "regression properties", pass, detail);
}

// --- criterion 7 ------------------------------------------------------------

void criterion_7_error_bias() {
    // (a) Monte-Carlo spread under a 3 m vertical GPS sigma at 15-30 m.
    SimulationScenario sc = testutil::zero_noise_scenario(20240601);
    sc.mission = testutil::line_mission(sc.tx_position, 40.0, testutil::spacings(30.0, 30.0, 11),
                                        {15.0, 30.0});
    sc.error_model.gps_vertical_sigma_m = 3.0;
    const MonteCarloResult mc = monte_carlo(sc, 120);
    const bool spread_ok = mc.n_failed == 0 && mc.alpha.stddev > 0.0;

    // (b) Monotone mean rmse in the power-noise sigma.
    SimulationScenario sn = testutil::zero_noise_scenario(424243);
    std::vector<double> rmse_means;
    bool monotone = true;
    for (double sigma : {0.5, 1.0, 2.0}) {
        sn.error_model.power_noise_sigma_db = sigma;
        const MonteCarloResult m = monte_carlo(sn, 100);
        if (m.n_failed != 0) monotone = false;
        if (!rmse_means.empty() && m.rmse_db.mean <= rmse_means.back()) monotone = false;
        rmse_means.push_back(m.rmse_db.mean);
    }

    // (c) Horn-pattern sensitivity: 5 m displacement at 50 m range.
    const GeodeticPosition tx{45.0, 0.0, 100.0};
    const GeodeticPosition rx = enu_to_geodetic({0.0, 43.3, 25.0}, tx); // 50 m, 30 deg up
    LinkBudgetConfig cfg;
    cfg.tx_mount = {0.0, 15.0, 0.0}; // the uptilted horn, aimed along the row
    std::vector<EnuVector> disp;
    for (double m : {5.0}) {
        disp.push_back({m, 0, 0});
        disp.push_back({-m, 0, 0});
        disp.push_back({0, m, 0});
        disp.push_back({0, -m, 0});
        disp.push_back({0, 0, m});
        disp.push_back({0, 0, -m});
    }
    const SensitivityReport rep = position_sensitivity(
        tx, rx, disp, cfg, testutil::make_horn(), make_uniform_pattern(2.1));
    double worst5 = 0.0;
    for (const SensitivityEntry& e : rep.entries) worst5 = std::fmax(worst5, std::abs(e.pl_offset_db));

    const bool pass = spread_ok && monotone && worst5 >= 1.0;
    char detail[240];
    std::snprintf(detail, sizeof(detail),
                  "alpha stddev %.4f (>0), mean %.4f (bias %+.4f, sign reported); rmse means %.3f/%.3f/%.3f dB monotone: %s; worst 5 m offset %.2f dB (>=1)",
                  mc.alpha.stddev, mc.alpha.mean, mc.alpha.mean - 2.0, rmse_means[0], rmse_means[1],
                  rmse_means[2], monotone ? "yes" : "no", worst5);
    report(7, "error-bias demonstration", pass, detail);
}

// --- criterion 8 ------------------------------------------------------------

void criterion_8_determinism(const fs::path& root) {
    const fs::path dir = root / "c8";
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");
    write_campaign_configs(dir, dir / "a" / "campaign", dir / "a" / "out", 777, {15.0});

    bool pass = true;
    pass &= run_cli("simulate --config " + (dir / "sim.ini").string()) == 0;
    pass &= run_cli("process --config " + (dir / "process.ini").string()) == 0;
    // Second run into fresh directories with the same config + seed.
    const std::string sim2 = (dir / "sim2.ini").string();
    const std::string proc2 = (dir / "process2.ini").string();
    {
        std::string s = slurp(dir / "sim.ini");
        const std::string from = (dir / "a" / "campaign").string();
        const std::string to = (dir / "b" / "campaign").string();
        s.replace(s.find(from), from.size(), to);
        testutil::write_file(sim2, s);
    }
    pass &= run_cli("simulate --config " + sim2) == 0;
    {
        // Process the first campaign again into a second out dir.
        std::string s = slurp(dir / "process.ini");
        const std::string from = (dir / "a" / "out").string();
        const std::string to = (dir / "b" / "out").string();
        s.replace(s.find(from), from.size(), to);
        testutil::write_file(proc2, s);
    }
    pass &= run_cli("process --config " + proc2) == 0;

    std::size_t files_compared = 0;
    bool identical = true;
    for (const char* name : {"track.csv", "samples.csv", "mission.csv", "truth.csv"}) {
        identical &= slurp(dir / "a" / "campaign" / name) == slurp(dir / "b" / "campaign" / name);
        ++files_compared;
    }
    for (const char* name : {"pathloss.csv", "fit.json", "plotdata.csv", "run_report.txt"}) {
        const std::string a = slurp(dir / "a" / "out" / name);
        std::string b = slurp(dir / "b" / "out" / name);
        // The second run report echoes the second out_dir path; normalize it.
        if (std::string(name) == "run_report.txt") {
            const std::string from = (dir / "b" / "out").string();
            const std::string to = (dir / "a" / "out").string();
            for (std::size_t at = b.find(from); at != std::string::npos; at = b.find(from, at)) {
                b.replace(at, from.size(), to);
            }
        }
        identical &= a == b;
        ++files_compared;
    }
    pass &= identical;
    char detail[120];
    std::snprintf(detail, sizeof(detail), "%zu artifacts byte-compared across reruns: %s",
                  files_compared, identical ? "identical" : "DIFFER");
    report(8, "determinism", pass, detail);
}

// --- criterion 9 ------------------------------------------------------------

void criterion_9_geodesy_round_trips() {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> lat(-89.9, 89.9);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> alt(-100.0, 9000.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const GeodeticPosition p{lat(rng), normalize_longitude_deg(lon(rng)), alt(rng)};
        const GeodeticPosition q = ecef_to_geodetic(geodetic_to_ecef(p));
        worst = std::fmax(worst, (geodetic_to_ecef(q) - geodetic_to_ecef(p)).norm());
    }
    const GeodeticPosition origin{60.3330, 24.2960, 51.5};
    const EnuVector self = ecef_to_enu(geodetic_to_ecef(origin), origin);
    const bool self_zero = self.east_m == 0.0 && self.north_m == 0.0 && self.up_m == 0.0;
    const bool pass = worst <= 1e-6 && self_zero;
    char detail[140];
    std::snprintf(detail, sizeof(detail),
                  "worst round-trip error %.2e m over 1000 points (<=1e-6); ENU self-displacement exactly zero: %s",
                  worst, self_zero ? "yes" : "no");
    report(9, "geodesy round trips", pass, detail);
}

} // namespace

int main() {
    const fs::path root = "acceptance_scratch";
    std::error_code ec;
    fs::remove_all(root, ec);
    fs::create_directories(root);

    try {
        criterion_1_zero_noise_end_to_end(root);
        criterion_2_sample_bookkeeping();
        criterion_3_pattern_oracle(root);
        criterion_4_budget_identity();
        criterion_5_fspl_anchor();
        criterion_6_regression_properties();
        criterion_7_error_bias();
        criterion_8_determinism(root);
        criterion_9_geodesy_round_trips();
    } catch (const std::exception& e) {
        std::cerr << "acceptance suite aborted: " << e.what() << "\n";
        return 99;
    }

    if (g_failures == 0) {
        std::printf("all 9 acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    }
    return g_failures;
}
