#include "aircal/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"
#include "aircal/ingest.hpp"
#include "aircal/link_budget.hpp"

namespace aircal {

namespace {

std::filesystem::path out_dir_from(const KeyedConfig& cfg) {
    const std::string dir = cfg.require_string("paths", "out_dir");
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) {
        throw Error(ErrorCategory::IoError, "cannot create output directory " + p.string());
    }
    return p;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // binary keeps artifacts byte-stable
    if (!out) {
        throw Error(ErrorCategory::IoError, "cannot write " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, ErrorCategory category) {
    std::ifstream in(path);
    if (!in) {
        throw Error(category, "cannot open " + path.string());
    }
    return in;
}

GeodeticPosition read_position(const KeyedConfig& cfg, const std::string& section,
                               const std::string& prefix) {
    GeodeticPosition p;
    p.latitude_deg = cfg.require_double(section, prefix + "lat_deg");
    p.longitude_deg = normalize_longitude_deg(cfg.require_double(section, prefix + "lon_deg"));
    p.altitude_m = cfg.require_double(section, prefix + "alt_m");
    if (!is_valid_geodetic(p)) {
        throw Error(ErrorCategory::ConfigError, section + " position out of range");
    }
    return p;
}

LinkBudgetConfig read_budget(const KeyedConfig& cfg) {
    LinkBudgetConfig b;
    b.tx_power_dbm = cfg.get_double("budget", "tx_power_dbm", b.tx_power_dbm);
    b.tx_cable_loss_db = cfg.get_double("budget", "tx_cable_loss_db", b.tx_cable_loss_db);
    b.rx_cable_loss_db = cfg.get_double("budget", "rx_cable_loss_db", b.rx_cable_loss_db);
    b.amplifier_gain_db = cfg.get_double("budget", "amplifier_gain_db", b.amplifier_gain_db);
    b.frequency_hz = cfg.get_double("budget", "frequency_hz", b.frequency_hz);
    if (b.frequency_hz <= 0.0) {
        throw Error(ErrorCategory::ConfigError, "budget.frequency_hz must be positive");
    }
    if (b.tx_cable_loss_db < 0.0 || b.rx_cable_loss_db < 0.0) {
        throw Error(ErrorCategory::ConfigError, "cable losses must be non-negative");
    }
    // The horn's aim has no sensible default; the config must state it.
    b.tx_mount.boresight_azimuth_deg =
        wrap_azimuth_deg(cfg.require_double("transmitter", "boresight_azimuth_deg"));
    b.tx_mount.uptilt_deg = cfg.get_double("transmitter", "uptilt_deg", 15.0);
    b.tx_mount.roll_deg = cfg.get_double("transmitter", "roll_deg", 0.0);
    b.rx_mount.boresight_azimuth_deg =
        wrap_azimuth_deg(cfg.get_double("receiver", "boresight_azimuth_deg", 0.0));
    b.rx_mount.uptilt_deg = cfg.get_double("receiver", "uptilt_deg", 0.0);
    b.rx_mount.roll_deg = cfg.get_double("receiver", "roll_deg", 0.0);
    return b;
}

DetectParams read_detect(const KeyedConfig& cfg) {
    DetectParams d;
    d.speed_threshold_mps = cfg.get_double("segmentation", "speed_threshold_mps", d.speed_threshold_mps);
    d.min_dwell_s = cfg.get_double("segmentation", "min_dwell_s", d.min_dwell_s);
    d.min_samples = static_cast<std::size_t>(cfg.get_u64("segmentation", "min_samples", d.min_samples));
    d.median_window_s = cfg.get_double("segmentation", "median_window_s", d.median_window_s);
    if (d.speed_threshold_mps <= 0.0 || d.min_dwell_s <= 0.0) {
        throw Error(ErrorCategory::ConfigError, "segmentation thresholds must be positive");
    }
    return d;
}

void write_provenance(std::ostream& out, const KeyedConfig& cfg) {
    out << "configuration (key = value [source])\n";
    for (const auto& [key, prov] : cfg.provenance()) {
        out << "  " << key << " = " << prov.value << " [" << to_string(prov.source) << "]\n";
    }
}

} // namespace

AntennaPattern resolve_pattern(const std::string& spec_value) {
    constexpr const char* kIsotropic = "isotropic:";
    if (spec_value.rfind(kIsotropic, 0) == 0) {
        double gain;
        if (!csv::parse_double(spec_value.substr(std::string(kIsotropic).size()), gain)) {
            throw Error(ErrorCategory::ConfigError, "cannot parse pattern spec '" + spec_value + "'");
        }
        return make_uniform_pattern(gain);
    }
    return load_pattern_file(spec_value);
}

ProcessResult run_process(const KeyedConfig& config) {
    const std::filesystem::path out_dir = out_dir_from(config);
    const std::string track_path = config.require_string("paths", "track");
    const std::string samples_path = config.require_string("paths", "samples");
    const std::string tx_pattern_spec = config.require_string("paths", "tx_pattern");
    const std::string rx_pattern_spec = config.require_string("paths", "rx_pattern");
    const std::string mission_path = config.get_string("paths", "mission", "");

    const GeodeticPosition tx_position = read_position(config, "transmitter", "");
    const LinkBudgetConfig budget = read_budget(config);
    const DetectParams detect = read_detect(config);
    const double clock_offset_s = config.get_double("align", "clock_offset_s", 0.0);

    FitOptions fit_options;
    fit_options.mad_filter = config.get_bool("fit", "mad_filter", false);
    const bool weight_by_samples = config.get_bool("fit", "weight_by_samples", false);

    const AntennaPattern tx_pattern = resolve_pattern(tx_pattern_spec);
    const AntennaPattern rx_pattern = resolve_pattern(rx_pattern_spec);

    auto track_in = open_in(track_path, ErrorCategory::IoError);
    const FlightTrack track = parse_flight_log(track_in);
    auto samples_in = open_in(samples_path, ErrorCategory::IoError);
    const std::vector<MeasurementSample> samples = parse_samples(samples_in);

    const AlignResult aligned = align(track, samples, clock_offset_s);
    std::vector<HoverSegment> segments = detect_hovers(aligned.positioned, detect);

    bool matched = false;
    if (!mission_path.empty()) {
        auto mission_in = open_in(mission_path, ErrorCategory::IoError);
        const WaypointMission mission = parse_mission(mission_in);
        match_waypoints(segments, mission);
        matched = true;
    }

    std::vector<PathLossPoint> points;
    points.reserve(segments.size());
    std::size_t yaw_fallbacks = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        points.push_back(extract_path_loss(segments[i], tx_position, budget, tx_pattern, rx_pattern, i));
        if (points.back().yaw_fallback) ++yaw_fallbacks;
    }
    if (weight_by_samples) {
        fit_options.weights.clear();
        for (const HoverSegment& s : segments) {
            fit_options.weights.push_back(static_cast<double>(s.sample_count));
        }
    }

    const PathLossFit fit = fit_log_distance(points, budget.frequency_hz, fit_options);
    const FitReport report = fit_report(fit, points, budget.frequency_hz);

    ProcessResult result;
    result.fit = fit;
    result.segments = segments;
    result.samples_in = samples.size();
    result.samples_positioned = aligned.positioned.size();
    result.samples_dropped_outside_track = aligned.dropped;
    std::size_t in_segments = 0;
    for (const HoverSegment& s : segments) in_segments += s.sample_count;
    result.samples_discarded_in_motion = aligned.positioned.size() - in_segments;

    const std::filesystem::path pathloss_path = out_dir / "pathloss.csv";
    const std::filesystem::path fit_path = out_dir / "fit.json";
    const std::filesystem::path plot_path = out_dir / "plotdata.csv";
    const std::filesystem::path report_path = out_dir / "run_report.txt";

    {
        auto out = open_out(pathloss_path);
        emit_pathloss_csv(out, points);
    }
    {
        auto out = open_out(fit_path);
        emit_fit_json(out, report);
    }
    {
        auto out = open_out(plot_path);
        emit_plotdata_csv(out, points, fit);
    }
    {
        auto out = open_out(report_path);
        out << "aircal process run report\n";
        out << "=========================\n";
        write_provenance(out, config);
        out << "assumptions\n";
        out << "  - dwell power averaged in linear milliwatts (dB-domain mean reported per segment)\n";
        out << "  - speed threshold applies to 3D speed; climbs and descents count as motion\n";
        out << "  - clock offset applied to sample timestamps: " << csv::format_double(clock_offset_s)
            << " s\n";
        if (yaw_fallbacks > 0) {
            out << "  - attitude fallback: " << yaw_fallbacks << " of " << segments.size()
                << " segments had no yaw; assumed nose-north (yaw 0, pitch 0, roll 0)\n";
        } else {
            out << "  - yaw taken from the flight log for every segment\n";
        }
        out << "  - MAD outlier gate: " << (fit_options.mad_filter ? "on" : "off");
        if (fit_options.mad_filter) out << " (dropped " << fit.dropped_points << " points)";
        out << "\n";
        out << "  - fit weighting: " << (weight_by_samples ? "per-segment sample counts" : "uniform")
            << "\n";
        out << "alignment\n";
        out << "  samples in: " << result.samples_in << "\n";
        out << "  positioned: " << result.samples_positioned << "\n";
        out << "  dropped outside track span: " << result.samples_dropped_outside_track << "\n";
        out << "  discarded as motion: " << result.samples_discarded_in_motion << "\n";
        out << "segments (start_s end_s n mean_dbm db_mean_dbm yaw waypoint drift_m)\n";
        for (const HoverSegment& s : segments) {
            out << "  " << csv::format_double(s.start_s) << " " << csv::format_double(s.end_s) << " "
                << s.sample_count << " " << csv::format_double(s.mean_power_dbm) << " "
                << csv::format_double(s.db_domain_mean_dbm) << " "
                << (s.yaw_deg ? csv::format_double(*s.yaw_deg) : std::string("-")) << " ";
            if (matched && s.matched_waypoint) {
                out << *s.matched_waypoint << " " << csv::format_double(s.drift_m);
            } else {
                out << "- -";
            }
            out << "\n";
        }
        out << "fit\n";
        out << "  alpha = " << csv::format_double(fit.alpha) << "\n";
        out << "  intercept_db = " << csv::format_double(fit.intercept_db) << "\n";
        out << "  beta_excess_db = " << csv::format_double(fit.beta_excess_db) << "\n";
        out << "  rmse_db = " << csv::format_double(fit.rmse_db) << "\n";
        out << "  n_points = " << fit.n_points << "\n";
    }

    result.artifacts = {pathloss_path, fit_path, plot_path, report_path};
    return result;
}

SimulationScenario build_scenario(const KeyedConfig& config) {
    SimulationScenario sc;
    const std::string mission_path = config.require_string("paths", "mission");
    auto mission_in = open_in(mission_path, ErrorCategory::IoError);
    sc.mission = parse_mission(mission_in);

    sc.tx_position = read_position(config, "transmitter", "");
    sc.cfg = read_budget(config);
    sc.tx_pattern = resolve_pattern(config.require_string("paths", "tx_pattern"));
    sc.rx_pattern = resolve_pattern(config.require_string("paths", "rx_pattern"));

    sc.transit_speed_mps = config.get_double("simulation", "transit_speed_mps", sc.transit_speed_mps);
    sc.dwell_s = config.get_double("simulation", "dwell_s", sc.dwell_s);
    sc.sample_rate_hz = config.get_double("simulation", "sample_rate_hz", sc.sample_rate_hz);
    sc.seed = config.get_u64("simulation", "seed", sc.seed);
    sc.mission.dwell_s = sc.dwell_s;

    ErrorModel& em = sc.error_model;
    em.gps_horizontal_sigma_m = config.get_double("errors", "gps_horizontal_sigma_m", 0.0);
    em.gps_vertical_sigma_m = config.get_double("errors", "gps_vertical_sigma_m", 0.0);
    em.gps_jitter_sigma_m = config.get_double("errors", "gps_jitter_sigma_m", 0.0);
    em.gps_bias_walk_sigma_mps = config.get_double("errors", "gps_bias_walk_sigma_mps", 0.0);
    em.wind_drift_gain_per_m = config.get_double("errors", "wind_drift_gain_per_m", 0.0);
    em.yaw_jitter_sigma_deg = config.get_double("errors", "yaw_jitter_sigma_deg", 0.0);
    em.wobble_amplitude_deg = config.get_double("errors", "wobble_amplitude_deg", 0.0);
    em.wobble_rate_hz = config.get_double("errors", "wobble_rate_hz", 0.0);
    em.amp_droop_db_per_min = config.get_double("errors", "amp_droop_db_per_min", 0.0);
    em.power_noise_sigma_db = config.get_double("errors", "power_noise_sigma_db", 0.0);
    return sc;
}

SimulateResult run_simulate(const KeyedConfig& config) {
    const std::filesystem::path out_dir = out_dir_from(config);
    const SimulationScenario scenario = build_scenario(config);
    const SimulationResult sim = simulate(scenario);

    const std::filesystem::path track_path = out_dir / "track.csv";
    const std::filesystem::path samples_path = out_dir / "samples.csv";
    const std::filesystem::path mission_path = out_dir / "mission.csv";
    const std::filesystem::path truth_path = out_dir / "truth.csv";
    {
        auto out = open_out(track_path);
        emit_flight_log(out, sim.reported_track);
    }
    {
        auto out = open_out(samples_path);
        emit_samples(out, sim.samples);
    }
    {
        auto out = open_out(mission_path);
        emit_mission(out, scenario.mission);
    }
    {
        auto out = open_out(truth_path);
        emit_truth_csv(out, sim.truth);
    }
    SimulateResult r;
    r.artifacts = {track_path, samples_path, mission_path, truth_path};
    return r;
}

MonteCarloArtifacts run_montecarlo(const KeyedConfig& config, std::size_t n_runs) {
    const std::filesystem::path out_dir = out_dir_from(config);
    const SimulationScenario scenario = build_scenario(config);
    MonteCarloOptions options;
    options.detect = read_detect(config);
    options.fit.mad_filter = config.get_bool("fit", "mad_filter", false);
    options.jobs = static_cast<unsigned>(config.get_u64("montecarlo", "jobs", 0));

    MonteCarloArtifacts out;
    out.result = monte_carlo(scenario, n_runs, options);

    // The runs CSV stays purely numeric so csv::read_table re-reads it;
    // failed runs carry zeros here and their error categories live in the
    // JSON summary.
    const std::filesystem::path runs_path = out_dir / "montecarlo_runs.csv";
    {
        auto os = open_out(runs_path);
        os << "run,seed,ok,alpha,beta_excess_db,rmse_db,n_segments\n";
        for (std::size_t i = 0; i < out.result.runs.size(); ++i) {
            const MonteCarloRun& r = out.result.runs[i];
            os << i << "," << r.seed << "," << (r.ok ? 1 : 0) << "," << csv::format_double(r.alpha)
               << "," << csv::format_double(r.beta_excess_db) << "," << csv::format_double(r.rmse_db)
               << "," << r.n_segments << "\n";
        }
    }
    const std::filesystem::path summary_path = out_dir / "montecarlo.json";
    {
        auto os = open_out(summary_path);
        auto dist = [](const DistributionSummary& d) {
            return nlohmann::json{{"mean", csv::round_to_digits(d.mean)},
                                  {"stddev", csv::round_to_digits(d.stddev)},
                                  {"min", csv::round_to_digits(d.min)},
                                  {"q25", csv::round_to_digits(d.q25)},
                                  {"median", csv::round_to_digits(d.median)},
                                  {"q75", csv::round_to_digits(d.q75)},
                                  {"max", csv::round_to_digits(d.max)}};
        };
        nlohmann::json j;
        j["n_runs"] = out.result.runs.size();
        j["n_failed"] = out.result.n_failed;
        j["base_seed"] = scenario.seed;
        j["alpha"] = dist(out.result.alpha);
        j["beta_excess_db"] = dist(out.result.beta_excess_db);
        j["rmse_db"] = dist(out.result.rmse_db);
        nlohmann::json failures = nlohmann::json::array();
        for (std::size_t i = 0; i < out.result.runs.size(); ++i) {
            const MonteCarloRun& r = out.result.runs[i];
            if (!r.ok) {
                failures.push_back({{"run", i}, {"seed", r.seed}, {"error", r.error_category}});
            }
        }
        j["failures"] = failures;
        os << j.dump(2) << "\n";
    }
    out.artifacts = {runs_path, summary_path};
    return out;
}

SensitivityArtifacts run_sensitivity(const KeyedConfig& config) {
    const std::filesystem::path out_dir = out_dir_from(config);
    const GeodeticPosition tx_position = read_position(config, "transmitter", "");
    const LinkBudgetConfig budget = read_budget(config);
    const AntennaPattern tx_pattern = resolve_pattern(config.require_string("paths", "tx_pattern"));
    const AntennaPattern rx_pattern = resolve_pattern(config.require_string("paths", "rx_pattern"));
    const GeodeticPosition nominal_rx = read_position(config, "sensitivity", "rx_");
    const double rx_yaw = config.get_double("sensitivity", "rx_yaw_deg", 0.0);

    std::vector<EnuVector> displacements;
    const std::vector<double> mags =
        config.get_double_list("sensitivity", "displacements_m", {0.5, 1.0, 2.0, 3.0, 5.0, 10.0});
    displacements.push_back({0.0, 0.0, 0.0});
    for (double m : mags) {
        displacements.push_back({m, 0.0, 0.0});
        displacements.push_back({-m, 0.0, 0.0});
        displacements.push_back({0.0, m, 0.0});
        displacements.push_back({0.0, -m, 0.0});
        displacements.push_back({0.0, 0.0, m});
        displacements.push_back({0.0, 0.0, -m});
    }
    const std::vector<double> yaw_errors =
        config.get_double_list("sensitivity", "yaw_errors_deg", {-10, -5, -2, 0, 2, 5, 10});
    const std::vector<double> roll_errors =
        config.get_double_list("sensitivity", "roll_errors_deg", {-10, -5, -2, 0, 2, 5, 10});

    SensitivityArtifacts out;
    out.position = position_sensitivity(tx_position, nominal_rx, displacements, budget, tx_pattern,
                                        rx_pattern, rx_yaw);
    out.attitude = attitude_sensitivity(tx_position, nominal_rx, yaw_errors, roll_errors, budget,
                                        rx_pattern, rx_yaw);

    const std::filesystem::path pos_path = out_dir / "sensitivity_position.csv";
    const std::filesystem::path att_path = out_dir / "sensitivity_attitude.csv";
    const std::filesystem::path summary_path = out_dir / "sensitivity_summary.txt";
    {
        auto os = open_out(pos_path);
        emit_sensitivity_csv(os, out.position);
    }
    {
        auto os = open_out(att_path);
        emit_sensitivity_csv(os, out.attitude);
    }
    {
        auto os = open_out(summary_path);
        os << sensitivity_summary(out.position) << "\n" << sensitivity_summary(out.attitude);
    }
    out.artifacts = {pos_path, att_path, summary_path};
    return out;
}

std::string pattern_inspect_json(const std::filesystem::path& file) {
    const AntennaPattern p = load_pattern_file(file);
    const PatternStats s = pattern_stats(p);
    nlohmann::json j;
    j["label"] = p.label;
    j["n_azimuth"] = p.n_azimuth();
    j["n_elevation"] = p.n_elevation();
    j["max_gain_dbi"] = s.max_gain_dbi;
    j["max_azimuth_deg"] = s.max_azimuth_deg;
    j["max_elevation_deg"] = s.max_elevation_deg;
    j["min_gain_dbi"] = s.min_gain_dbi;
    j["front_to_back_db"] = s.front_to_back_db;
    return j.dump(2) + "\n";
}

PatternDiffResult pattern_diff_files(const std::filesystem::path& a,
                                     const std::filesystem::path& b) {
    const AntennaPattern pa = load_pattern_file(a);
    const AntennaPattern pb = load_pattern_file(b);
    PatternDiffResult r;
    r.diff = pattern_diff(pa, pb);
    std::ostringstream os;
    os << "pattern diff: " << pa.label << " - " << pb.label << "\n";
    os << "  mean |delta| = " << csv::format_double(r.diff.mean_abs_db, 6) << " dB\n";
    os << "  max  |delta| = " << csv::format_double(r.diff.max_abs_db, 6) << " dB at azimuth "
       << csv::format_double(r.diff.worst_azimuth_deg, 6) << " deg, elevation "
       << csv::format_double(r.diff.worst_elevation_deg, 6) << " deg\n";
    r.summary = os.str();
    return r;
}

} // namespace aircal
