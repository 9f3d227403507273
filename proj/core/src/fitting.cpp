#include "aircal/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"

namespace aircal {

namespace {

struct Line {
    double slope;
    double intercept;
};

// Weighted OLS through centered sums.
Line ols(const std::vector<double>& x, const std::vector<double>& y,
         const std::vector<double>& w, const std::vector<bool>& used) {
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!used[i]) continue;
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double xbar = sx / sw;
    const double ybar = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!used[i]) continue;
        const double dx = x[i] - xbar;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * (y[i] - ybar);
    }
    if (sxx <= 0.0) {
        throw Error(ErrorCategory::DegenerateDesign, "all distances equal, slope is unidentifiable");
    }
    const double slope = sxy / sxx;
    return {slope, ybar - slope * xbar};
}

double median_of(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (lower + m);
    }
    return m;
}

// Quantile with linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.size() == 1) return sorted[0];
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

PathLossFit fit_log_distance(const std::vector<PathLossPoint>& points, double frequency_hz,
                             const FitOptions& options) {
    const std::size_t n = points.size();
    if (n < 2) {
        throw Error(ErrorCategory::DegenerateDesign,
                    "need at least 2 points, got " + std::to_string(n));
    }
    if (!options.weights.empty() && options.weights.size() != n) {
        throw Error(ErrorCategory::ConfigError, "weight count does not match point count");
    }

    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = 10.0 * std::log10(points[i].distance3d_m);
        y[i] = points[i].path_loss_db;
    }
    std::vector<double> w = options.weights;
    if (w.empty()) w.assign(n, 1.0);
    std::vector<bool> used(n, true);

    Line line = ols(x, y, w, used);

    std::size_t dropped = 0;
    if (options.mad_filter) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - (line.intercept + line.slope * x[i]);
        const double med = median_of(r);
        std::vector<double> dev(n);
        for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(r[i] - med);
        const double mad = median_of(dev);
        if (mad > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                if (dev[i] > 3.0 * mad) {
                    used[i] = false;
                    ++dropped;
                }
            }
            if (n - dropped < 2) {
                throw Error(ErrorCategory::DegenerateDesign,
                            "outlier gate left fewer than 2 points");
            }
            if (dropped > 0) line = ols(x, y, w, used);
        }
    }

    PathLossFit fit;
    fit.alpha = line.slope;
    fit.intercept_db = line.intercept;
    fit.beta_excess_db = line.intercept - fspl_db(1.0, frequency_hz);
    fit.used = used;
    fit.dropped_points = dropped;
    fit.n_points = n - dropped;
    fit.residuals_db.resize(n);
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals_db[i] = y[i] - (line.intercept + line.slope * x[i]);
        if (used[i]) sum_sq += fit.residuals_db[i] * fit.residuals_db[i];
    }
    fit.rmse_db = std::sqrt(sum_sq / static_cast<double>(fit.n_points));
    return fit;
}

FitReport fit_report(const PathLossFit& fit, const std::vector<PathLossPoint>& points,
                     double frequency_hz) {
    FitReport rep;
    rep.fit = fit;
    rep.frequency_hz = frequency_hz;

    std::vector<double> used_residuals;
    for (std::size_t i = 0; i < points.size(); ++i) {
        FitReport::PointRecord rec;
        rec.segment_id = points[i].segment_id;
        rec.distance_m = points[i].distance3d_m;
        rec.x_10log10d = 10.0 * std::log10(points[i].distance3d_m);
        rec.path_loss_db = points[i].path_loss_db;
        rec.residual_db = fit.residuals_db[i];
        rec.used = fit.used[i];
        rep.points.push_back(rec);
        if (rec.used) used_residuals.push_back(rec.residual_db);
    }
    std::sort(used_residuals.begin(), used_residuals.end());
    rep.residual_quartiles_db.min = used_residuals.front();
    rep.residual_quartiles_db.q25 = quantile(used_residuals, 0.25);
    rep.residual_quartiles_db.median = quantile(used_residuals, 0.5);
    rep.residual_quartiles_db.q75 = quantile(used_residuals, 0.75);
    rep.residual_quartiles_db.max = used_residuals.back();
    return rep;
}

namespace {

double artifact_round(double v) { return csv::round_to_digits(v); }

} // namespace

std::string fit_report_json(const FitReport& report) {
    nlohmann::json j;
    j["alpha"] = artifact_round(report.fit.alpha);
    j["intercept_db"] = artifact_round(report.fit.intercept_db);
    j["beta_excess_db"] = artifact_round(report.fit.beta_excess_db);
    j["rmse_db"] = artifact_round(report.fit.rmse_db);
    j["n_points"] = report.fit.n_points;
    j["dropped_points"] = report.fit.dropped_points;
    j["frequency_hz"] = artifact_round(report.frequency_hz);
    j["fspl_at_1m_db"] = artifact_round(fspl_db(1.0, report.frequency_hz));
    j["residual_quartiles_db"] = {
        {"min", artifact_round(report.residual_quartiles_db.min)},
        {"q25", artifact_round(report.residual_quartiles_db.q25)},
        {"median", artifact_round(report.residual_quartiles_db.median)},
        {"q75", artifact_round(report.residual_quartiles_db.q75)},
        {"max", artifact_round(report.residual_quartiles_db.max)},
    };
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : report.points) {
        pts.push_back({
            {"segment_id", p.segment_id},
            {"distance_m", artifact_round(p.distance_m)},
            {"x_10log10d", artifact_round(p.x_10log10d)},
            {"path_loss_db", artifact_round(p.path_loss_db)},
            {"residual_db", artifact_round(p.residual_db)},
            {"used", p.used},
        });
    }
    j["points"] = pts;
    return j.dump(2) + "\n";
}

void emit_fit_json(std::ostream& out, const FitReport& report) { out << fit_report_json(report); }

void emit_plotdata_csv(std::ostream& out, const std::vector<PathLossPoint>& points,
                       const PathLossFit& fit) {
    struct Row {
        double x, pl, line;
    };
    std::vector<Row> rows;
    rows.reserve(points.size());
    for (const PathLossPoint& p : points) {
        const double x = 10.0 * std::log10(p.distance3d_m);
        rows.push_back({x, p.path_loss_db, fit.intercept_db + fit.alpha * x});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.x < b.x; });
    out << "x_10log10d,pl_db,fitline_db\n";
    for (const Row& r : rows) {
        out << csv::format_double(r.x) << "," << csv::format_double(r.pl) << ","
            << csv::format_double(r.line) << "\n";
    }
}

} // namespace aircal
