#include <doctest.h>

#include <cmath>
#include <sstream>
#include <tuple>

#include "aircal/errors.hpp"
#include "aircal/link_budget.hpp"
#include "aircal/sensitivity.hpp"
#include "helpers.hpp"

using namespace aircal;

namespace {

// Meridian geometry: keeps east components exactly zero so +-east symmetry
// is bit-clean. Longitude 0, transmitter aimed due north.
const GeodeticPosition kTx{45.0, 0.0, 100.0};

GeodeticPosition rx_at(double north_m, double up_m) {
    return enu_to_geodetic({0.0, north_m, up_m}, kTx);
}

LinkBudgetConfig cfg_aimed_at(const GeodeticPosition& rx, double roll = 0.0) {
    LinkBudgetConfig cfg;
    const RayGeometry ray = ray_geometry(EnuVector{}, geodetic_to_enu(rx, kTx));
    cfg.tx_mount = {ray.azimuth_deg, ray.elevation_deg, roll};
    return cfg;
}

} // namespace

TEST_CASE("position_sensitivity") {
    const GeodeticPosition rx = rx_at(43.3, 25.0); // ~50 m range, ~30 deg elevation
    const AntennaPattern horn = testutil::make_horn();
    const AntennaPattern omni = testutil::make_omni();
    const AntennaPattern iso = make_uniform_pattern(0.0);

    SUBCASE("zero displacement row is exactly zero") {
        LinkBudgetConfig cfg = cfg_aimed_at(rx);
        const SensitivityReport rep =
            position_sensitivity(kTx, rx, default_displacement_grid(), cfg, horn, omni);
        const SensitivityEntry& zero = rep.entries.front();
        CHECK(zero.displacement.norm() == 0.0);
        CHECK(zero.tx_gain_error_db == 0.0);
        CHECK(zero.rx_gain_error_db == 0.0);
        CHECK(zero.fspl_error_db == 0.0);
        CHECK(zero.pl_offset_db == 0.0);
    }

    SUBCASE("isotropic patterns reduce to the fspl difference") {
        LinkBudgetConfig cfg = cfg_aimed_at(rx);
        // Pure range displacement: stretch along the ray.
        const EnuVector ray_enu = geodetic_to_enu(rx, kTx);
        const double d = ray_enu.norm();
        const double scale = 5.0 / d;
        const std::vector<EnuVector> disp{{ray_enu.east_m * scale, ray_enu.north_m * scale,
                                           ray_enu.up_m * scale}};
        const SensitivityReport rep = position_sensitivity(kTx, rx, disp, cfg, iso, iso);
        const double expected = fspl_db(d + 5.0, cfg.frequency_hz) - fspl_db(d, cfg.frequency_hz);
        CHECK(std::abs(rep.entries[0].pl_offset_db - expected) < 1e-9);
        CHECK(rep.entries[0].tx_gain_error_db == 0.0);
        CHECK(rep.entries[0].rx_gain_error_db == 0.0);
    }

    SUBCASE("matches an independent geometry+pattern recomputation") {
        LinkBudgetConfig cfg = cfg_aimed_at(rx);
        const EnuVector nominal = geodetic_to_enu(rx, kTx);
        const std::vector<EnuVector> disp{{0.0, 0.0, 5.0}, {2.0, -1.0, 3.0}, {-4.0, 4.0, -2.0}};
        const SensitivityReport rep = position_sensitivity(kTx, rx, disp, cfg, horn, omni);
        for (std::size_t i = 0; i < disp.size(); ++i) {
            // Oracle: walk the full chain by hand for both endpoints.
            auto chain = [&](const EnuVector& p) {
                const RayGeometry ray = ray_geometry(EnuVector{}, p);
                const double gtx = gain_at(horn, world_to_antenna_frame(ray, cfg.tx_mount));
                const RayGeometry back = ray_geometry(p, EnuVector{});
                const double grx = gain_at(omni, world_to_antenna_frame(back, cfg.rx_mount));
                return std::tuple{gtx, grx, fspl_db(ray.distance3d_m, cfg.frequency_hz)};
            };
            const auto [gtx0, grx0, f0] = chain(nominal);
            const auto [gtx1, grx1, f1] = chain(nominal + disp[i]);
            const double expected = (gtx0 - gtx1) + (grx0 - grx1) + (f1 - f0);
            CHECK(std::abs(rep.entries[i].pl_offset_db - expected) < 1e-9);
        }
        // The paper-scale claim: a 5 m vertical error at 50 m range on a horn
        // pattern is a dB-scale offset.
        CHECK(std::abs(rep.entries[0].pl_offset_db) > 1.0);
    }

    SUBCASE("first-order continuity: halving a small displacement") {
        LinkBudgetConfig cfg = cfg_aimed_at(rx);
        const std::vector<EnuVector> disp{{0.0, 0.0, 1.0}, {0.0, 0.0, 0.5}};
        const SensitivityReport rep = position_sensitivity(kTx, rx, disp, cfg, iso, iso);
        const double full = rep.entries[0].pl_offset_db;
        const double half = rep.entries[1].pl_offset_db;
        CHECK(std::abs(half - full / 2.0) < 0.2 * std::abs(full / 2.0));
    }

    SUBCASE("east symmetry on a boresight-aligned pattern") {
        LinkBudgetConfig cfg = cfg_aimed_at(rx);
        const std::vector<EnuVector> disp{{5.0, 0.0, 0.0}, {-5.0, 0.0, 0.0}};
        const SensitivityReport rep = position_sensitivity(kTx, rx, disp, cfg, horn, iso);
        CHECK(std::abs(std::abs(rep.entries[0].pl_offset_db) -
                       std::abs(rep.entries[1].pl_offset_db)) < 1e-9);
    }

    SUBCASE("displacement through the transmitter raises ZeroDistance") {
        LinkBudgetConfig cfg = cfg_aimed_at(rx);
        const EnuVector nominal = geodetic_to_enu(rx, kTx);
        const std::vector<EnuVector> disp{{-nominal.east_m, -nominal.north_m, -nominal.up_m}};
        CHECK_THROWS_AS(position_sensitivity(kTx, rx, disp, cfg, iso, iso), Error);
    }
}

TEST_CASE("attitude_sensitivity") {
    const GeodeticPosition rx = rx_at(100.0, 0.0);

    SUBCASE("zero error rows are zero, uniform pattern is immune") {
        LinkBudgetConfig cfg;
        const AntennaPattern iso = make_uniform_pattern(2.1);
        const SensitivityReport rep = attitude_sensitivity(
            kTx, rx, {-10.0, -5.0, 0.0, 5.0, 10.0}, {-5.0, 0.0, 5.0}, cfg, iso);
        for (const SensitivityEntry& e : rep.entries) {
            CHECK(e.pl_offset_db == 0.0);
            CHECK(e.rx_gain_error_db == 0.0);
        }
    }

    SUBCASE("rotating a notch into the ray costs exactly the notch depth") {
        LinkBudgetConfig cfg;
        // Back ray leaves the rx due south (az 180). Nominal yaw 180 puts it
        // on the pattern's azimuth 0; a +90 yaw error makes it appear at
        // local azimuth 270, the notch column.
        const AntennaPattern notch = testutil::make_notch_column(0.0, 270.0, 10.0);
        const SensitivityReport rep =
            attitude_sensitivity(kTx, rx, {0.0, 90.0}, {0.0}, cfg, notch, 180.0);
        CHECK(std::abs(rep.entries[0].pl_offset_db) < 1e-9);
        CHECK(rep.entries[1].pl_offset_db == doctest::Approx(10.0).epsilon(1e-6));
        CHECK(rep.worst_index == 1);
    }

    SUBCASE("csv and summary render") {
        LinkBudgetConfig cfg;
        const AntennaPattern uav = testutil::make_omni_on_uav();
        const SensitivityReport rep =
            attitude_sensitivity(kTx, rx, {-5.0, 0.0, 5.0}, {0.0}, cfg, uav);
        std::ostringstream csv;
        emit_sensitivity_csv(csv, rep);
        CHECK(csv.str().find("pl_offset_db") != std::string::npos);
        const std::string summary = sensitivity_summary(rep);
        CHECK(summary.find("worst case") != std::string::npos);
    }
}
