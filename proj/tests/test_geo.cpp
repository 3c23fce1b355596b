#include "encounter/geo.hpp"

#include "encounter/error.hpp"
#include "encounter/rng.hpp"

#include "doctest.h"

#include <array>
#include <cmath>

using namespace enc;

namespace {

constexpr double kPi = 3.14159265358979323846;

GpsTrajectory make_gps(const std::string& id,
                       std::initializer_list<std::array<double, 3>> rows) {
    GpsTrajectory traj;
    traj.vehicle_id = id;
    for (const auto& [t, lat, lon] : rows) {
        traj.samples.push_back(GpsSample{t, lat, lon});
    }
    return traj;
}

LocalTrajectory make_local(std::initializer_list<std::array<double, 3>> rows) {
    LocalTrajectory traj;
    traj.anchor = {42.0, -83.0};
    for (const auto& [t, x, y] : rows) {
        traj.times.push_back(t);
        traj.points.push_back(LocalPoint{x, y});
    }
    return traj;
}

} // namespace

TEST_CASE("projection maps the anchor to the origin") {
    const GpsTrajectory traj = make_gps("v", {{0.0, 42.0, -83.0}, {1.0, 42.0001, -83.0001}});
    const LocalTrajectory local = project_to_local(traj, {42.0, -83.0});
    CHECK(local.points[0].x == 0.0);
    CHECK(local.points[0].y == 0.0);
}

TEST_CASE("projection matches the stated formula on axis offsets") {
    const double delta = 0.001;
    const double m_per_deg = kEarthRadiusM * kPi / 180.0;

    const GpsTrajectory east = make_gps("v", {{0.0, 42.0, -83.0}, {1.0, 42.0, -83.0 + delta}});
    const LocalTrajectory le = project_to_local(east, {42.0, -83.0});
    CHECK(le.points[1].x == doctest::Approx(delta * std::cos(42.0 * kPi / 180.0) * m_per_deg)
                                .epsilon(1e-12));
    CHECK(le.points[1].y == doctest::Approx(0.0).epsilon(1e-12));

    const GpsTrajectory north = make_gps("v", {{0.0, 42.0, -83.0}, {1.0, 42.0 + delta, -83.0}});
    const LocalTrajectory ln = project_to_local(north, {42.0, -83.0});
    CHECK(ln.points[1].x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ln.points[1].y == doctest::Approx(delta * m_per_deg).epsilon(1e-12));
}

TEST_CASE("projection preserves count and timestamps, rejects bad input") {
    const GpsTrajectory traj =
        make_gps("v", {{0.5, 42.0, -83.0}, {0.7, 42.001, -83.001}, {1.4, 42.002, -83.002}});
    const LocalTrajectory local = project_to_local(traj, {42.0, -83.0});
    REQUIRE(local.size() == traj.samples.size());
    for (std::size_t i = 0; i < local.size(); ++i) {
        CHECK(local.times[i] == traj.samples[i].timestamp);
    }

    GpsTrajectory bad = traj;
    bad.samples[1].latitude = std::nan("");
    CHECK_THROWS_AS(project_to_local(bad, {42.0, -83.0}), invalid_input_error);
    CHECK_THROWS_AS(project_to_local(traj, {90.0, 0.0}), invalid_input_error);
}

TEST_CASE("local distances agree with haversine within 0.1% under 500 m") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const double lat = rng.uniform(30.0, 55.0);
        const double lon = rng.uniform(-100.0, 20.0);
        const double bearing = rng.uniform(0.0, 2.0 * kPi);
        const double dist = rng.uniform(1.0, 500.0);
        const double m_per_deg = kEarthRadiusM * kPi / 180.0;
        const double lat2 = lat + dist * std::sin(bearing) / m_per_deg;
        const double lon2 =
            lon + dist * std::cos(bearing) / (m_per_deg * std::cos(lat * kPi / 180.0));

        const GpsTrajectory traj = make_gps("v", {{0.0, lat, lon}, {1.0, lat2, lon2}});
        const LocalTrajectory local = project_to_local(traj, {lat, lon});
        const double planar = local_distance_m(local.points[0], local.points[1]);
        const double sphere = haversine_m(lat, lon, lat2, lon2);
        CHECK(std::fabs(planar - sphere) <= 0.001 * sphere);
    }
}

TEST_CASE("inverse projection round-trips to well under 0.1 m") {
    Rng rng(11);
    const GeoAnchor anchor{42.3, -83.7};
    for (int trial = 0; trial < 100; ++trial) {
        const LocalPoint p{rng.uniform(-2000.0, 2000.0), rng.uniform(-2000.0, 2000.0)};
        const GpsSample s = local_to_gps(p, 0.0, anchor);
        GpsTrajectory traj;
        traj.vehicle_id = "v";
        traj.samples = {s, GpsSample{1.0, s.latitude, s.longitude}};
        const LocalTrajectory back = project_to_local(traj, anchor);
        CHECK(local_distance_m(back.points[0], p) < 1e-6);
    }
}

TEST_CASE("align_pair keeps identical grids as-is on the overlap") {
    const LocalTrajectory a =
        make_local({{0.0, 0.0, 0.0}, {0.1, 1.0, 0.0}, {0.2, 2.0, 0.0}, {0.3, 3.0, 0.0}});
    const LocalTrajectory b = make_local({{0.1, 5.0, 5.0}, {0.2, 6.0, 5.0}, {0.3, 7.0, 5.0}});
    const auto [ra, rb] = align_pair(a, b, 10.0);
    REQUIRE(ra.size() == 3);
    REQUIRE(rb.size() == 3);
    CHECK(ra.points[0].x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ra.points[2].x == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rb.points[0].x == doctest::Approx(5.0).epsilon(1e-12));
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra.times[i] == rb.times[i]);
    }
}

TEST_CASE("align_pair interpolates midpoints on offset grids") {
    // a on {0.0, 0.2}, b on {0.1, 0.3}; the 10 Hz overlap grid is {0.1, 0.2}.
    const LocalTrajectory a = make_local({{0.0, 0.0, 0.0}, {0.2, 2.0, 0.0}});
    const LocalTrajectory b = make_local({{0.1, 1.0, 1.0}, {0.3, 3.0, 1.0}});
    const auto [ra, rb] = align_pair(a, b, 10.0);
    REQUIRE(ra.size() == 2);
    CHECK(ra.times[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ra.times[1] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(ra.points[0].x == doctest::Approx(1.0).epsilon(1e-12)); // midpoint of segment
    CHECK(ra.points[1].x == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rb.points[0].x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rb.points[1].x == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("align_pair rejects disjoint spans and mismatched anchors") {
    const LocalTrajectory a = make_local({{0.0, 0.0, 0.0}, {1.0, 1.0, 0.0}});
    const LocalTrajectory b = make_local({{5.0, 0.0, 0.0}, {6.0, 1.0, 0.0}});
    CHECK_THROWS_AS(align_pair(a, b, 10.0), no_overlap_error);

    LocalTrajectory c = b;
    c.times = {0.0, 1.0};
    c.anchor = {41.0, -83.0};
    CHECK_THROWS_AS(align_pair(a, c, 10.0), invalid_input_error);
}

TEST_CASE("align_pair outputs always share length and timestamps") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        LocalTrajectory a;
        LocalTrajectory b;
        a.anchor = b.anchor = {42.0, -83.0};
        double ta = rng.uniform(0.0, 2.0);
        double tb = rng.uniform(0.0, 2.0);
        for (int i = 0; i < 30; ++i) {
            a.times.push_back(ta);
            a.points.push_back(LocalPoint{rng.uniform(-50, 50), rng.uniform(-50, 50)});
            ta += rng.uniform(0.05, 0.4);
            b.times.push_back(tb);
            b.points.push_back(LocalPoint{rng.uniform(-50, 50), rng.uniform(-50, 50)});
            tb += rng.uniform(0.05, 0.4);
        }
        try {
            const auto [ra, rb] = align_pair(a, b, 10.0);
            REQUIRE(ra.size() == rb.size());
            REQUIRE(ra.size() >= 2);
            for (std::size_t i = 0; i < ra.size(); ++i) {
                CHECK(ra.times[i] == rb.times[i]);
                if (i > 0) {
                    CHECK(ra.times[i] > ra.times[i - 1]);
                }
            }
        } catch (const no_overlap_error&) {
            // acceptable for unlucky spans
        }
    }
}

TEST_CASE("resample_uniform hits the linear midpoint") {
    const LocalTrajectory seg = make_local({{0.0, 0.0, 0.0}, {1.0, 2.0, 0.0}});
    const LocalTrajectory out = resample_uniform(seg, 3);
    REQUIRE(out.size() == 3);
    CHECK(out.points[0].x == 0.0);
    CHECK(out.points[1].x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.points[2].x == 2.0);
}

TEST_CASE("resample_uniform is the identity on a uniform grid at equal length") {
    const LocalTrajectory traj =
        make_local({{0.0, 0.0, 1.0}, {0.5, 2.0, 3.0}, {1.0, 4.0, -1.0}, {1.5, 6.0, 0.0}});
    const LocalTrajectory out = resample_uniform(traj, 4);
    REQUIRE(out.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(out.points[i].x == doctest::Approx(traj.points[i].x).epsilon(1e-12));
        CHECK(out.points[i].y == doctest::Approx(traj.points[i].y).epsilon(1e-12));
    }
}

TEST_CASE("resample_uniform matches hand interpolation on an uneven grid") {
    // x(t) = t on t in {0, 1, 3, 6}; five uniform times are {0, 1.5, 3, 4.5, 6}.
    const LocalTrajectory traj =
        make_local({{0.0, 0.0, 0.0}, {1.0, 1.0, 0.0}, {3.0, 3.0, 0.0}, {6.0, 6.0, 0.0}});
    const LocalTrajectory out = resample_uniform(traj, 5);
    REQUIRE(out.size() == 5);
    const double expected[5] = {0.0, 1.5, 3.0, 4.5, 6.0};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(out.points[i].x == doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK(out.points[i].y == 0.0);
    }
}

TEST_CASE("resample_uniform preserves endpoints exactly and is idempotent") {
    Rng rng(31);
    LocalTrajectory traj;
    traj.anchor = {42.0, -83.0};
    double t = 0.0;
    for (int i = 0; i < 17; ++i) {
        traj.times.push_back(t);
        traj.points.push_back(LocalPoint{rng.uniform(-100, 100), rng.uniform(-100, 100)});
        t += rng.uniform(0.01, 0.5);
    }
    const LocalTrajectory once = resample_uniform(traj, 50);
    CHECK(once.points.front().x == traj.points.front().x);
    CHECK(once.points.front().y == traj.points.front().y);
    CHECK(once.points.back().x == traj.points.back().x);
    CHECK(once.points.back().y == traj.points.back().y);

    const LocalTrajectory twice = resample_uniform(once, 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(twice.points[i].x == doctest::Approx(once.points[i].x).epsilon(1e-12));
        CHECK(twice.points[i].y == doctest::Approx(once.points[i].y).epsilon(1e-12));
    }
}

TEST_CASE("resample_uniform rejects target lengths below 2") {
    const LocalTrajectory seg = make_local({{0.0, 0.0, 0.0}, {1.0, 2.0, 0.0}});
    CHECK_THROWS_AS(resample_uniform(seg, 1), invalid_input_error);
}

TEST_CASE("split_on_gaps separates logs at dropouts above the limit") {
    const GpsTrajectory traj = make_gps("v", {{0.0, 42.0, -83.0},
                                              {0.5, 42.0001, -83.0},
                                              {1.0, 42.0002, -83.0},
                                              {3.0, 42.0003, -83.0},
                                              {3.5, 42.0004, -83.0}});
    const auto pieces = split_on_gaps(traj, 1.0);
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].samples.size() == 3);
    CHECK(pieces[1].samples.size() == 2);
    CHECK(pieces[0].vehicle_id == "v");

    // Gaps at exactly the limit are bridged.
    const auto bridged = split_on_gaps(make_gps("v", {{0.0, 42.0, -83.0}, {1.0, 42.0, -83.0}}), 1.0);
    CHECK(bridged.size() == 1);
}
