#ifndef ENCOUNTER_GEO_HPP
#define ENCOUNTER_GEO_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace enc {

// Earth radius used by the equirectangular projection, meters.
inline constexpr double kEarthRadiusM = 6371000.0;

// Shared sampling rate of the aligned grid, Hz.
inline constexpr double kDefaultGridHz = 10.0;

struct GpsSample {
    double timestamp = 0.0; // seconds since epoch
    double latitude = 0.0;  // degrees
    double longitude = 0.0; // degrees
};

struct GpsTrajectory {
    std::string vehicle_id;
    std::vector<GpsSample> samples; // strictly increasing timestamps, size >= 2
};

struct LocalPoint {
    double x = 0.0; // meters east of anchor
    double y = 0.0; // meters north of anchor
};

struct GeoAnchor {
    double latitude = 0.0;  // degrees
    double longitude = 0.0; // degrees
};

// Trajectory in a local metric frame. points/times are parallel arrays;
// all points are projected from the same anchor.
struct LocalTrajectory {
    GeoAnchor anchor;
    std::vector<LocalPoint> points;
    std::vector<double> times;

    std::size_t size() const { return points.size(); }
};

// Equirectangular projection around `anchor`, valid at encounter scale
// (a few km). Preserves point order and timestamps.
// Throws invalid_input_error on non-finite coordinates or |anchor lat| >= 90.
LocalTrajectory project_to_local(const GpsTrajectory& traj, GeoAnchor anchor);

// Inverse of project_to_local for a single point.
GpsSample local_to_gps(const LocalPoint& p, double timestamp, GeoAnchor anchor);

// Great-circle distance in meters; reference metric for projection tests.
double haversine_m(double lat1, double lon1, double lat2, double lon2);

// Equirectangular distance between two lat/lon points.
double local_distance_m(const LocalPoint& a, const LocalPoint& b);

// Resamples both trajectories onto the shared overlap window at grid_hz.
// Grid times are t_lo + i/grid_hz with t_lo the later start; positions are
// linearly interpolated. Throws no_overlap_error when the overlap holds
// fewer than two grid points, invalid_input_error on mismatched anchors.
std::pair<LocalTrajectory, LocalTrajectory>
align_pair(const LocalTrajectory& a, const LocalTrajectory& b, double grid_hz = kDefaultGridHz);

// Resamples onto target_len equally spaced times over the original span.
// Endpoints are preserved exactly. Throws invalid_input_error when
// target_len < 2 or the input has fewer than two points.
LocalTrajectory resample_uniform(const LocalTrajectory& traj, std::size_t target_len);

// Splits a raw trajectory wherever consecutive samples are more than
// max_gap_s apart; pieces shorter than two samples are dropped.
std::vector<GpsTrajectory> split_on_gaps(const GpsTrajectory& traj, double max_gap_s);

// Linear interpolation of a local trajectory at time t (t inside the span).
LocalPoint interpolate_at(const LocalTrajectory& traj, double t);

} // namespace enc

#endif
