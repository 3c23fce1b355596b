#include "encounter/geo.hpp"

#include "encounter/error.hpp"

#include <algorithm>
#include <cmath>

namespace enc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg2rad(double d) { return d * kPi / 180.0; }

void check_sample(const GpsSample& s) {
    if (!std::isfinite(s.timestamp) || !std::isfinite(s.latitude) || !std::isfinite(s.longitude)) {
        throw invalid_input_error("gps sample has non-finite fields");
    }
    if (s.latitude < -90.0 || s.latitude > 90.0) {
        throw invalid_input_error("latitude out of [-90, 90]: " + std::to_string(s.latitude));
    }
    if (s.longitude < -180.0 || s.longitude > 180.0) {
        throw invalid_input_error("longitude out of [-180, 180]: " + std::to_string(s.longitude));
    }
}

// Index of the segment [i, i+1] containing t. times strictly increasing.
std::size_t segment_index(const std::vector<double>& times, double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - times.begin());
    if (hi == 0) {
        return 0;
    }
    if (hi >= times.size()) {
        return times.size() - 2;
    }
    return hi - 1;
}

} // namespace

LocalTrajectory project_to_local(const GpsTrajectory& traj, GeoAnchor anchor) {
    if (!std::isfinite(anchor.latitude) || !std::isfinite(anchor.longitude) ||
        anchor.latitude <= -90.0 || anchor.latitude >= 90.0) {
        throw invalid_input_error("projection anchor latitude must lie in (-90, 90)");
    }
    LocalTrajectory out;
    out.anchor = anchor;
    out.points.reserve(traj.samples.size());
    out.times.reserve(traj.samples.size());
    const double cos_lat = std::cos(deg2rad(anchor.latitude));
    const double m_per_deg = kEarthRadiusM * kPi / 180.0;
    for (const GpsSample& s : traj.samples) {
        check_sample(s);
        LocalPoint p;
        p.x = (s.longitude - anchor.longitude) * cos_lat * m_per_deg;
        p.y = (s.latitude - anchor.latitude) * m_per_deg;
        out.points.push_back(p);
        out.times.push_back(s.timestamp);
    }
    return out;
}

GpsSample local_to_gps(const LocalPoint& p, double timestamp, GeoAnchor anchor) {
    const double cos_lat = std::cos(deg2rad(anchor.latitude));
    const double m_per_deg = kEarthRadiusM * kPi / 180.0;
    GpsSample s;
    s.timestamp = timestamp;
    s.latitude = anchor.latitude + p.y / m_per_deg;
    s.longitude = anchor.longitude + p.x / (cos_lat * m_per_deg);
    return s;
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
    const double phi1 = deg2rad(lat1);
    const double phi2 = deg2rad(lat2);
    const double dphi = deg2rad(lat2 - lat1);
    const double dlam = deg2rad(lon2 - lon1);
    const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                     std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) * std::sin(dlam / 2);
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

double local_distance_m(const LocalPoint& a, const LocalPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

LocalPoint interpolate_at(const LocalTrajectory& traj, double t) {
    const std::size_t i = segment_index(traj.times, t);
    const double t0 = traj.times[i];
    const double t1 = traj.times[i + 1];
    const double w = (t - t0) / (t1 - t0);
    LocalPoint p;
    p.x = traj.points[i].x + w * (traj.points[i + 1].x - traj.points[i].x);
    p.y = traj.points[i].y + w * (traj.points[i + 1].y - traj.points[i].y);
    return p;
}

std::pair<LocalTrajectory, LocalTrajectory>
align_pair(const LocalTrajectory& a, const LocalTrajectory& b, double grid_hz) {
    if (a.size() < 2 || b.size() < 2) {
        throw invalid_input_error("align_pair needs trajectories with at least two samples");
    }
    if (grid_hz <= 0.0) {
        throw invalid_input_error("grid rate must be positive");
    }
    if (a.anchor.latitude != b.anchor.latitude || a.anchor.longitude != b.anchor.longitude) {
        throw invalid_input_error("align_pair inputs must share a projection anchor");
    }
    const double dt = 1.0 / grid_hz;
    const double t_lo = std::max(a.times.front(), b.times.front());
    const double t_hi = std::min(a.times.back(), b.times.back());
    // Tolerate rounding at the window edge so exact-length overlaps keep
    // their final sample.
    const double eps = dt * 1e-9;
    if (t_hi - t_lo < dt - eps) {
        throw no_overlap_error("trajectories overlap by fewer than two grid points");
    }
    const std::size_t n = static_cast<std::size_t>(std::floor((t_hi - t_lo + eps) / dt)) + 1;

    LocalTrajectory ra;
    LocalTrajectory rb;
    ra.anchor = a.anchor;
    rb.anchor = b.anchor;
    ra.points.reserve(n);
    rb.points.reserve(n);
    ra.times.reserve(n);
    rb.times.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_lo + static_cast<double>(i) * dt;
        ra.points.push_back(interpolate_at(a, t));
        rb.points.push_back(interpolate_at(b, t));
        ra.times.push_back(t);
        rb.times.push_back(t);
    }
    return {std::move(ra), std::move(rb)};
}

LocalTrajectory resample_uniform(const LocalTrajectory& traj, std::size_t target_len) {
    if (target_len < 2) {
        throw invalid_input_error("resample target length must be at least 2");
    }
    if (traj.size() < 2) {
        throw invalid_input_error("resample input must have at least two points");
    }
    LocalTrajectory out;
    out.anchor = traj.anchor;
    out.points.reserve(target_len);
    out.times.reserve(target_len);
    const double t0 = traj.times.front();
    const double t1 = traj.times.back();
    const double span = t1 - t0;
    for (std::size_t i = 0; i < target_len; ++i) {
        if (i == 0) {
            out.points.push_back(traj.points.front());
            out.times.push_back(t0);
        } else if (i + 1 == target_len) {
            out.points.push_back(traj.points.back());
            out.times.push_back(t1);
        } else {
            const double t = t0 + span * static_cast<double>(i) / static_cast<double>(target_len - 1);
            out.points.push_back(interpolate_at(traj, t));
            out.times.push_back(t);
        }
    }
    return out;
}

std::vector<GpsTrajectory> split_on_gaps(const GpsTrajectory& traj, double max_gap_s) {
    std::vector<GpsTrajectory> pieces;
    GpsTrajectory cur;
    cur.vehicle_id = traj.vehicle_id;
    for (const GpsSample& s : traj.samples) {
        if (!cur.samples.empty() && s.timestamp - cur.samples.back().timestamp > max_gap_s) {
            if (cur.samples.size() >= 2) {
                pieces.push_back(std::move(cur));
            }
            cur = GpsTrajectory{};
            cur.vehicle_id = traj.vehicle_id;
        }
        cur.samples.push_back(s);
    }
    if (cur.samples.size() >= 2) {
        pieces.push_back(std::move(cur));
    }
    return pieces;
}

} // namespace enc
