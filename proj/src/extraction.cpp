#include "encounter/extraction.hpp"

#include "encounter/error.hpp"
#include "encounter/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace enc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMetersPerDegree = kEarthRadiusM * kPi / 180.0;

struct GeoBounds {
    double lat_min, lat_max, lon_min, lon_max;
    double t_min, t_max;
};

GeoBounds bounds_of(const GpsTrajectory& traj) {
    GeoBounds b{90.0, -90.0, 180.0, -180.0, traj.samples.front().timestamp,
                traj.samples.back().timestamp};
    for (const GpsSample& s : traj.samples) {
        b.lat_min = std::min(b.lat_min, s.latitude);
        b.lat_max = std::max(b.lat_max, s.latitude);
        b.lon_min = std::min(b.lon_min, s.longitude);
        b.lon_max = std::max(b.lon_max, s.longitude);
    }
    return b;
}

// Conservative: any pair that could come within max_dist_m passes.
bool boxes_may_meet(const GeoBounds& a, const GeoBounds& b, double max_dist_m, double dt) {
    if (std::min(a.t_max, b.t_max) - std::max(a.t_min, b.t_min) < dt) {
        return false;
    }
    const double pad_lat = max_dist_m / kMetersPerDegree * 1.05;
    const double max_abs_lat =
        std::min(89.0, std::max({std::fabs(a.lat_min), std::fabs(a.lat_max),
                                 std::fabs(b.lat_min), std::fabs(b.lat_max)}));
    const double pad_lon = pad_lat / std::cos(max_abs_lat * kPi / 180.0);
    const bool lat_ok = a.lat_min - pad_lat <= b.lat_max && b.lat_min - pad_lat <= a.lat_max;
    const bool lon_ok = a.lon_min - pad_lon <= b.lon_max && b.lon_min - pad_lon <= a.lon_max;
    return lat_ok && lon_ok;
}

GpsSample gps_interpolate(const GpsTrajectory& traj, double t) {
    const auto& s = traj.samples;
    auto it = std::upper_bound(s.begin(), s.end(), t,
                               [](double v, const GpsSample& g) { return v < g.timestamp; });
    std::size_t hi = static_cast<std::size_t>(it - s.begin());
    if (hi == 0) {
        hi = 1;
    } else if (hi >= s.size()) {
        hi = s.size() - 1;
    }
    const GpsSample& g0 = s[hi - 1];
    const GpsSample& g1 = s[hi];
    const double w = (t - g0.timestamp) / (g1.timestamp - g0.timestamp);
    GpsSample out;
    out.timestamp = t;
    out.latitude = g0.latitude + w * (g1.latitude - g0.latitude);
    out.longitude = g0.longitude + w * (g1.longitude - g0.longitude);
    return out;
}

LocalTrajectory slice(const LocalTrajectory& traj, std::size_t lo, std::size_t hi) {
    LocalTrajectory out;
    out.anchor = traj.anchor;
    out.points.assign(traj.points.begin() + lo, traj.points.begin() + hi + 1);
    out.times.assign(traj.times.begin() + lo, traj.times.begin() + hi + 1);
    return out;
}

void validate_trajectory(const GpsTrajectory& traj) {
    if (traj.samples.size() < 2) {
        throw invalid_input_error("trajectory '" + traj.vehicle_id + "' has fewer than two samples");
    }
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        if (!(traj.samples[i].timestamp > traj.samples[i - 1].timestamp)) {
            throw invalid_input_error("trajectory '" + traj.vehicle_id +
                                      "' timestamps are not strictly increasing");
        }
    }
}

} // namespace

std::vector<DrivingEncounter> find_encounters(const std::vector<GpsTrajectory>& corpus,
                                              const ExtractParams& params) {
    if (params.max_dist_m <= 0.0 || params.min_duration_s <= 0.0 || params.grid_hz <= 0.0) {
        throw config_error("extraction thresholds must be positive");
    }

    std::vector<GpsTrajectory> pieces;
    for (const GpsTrajectory& traj : corpus) {
        if (traj.samples.size() < 2) {
            continue; // a single fix can never form an encounter
        }
        validate_trajectory(traj);
        for (GpsTrajectory& piece : split_on_gaps(traj, params.max_gap_s)) {
            pieces.push_back(std::move(piece));
        }
    }

    std::vector<GeoBounds> boxes;
    boxes.reserve(pieces.size());
    for (const GpsTrajectory& p : pieces) {
        boxes.push_back(bounds_of(p));
    }

    const double dt = 1.0 / params.grid_hz;
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            if (pieces[i].vehicle_id == pieces[j].vehicle_id) {
                continue;
            }
            if (boxes_may_meet(boxes[i], boxes[j], params.max_dist_m, dt)) {
                candidates.emplace_back(i, j);
            }
        }
    }

    std::vector<std::vector<DrivingEncounter>> found(candidates.size());
    parallel_for(candidates.size(), params.threads, [&](std::size_t c) {
        const GpsTrajectory& raw_a = pieces[candidates[c].first];
        const GpsTrajectory& raw_b = pieces[candidates[c].second];
        const double t_lo = std::max(raw_a.samples.front().timestamp, raw_b.samples.front().timestamp);

        // One frame per pair overlap: the midpoint of the first aligned
        // samples. Scan and output share this frame, so re-scanning an
        // emitted encounter reproduces the same distances.
        const GpsSample a0 = gps_interpolate(raw_a, t_lo);
        const GpsSample b0 = gps_interpolate(raw_b, t_lo);
        GeoAnchor anchor{(a0.latitude + b0.latitude) / 2.0, (a0.longitude + b0.longitude) / 2.0};

        std::pair<LocalTrajectory, LocalTrajectory> aligned;
        try {
            aligned = align_pair(project_to_local(raw_a, anchor), project_to_local(raw_b, anchor),
                                 params.grid_hz);
        } catch (const no_overlap_error&) {
            return;
        }
        const LocalTrajectory& ga = aligned.first;
        const LocalTrajectory& gb = aligned.second;

        const double duration_eps = dt * 1e-6;
        const std::string id_a = std::min(raw_a.vehicle_id, raw_b.vehicle_id);
        const std::string id_b = std::max(raw_a.vehicle_id, raw_b.vehicle_id);
        const bool a_first = raw_a.vehicle_id <= raw_b.vehicle_id;

        std::size_t run_start = 0;
        bool in_run = false;
        const std::size_t n = ga.size();
        for (std::size_t i = 0; i <= n; ++i) {
            const bool close = i < n && local_distance_m(ga.points[i], gb.points[i]) < params.max_dist_m;
            if (close && !in_run) {
                run_start = i;
                in_run = true;
            } else if (!close && in_run) {
                in_run = false;
                const std::size_t last = i - 1;
                const double duration = ga.times[last] - ga.times[run_start];
                if (duration + duration_eps >= params.min_duration_s) {
                    DrivingEncounter e;
                    e.traj_a = slice(a_first ? ga : gb, run_start, last);
                    e.traj_b = slice(a_first ? gb : ga, run_start, last);
                    e.duration = duration;
                    e.source_ids = {id_a, id_b};
                    found[c].push_back(std::move(e));
                }
            }
        }
    });

    std::vector<DrivingEncounter> result;
    for (auto& group : found) {
        for (auto& e : group) {
            result.push_back(std::move(e));
        }
    }
    std::sort(result.begin(), result.end(), [](const DrivingEncounter& x, const DrivingEncounter& y) {
        if (x.source_ids != y.source_ids) {
            return x.source_ids < y.source_ids;
        }
        return x.traj_a.times.front() < y.traj_a.times.front();
    });
    for (std::size_t i = 0; i < result.size(); ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "enc%06zu", i);
        result[i].id = buf;
    }
    return result;
}

UnifiedEncounter unify_encounter(const DrivingEncounter& enc, std::size_t target_len) {
    UnifiedEncounter out;
    out.id = enc.id;
    out.points_a = resample_uniform(enc.traj_a, target_len).points;
    out.points_b = resample_uniform(enc.traj_b, target_len).points;
    return out;
}

std::vector<UnifiedEncounter> unify_all(const std::vector<DrivingEncounter>& encs,
                                        std::size_t target_len, int threads) {
    std::vector<UnifiedEncounter> out(encs.size());
    parallel_for(encs.size(), threads,
                 [&](std::size_t i) { out[i] = unify_encounter(encs[i], target_len); });
    return out;
}

} // namespace enc
