#include "encounter/synth.hpp"

#include "encounter/error.hpp"
#include "encounter/geo.hpp"
#include "encounter/rng.hpp"

#include <cmath>
#include <cstdio>

namespace enc {

namespace {

constexpr double kEnvelopeM = 100.0; // extraction proximity threshold
constexpr double kRateHz = 10.0;
constexpr double kLaneOffsetM = 3.5; // lateral offset while overtaking

struct PairState {
    LocalPoint a;
    LocalPoint b;
};

// Noiseless positions at time t, before the scene rotation.
PairState scenario_positions(const ScenarioSpec& s, double t) {
    const double mid = s.duration_s / 2.0;
    PairState p{};
    switch (s.kind) {
    case ScenarioKind::CarFollowing: {
        const double x = s.speed_a * (t - mid);
        p.a = {x, 0.0};
        p.b = {x + s.gap_m, 0.0};
        break;
    }
    case ScenarioKind::OppositeDirection: {
        p.a = {s.speed_a * (t - mid), 0.0};
        p.b = {-s.speed_b * (t - mid), s.gap_m};
        break;
    }
    case ScenarioKind::Crossing: {
        // Vehicle b reaches the path intersection `delay` seconds after
        // vehicle a so that the closest approach equals gap_m.
        const double delay = s.gap_m * std::hypot(s.speed_a, s.speed_b) / (s.speed_a * s.speed_b);
        const double t_cross_a = mid - delay / 2.0;
        const double t_cross_b = mid + delay / 2.0;
        p.a = {s.speed_a * (t - t_cross_a), 0.0};
        p.b = {0.0, s.speed_b * (t - t_cross_b)};
        break;
    }
    case ScenarioKind::Merging: {
        // b converges from gap_m of lateral offset onto the lane over the
        // first half of the window, then runs parallel 25 m behind.
        const double v = s.speed_a;
        const double trailing = 25.0;
        const double progress = std::min(1.0, t / mid);
        p.a = {v * (t - mid), 0.0};
        p.b = {v * (t - mid) - trailing, s.gap_m * (1.0 - progress)};
        break;
    }
    case ScenarioKind::Overtaking: {
        p.a = {s.speed_a * (t - mid), 0.0};
        p.b = {s.speed_a * (t - mid) - s.gap_m + (s.speed_b - s.speed_a) * t, kLaneOffsetM};
        break;
    }
    }
    return p;
}

void validate_spec(const ScenarioSpec& s) {
    if (s.duration_s < 10.0) {
        throw invalid_input_error("scenario duration must be at least 10 s");
    }
    if (s.speed_a <= 0.0 || s.speed_b <= 0.0) {
        throw invalid_input_error("scenario speeds must be positive");
    }
    if (s.noise_sigma < 0.0) {
        throw invalid_input_error("noise sigma must be non-negative");
    }
    if (s.gap_m <= 0.0) {
        throw invalid_input_error("scenario gap must be positive");
    }
    if (s.kind == ScenarioKind::Overtaking && s.speed_b <= s.speed_a) {
        throw infeasible_spec_error("overtaking requires speed_b > speed_a");
    }
}

} // namespace

const char* scenario_kind_name(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::CarFollowing:
        return "car_following";
    case ScenarioKind::OppositeDirection:
        return "opposite_direction";
    case ScenarioKind::Crossing:
        return "crossing";
    case ScenarioKind::Merging:
        return "merging";
    case ScenarioKind::Overtaking:
        return "overtaking";
    }
    return "unknown";
}

ScenarioKind scenario_kind_from_name(const std::string& name) {
    for (int i = 0; i < kScenarioKindCount; ++i) {
        const auto kind = static_cast<ScenarioKind>(i);
        if (name == scenario_kind_name(kind)) {
            return kind;
        }
    }
    throw config_error("unknown scenario kind '" + name + "'");
}

double scenario_distance(const ScenarioSpec& spec, double t) {
    const PairState p = scenario_positions(spec, t);
    return std::hypot(p.a.x - p.b.x, p.a.y - p.b.y);
}

DrivingEncounter gen_encounter(const ScenarioSpec& spec, const std::string& id) {
    validate_spec(spec);
    const std::size_t n = static_cast<std::size_t>(std::lround(spec.duration_s * kRateHz)) + 1;
    const double cos_h = std::cos(spec.heading_rad);
    const double sin_h = std::sin(spec.heading_rad);
    Rng rng(spec.seed);

    DrivingEncounter enc;
    enc.id = id;
    enc.source_ids = {id + "_a", id + "_b"};
    enc.traj_a.anchor = {spec.anchor_lat, spec.anchor_lon};
    enc.traj_b.anchor = enc.traj_a.anchor;
    enc.traj_a.points.reserve(n);
    enc.traj_b.points.reserve(n);
    enc.traj_a.times.reserve(n);
    enc.traj_b.times.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        // Same arithmetic as the extraction grid so re-scans land exactly
        // on these sample times.
        const double t = static_cast<double>(i) * (1.0 / kRateHz);
        PairState p = scenario_positions(spec, t);
        const LocalPoint a{p.a.x * cos_h - p.a.y * sin_h + rng.gaussian(0.0, spec.noise_sigma),
                           p.a.x * sin_h + p.a.y * cos_h + rng.gaussian(0.0, spec.noise_sigma)};
        const LocalPoint b{p.b.x * cos_h - p.b.y * sin_h + rng.gaussian(0.0, spec.noise_sigma),
                           p.b.x * sin_h + p.b.y * cos_h + rng.gaussian(0.0, spec.noise_sigma)};
        if (local_distance_m(a, b) >= kEnvelopeM) {
            throw infeasible_spec_error(std::string(scenario_kind_name(spec.kind)) +
                                        " parameters breach the 100 m envelope at t=" +
                                        std::to_string(t));
        }
        enc.traj_a.points.push_back(a);
        enc.traj_b.points.push_back(b);
        enc.traj_a.times.push_back(t);
        enc.traj_b.times.push_back(t);
    }
    enc.duration = enc.traj_a.times.back() - enc.traj_a.times.front();
    return enc;
}

std::vector<LabeledEncounter> gen_corpus(int per_kind, const ScenarioSpec& base,
                                         std::uint64_t seed) {
    if (per_kind < 1) {
        throw invalid_input_error("per_kind must be at least 1");
    }

    // Feasible baselines per kind: worst-case jitter plus 3-sigma noise
    // stays inside the 100 m envelope.
    struct Baseline {
        double duration, speed_a, speed_b, gap;
    };
    const Baseline baselines[kScenarioKindCount] = {
        {30.0, 15.0, 15.0, 30.0}, // car_following
        {12.0, 5.0, 5.0, 16.0},   // opposite_direction
        {12.0, 7.0, 7.0, 12.0},   // crossing
        {18.0, 12.0, 12.0, 30.0}, // merging
        {20.0, 10.0, 0.0, 0.0},   // overtaking: speed_b and gap derived below
    };

    Rng rng(seed);
    std::vector<LabeledEncounter> out;
    out.reserve(static_cast<std::size_t>(per_kind) * kScenarioKindCount);
    const double deg10 = 10.0 * 3.14159265358979323846 / 180.0;

    int index = 0;
    for (int k = 0; k < kScenarioKindCount; ++k) {
        const Baseline& bl = baselines[k];
        for (int i = 0; i < per_kind; ++i, ++index) {
            ScenarioSpec spec = base;
            spec.kind = static_cast<ScenarioKind>(k);
            spec.duration_s = bl.duration;
            spec.speed_a = bl.speed_a * rng.uniform(0.7, 1.3);
            spec.heading_rad = rng.uniform(-deg10, deg10);
            spec.seed = rng.next_u64();
            if (spec.kind == ScenarioKind::Overtaking) {
                spec.speed_b = spec.speed_a * rng.uniform(1.15, 1.3);
                // Pass happens 30-70% of the way through the window.
                spec.gap_m = (spec.speed_b - spec.speed_a) * spec.duration_s * rng.uniform(0.3, 0.7);
            } else {
                spec.speed_b = bl.speed_b * rng.uniform(0.7, 1.3);
                spec.gap_m = bl.gap * rng.uniform(0.5, 1.5);
            }
            // Spread encounters over a lat/lon grid, ~2 km apart.
            spec.anchor_lat = base.anchor_lat + 0.022 * static_cast<double>(index / 16);
            spec.anchor_lon = base.anchor_lon + 0.030 * static_cast<double>(index % 16);

            char id[32];
            std::snprintf(id, sizeof(id), "syn%03d_%s", index, scenario_kind_name(spec.kind));
            LabeledEncounter le;
            le.encounter = gen_encounter(spec, id);
            le.label = spec.kind;
            out.push_back(std::move(le));
        }
    }
    return out;
}

std::vector<GpsTrajectory> to_gps_corpus(const std::vector<DrivingEncounter>& encounters) {
    std::vector<GpsTrajectory> out;
    out.reserve(2 * encounters.size());
    for (const DrivingEncounter& e : encounters) {
        GpsTrajectory ta;
        GpsTrajectory tb;
        ta.vehicle_id = e.source_ids.first;
        tb.vehicle_id = e.source_ids.second;
        for (std::size_t i = 0; i < e.length(); ++i) {
            ta.samples.push_back(local_to_gps(e.traj_a.points[i], e.traj_a.times[i], e.anchor()));
            tb.samples.push_back(local_to_gps(e.traj_b.points[i], e.traj_b.times[i], e.anchor()));
        }
        out.push_back(std::move(ta));
        out.push_back(std::move(tb));
    }
    return out;
}

} // namespace enc
