#ifndef ENCOUNTER_SYNTH_HPP
#define ENCOUNTER_SYNTH_HPP

#include "encounter/extraction.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace enc {

enum class ScenarioKind {
    CarFollowing = 0,
    OppositeDirection = 1,
    Crossing = 2,
    Merging = 3,
    Overtaking = 4,
};

inline constexpr int kScenarioKindCount = 5;

const char* scenario_kind_name(ScenarioKind kind);
ScenarioKind scenario_kind_from_name(const std::string& name);

// Scenario parameters. gap_m is the kind's separation knob: the constant
// gap (car_following), the lateral passing offset (opposite_direction),
// the closest approach (crossing), the initial lateral offset (merging),
// or the initial trailing gap (overtaking). Kinds that need a common
// longitudinal speed (car_following, merging) use speed_a for both
// vehicles.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::CarFollowing;
    double duration_s = 20.0;
    double speed_a = 10.0;     // m/s
    double speed_b = 10.0;     // m/s
    double noise_sigma = 1.5;  // GPS noise std, meters
    std::uint64_t seed = 0;
    double gap_m = 30.0;
    double heading_rad = 0.0;  // rigid rotation of the whole scene
    double anchor_lat = 42.30; // degrees
    double anchor_lon = -83.70;
};

struct LabeledEncounter {
    DrivingEncounter encounter;
    ScenarioKind label = ScenarioKind::CarFollowing;
};

// Closed-form inter-vehicle distance at time t for the noiseless scenario;
// reference for the generator tests.
double scenario_distance(const ScenarioSpec& spec, double t);

// One encounter at 10 Hz with i.i.d. Gaussian positional noise. Throws
// invalid_input_error on bad parameters and infeasible_spec_error when any
// noisy sample reaches 100 m separation or an overtaking spec has
// speed_b <= speed_a.
DrivingEncounter gen_encounter(const ScenarioSpec& spec, const std::string& id = "syn");

// per_kind encounters of every scenario kind with seeded parameter jitter
// (speeds +/-30%, gaps +/-50%, headings +/-10 degrees). base contributes
// noise_sigma and the anchor area; durations, speeds and gaps come from
// per-kind baselines chosen to respect the 100 m envelope under jitter.
// Encounters are laid out on a lat/lon grid so corpora can round-trip
// through GPS export and re-extraction without cross-talk.
std::vector<LabeledEncounter> gen_corpus(int per_kind, const ScenarioSpec& base,
                                         std::uint64_t seed);

// GPS-space view of encounters: two trajectories per encounter with
// vehicle ids "<id>_a" and "<id>_b".
std::vector<GpsTrajectory> to_gps_corpus(const std::vector<DrivingEncounter>& encounters);

} // namespace enc

#endif
