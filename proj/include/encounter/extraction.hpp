#ifndef ENCOUNTER_EXTRACTION_HPP
#define ENCOUNTER_EXTRACTION_HPP

#include "encounter/geo.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace enc {

// A time-aligned pair of local-frame trajectories. Both trajectories share
// one timestamp grid and one projection anchor.
struct DrivingEncounter {
    std::string id;
    LocalTrajectory traj_a;
    LocalTrajectory traj_b;
    double duration = 0.0; // last grid time minus first
    std::pair<std::string, std::string> source_ids;

    std::size_t length() const { return traj_a.size(); }
    GeoAnchor anchor() const { return traj_a.anchor; }
};

// An encounter resampled to a fixed number of points per vehicle.
struct UnifiedEncounter {
    std::string id;
    std::vector<LocalPoint> points_a;
    std::vector<LocalPoint> points_b;

    std::size_t length() const { return points_a.size(); }
};

struct ExtractParams {
    double max_dist_m = 100.0;    // proximity threshold
    double min_duration_s = 10.0; // minimum qualifying segment duration
    double grid_hz = kDefaultGridHz;
    double max_gap_s = 1.0; // raw log gaps above this split a trajectory
    int threads = 1;
};

// Scans every unordered vehicle pair for maximal contiguous aligned
// segments with inter-vehicle distance below max_dist_m at all grid points
// and duration >= min_duration_s. Output is sorted by source id pair, then
// segment start time; ids are assigned in that order. Pairs whose
// max_dist-expanded bounding boxes do not intersect are skipped; results
// are identical to the exhaustive scan.
std::vector<DrivingEncounter> find_encounters(const std::vector<GpsTrajectory>& corpus,
                                              const ExtractParams& params = {});

// Resamples both trajectories to target_len points via resample_uniform.
UnifiedEncounter unify_encounter(const DrivingEncounter& enc, std::size_t target_len);

std::vector<UnifiedEncounter> unify_all(const std::vector<DrivingEncounter>& encs,
                                        std::size_t target_len, int threads = 1);

} // namespace enc

#endif
