#ifndef ENCOUNTER_IO_HPP
#define ENCOUNTER_IO_HPP

#include "encounter/autoencoder.hpp"
#include "encounter/clustering.hpp"
#include "encounter/extraction.hpp"
#include "encounter/features.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace enc {

// Extracted or generated encounters plus optional per-encounter scenario
// labels (parallel to encounters; empty when unlabeled).
struct EncounterArchive {
    std::vector<DrivingEncounter> encounters;
    std::vector<std::string> labels;
};

// FNV-1a over raw bytes; used for content-addressing feature caches.
std::uint64_t fnv1a(const void* data, std::size_t size);
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string digest_hex(std::uint64_t digest);

// Writes content to a sibling temp file and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Trajectory CSV: header `vehicle_id,timestamp,latitude,longitude`; rows
// may arrive unsorted and are sorted per vehicle on load. Parse errors
// name the offending line.
std::vector<GpsTrajectory> load_trajectories_csv(const std::filesystem::path& path);
void save_trajectories_csv(const std::filesystem::path& path,
                           const std::vector<GpsTrajectory>& corpus);

// Encounter archive: <dir>/encounters.csv with schema
// `encounter_id,vehicle,step,t,x,y`, <dir>/manifest.json with ids,
// durations, source vehicle ids and anchors, and <dir>/labels.csv
// (`encounter_id,kind`) when labels are present.
void save_archive(const std::filesystem::path& dir, const EncounterArchive& archive);
EncounterArchive load_archive(const std::filesystem::path& dir);

// Feature cache: magic `ENCF1`, then kind tag, count and dim as
// little-endian u64, then count*dim little-endian doubles (row-major).
// The sidecar (same path with a .json suffix appended) maps row index to
// encounter id.
void save_feature_cache(const std::filesystem::path& path, const FeatureSet& fs);
FeatureSet load_feature_cache(const std::filesystem::path& path);
std::filesystem::path feature_sidecar_path(const std::filesystem::path& cache_path);

// Model checkpoint: magic `ENCM1`, little-endian u64 header length, a JSON
// header (dims, activation tags, seed, epochs and the feature kind it was
// trained for), then all weights and biases as little-endian doubles,
// layer-ordered (weights column-major, then bias, per layer).
void save_model(const std::filesystem::path& path, const AutoencoderModel& model,
                FeatureKind kind);
std::pair<AutoencoderModel, FeatureKind> load_model(const std::filesystem::path& path);

// Results CSV: `kind,k,seed,lambda_bc,lambda_wc,inertia,iterations`.
void save_results_csv(const std::filesystem::path& path, FeatureKind kind,
                      const std::vector<SweepRow>& rows);
// Medians CSV: `kind,k,median_lambda_bc,median_lambda_wc`.
void save_medians_csv(const std::filesystem::path& path, FeatureKind kind,
                      const std::vector<SweepMedian>& medians);
struct ResultsRow {
    std::string kind;
    SweepRow row;
};
std::vector<ResultsRow> load_results_csv(const std::filesystem::path& path);

// Assignments CSV: `encounter_id,cluster`.
void save_assignments_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                          const std::vector<int>& assignments);
std::vector<std::pair<std::string, int>> load_assignments_csv(const std::filesystem::path& path);

} // namespace enc

#endif
