#ifndef ENCOUNTER_FEATURES_HPP
#define ENCOUNTER_FEATURES_HPP

#include "encounter/autoencoder.hpp"
#include "encounter/extraction.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace enc {

// Representation pipelines. The numeric values double as the kind tags in
// the feature cache file format.
enum class FeatureKind : std::uint64_t {
    Dtw = 0,   // cross-distance matrix, flattened row-major
    Ned = 1,   // normalized per-step distance vector
    Ae = 2,    // latent code of the normalized raw trajectory pair
    DtwAe = 3, // latent code of the flattened cross-distance matrix
    NedAe = 4, // latent code of the normalized distance vector
};

const char* feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(const std::string& name);
bool feature_kind_uses_model(FeatureKind kind);

// Cross-distance matrix: entry (m, n) is the Euclidean distance between
// vehicle a's m-th point and vehicle b's n-th point, meters.
struct FeatureMatrix {
    std::size_t n = 0;
    std::vector<double> values; // n*n, row-major

    double at(std::size_t m, std::size_t k) const { return values[m * n + k]; }
};

// Per-step inter-vehicle distance scaled by its maximum, values in [0, 1].
struct FeatureVector {
    std::vector<double> values;
};

struct FeatureRep {
    std::string encounter_id;
    FeatureKind kind = FeatureKind::Dtw;
    std::vector<double> data;
};

FeatureMatrix dtw_matrix(const UnifiedEncounter& enc);

// All-zero when the trajectories coincide everywhere (max distance 0).
FeatureVector ned_vector(const UnifiedEncounter& enc);

// Raw-trajectory autoencoder input: rows [x_a, y_a, x_b, y_b] per step,
// flattened row-major and scaled by 1/max|coordinate| into [-1, 1].
std::vector<double> ae_raw_input(const UnifiedEncounter& enc);

// One FeatureRep per encounter, input order preserved. AE kinds require a
// model whose input dimension matches the kind (config_error when missing,
// invalid_input_error on dimension mismatch).
std::vector<FeatureRep> featurize(const std::vector<UnifiedEncounter>& encs, FeatureKind kind,
                                  const AutoencoderModel* model = nullptr, int threads = 1);

// The autoencoder input vector for one encounter under the given kind.
std::vector<double> ae_input_for_kind(const UnifiedEncounter& enc, FeatureKind kind);

// Expected featurize input dimension for AE kinds at unified length kbar.
std::size_t ae_input_dim(FeatureKind kind, std::size_t kbar);

} // namespace enc

#endif
