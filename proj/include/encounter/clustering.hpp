#ifndef ENCOUNTER_CLUSTERING_HPP
#define ENCOUNTER_CLUSTERING_HPP

#include "encounter/features.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace enc {

// N feature vectors of equal dimension, one encounter id per row.
struct FeatureSet {
    FeatureKind kind = FeatureKind::Dtw;
    Eigen::MatrixXd rows; // N x dim
    std::vector<std::string> ids;

    std::size_t size() const { return static_cast<std::size_t>(rows.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(rows.cols()); }
};

FeatureSet make_feature_set(const std::vector<FeatureRep>& reps);

struct KmeansParams {
    int max_iter = 300;
    double tol = 1e-6; // max centroid shift below this ends Lloyd iteration
};

struct ClusterResult {
    int k = 0;
    std::vector<int> assignments; // cluster index in [0, k) per row
    Eigen::MatrixXd centroids;    // k x dim
    double inertia = 0.0;         // sum of squared distances to assigned centroids
    std::uint64_t seed = 0;
    int iterations = 0;
};

struct ValidityMetrics {
    double bc = 0.0;
    double wc = 0.0;
    double lambda_bc = 0.0;
    double lambda_wc = 0.0;
};

struct SweepRow {
    int k = 0;
    std::uint64_t seed = 0;
    double lambda_bc = 0.0;
    double lambda_wc = 0.0;
    double inertia = 0.0;
    int iterations = 0;
};

struct SweepMedian {
    int k = 0;
    double lambda_bc = 0.0;
    double lambda_wc = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;       // sorted by (k, seed)
    std::vector<SweepMedian> medians; // one per k
};

// Lloyd iterations from k-means++ style seeding. Squared-Euclidean
// assignment breaks ties toward the lower cluster index; empty clusters
// seize the point farthest from its assigned centroid. Deterministic for a
// fixed seed. Throws config_error when k < 1 or k > N.
ClusterResult kmeans(const FeatureSet& fs, int k, std::uint64_t seed,
                     const KmeansParams& params = {});

// Between-/within-cluster dispersion on plain Euclidean distances:
//   bc = sum_j D(global mean, mean_j) / (J - 1)
//   wc = sum_j sum_i D(x_ji, mean_j) / |X_j| / (N - J)
// lambda_bc and lambda_wc are the two shares of bc + wc. Throws
// undefined_metric_error when k < 2 or N == J, degenerate_metric_error
// when bc + wc == 0.
ValidityMetrics validity(const FeatureSet& fs, const ClusterResult& res);

// One kmeans+validity run per (k, seed), plus per-k medians across seeds.
SweepResult sweep_k(const FeatureSet& fs, int k_min, int k_max,
                    const std::vector<std::uint64_t>& seeds, const KmeansParams& params = {},
                    int threads = 1);

// Chance-corrected pair-counting agreement between two labelings.
double adjusted_rand_index(const std::vector<int>& labels, const std::vector<int>& truth);

// First k whose median lambda_wc changes by less than `threshold` from the
// previous k; 0 when no plateau is reached.
int plateau_k(const std::vector<SweepMedian>& medians, double threshold = 0.01);

double median_of(std::vector<double> values);

} // namespace enc

#endif
