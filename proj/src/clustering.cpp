#include "encounter/clustering.hpp"

#include "encounter/error.hpp"
#include "encounter/parallel.hpp"
#include "encounter/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace enc {

FeatureSet make_feature_set(const std::vector<FeatureRep>& reps) {
    if (reps.empty()) {
        throw invalid_input_error("feature set needs at least one representation");
    }
    const std::size_t dim = reps.front().data.size();
    FeatureSet fs;
    fs.kind = reps.front().kind;
    fs.rows.resize(static_cast<Eigen::Index>(reps.size()), static_cast<Eigen::Index>(dim));
    fs.ids.reserve(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (reps[i].data.size() != dim || reps[i].kind != fs.kind) {
            throw invalid_input_error("feature representations disagree in dimension or kind");
        }
        fs.rows.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(
            reps[i].data.data(), static_cast<Eigen::Index>(dim));
        fs.ids.push_back(reps[i].encounter_id);
    }
    return fs;
}

namespace {

// Squared distance of every row to every centroid, N x k.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& centroids) {
    const Eigen::VectorXd row_norms = rows.rowwise().squaredNorm();
    const Eigen::VectorXd cen_norms = centroids.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = -2.0 * (rows * centroids.transpose());
    d2.colwise() += row_norms;
    d2.rowwise() += cen_norms.transpose();
    return d2.cwiseMax(0.0);
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& rows, int k, Rng& rng) {
    const Eigen::Index n = rows.rows();
    Eigen::MatrixXd centroids(k, rows.cols());
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);

    Eigen::Index first = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    centroids.row(0) = rows.row(first);
    chosen[static_cast<std::size_t>(first)] = 1;

    Eigen::VectorXd best_d2 =
        (rows.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = best_d2.sum();
        Eigen::Index pick = -1;
        if (total > 0.0) {
            // Squared-distance-weighted draw via the cumulative sum.
            const double target = rng.uniform01() * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += best_d2[i];
                if (acc >= target && best_d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        if (pick < 0) {
            // All remaining mass sits on chosen/duplicate rows; take the
            // lowest unchosen index.
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!chosen[static_cast<std::size_t>(i)]) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.row(c) = rows.row(pick);
        chosen[static_cast<std::size_t>(pick)] = 1;
        best_d2 = best_d2.cwiseMin(
            (rows.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }
    return centroids;
}

} // namespace

ClusterResult kmeans(const FeatureSet& fs, int k, std::uint64_t seed, const KmeansParams& params) {
    const Eigen::Index n = fs.rows.rows();
    if (k < 1 || static_cast<Eigen::Index>(k) > n) {
        throw config_error("k must lie in [1, N]; got k=" + std::to_string(k) +
                           " for N=" + std::to_string(n));
    }

    Rng rng(seed);
    Eigen::MatrixXd centroids = kmeanspp_init(fs.rows, k, rng);

    ClusterResult res;
    res.k = k;
    res.seed = seed;
    res.assignments.assign(static_cast<std::size_t>(n), 0);

    for (int iter = 1; iter <= params.max_iter; ++iter) {
        res.iterations = iter;
        const Eigen::MatrixXd d2 = squared_distances(fs.rows, centroids);

        // Assignment; ties go to the lower cluster index.
        std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = d2(i, 0);
            for (int c = 1; c < k; ++c) {
                if (d2(i, c) < best_d) {
                    best_d = d2(i, c);
                    best = c;
                }
            }
            res.assignments[static_cast<std::size_t>(i)] = best;
            ++counts[static_cast<std::size_t>(best)];
        }

        // Empty-cluster repair: seize the point farthest from its centroid.
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                continue;
            }
            Eigen::Index worst = -1;
            double worst_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int owner = res.assignments[static_cast<std::size_t>(i)];
                if (counts[static_cast<std::size_t>(owner)] <= 1) {
                    continue; // do not empty another cluster
                }
                const double d = d2(i, owner);
                if (d > worst_d) {
                    worst_d = d;
                    worst = i;
                }
            }
            if (worst < 0) {
                break;
            }
            --counts[static_cast<std::size_t>(res.assignments[static_cast<std::size_t>(worst)])];
            res.assignments[static_cast<std::size_t>(worst)] = c;
            ++counts[static_cast<std::size_t>(c)];
        }

        // Update step.
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, fs.rows.cols());
        for (Eigen::Index i = 0; i < n; ++i) {
            next.row(res.assignments[static_cast<std::size_t>(i)]) += fs.rows.row(i);
        }
        double max_shift = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                next.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
            } else {
                next.row(c) = centroids.row(c);
            }
            max_shift = std::max(max_shift, (next.row(c) - centroids.row(c)).norm());
        }
        centroids = std::move(next);
        if (max_shift < params.tol) {
            break;
        }
    }

    res.centroids = std::move(centroids);
    res.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        res.inertia +=
            (fs.rows.row(i) - res.centroids.row(res.assignments[static_cast<std::size_t>(i)]))
                .squaredNorm();
    }
    return res;
}

ValidityMetrics validity(const FeatureSet& fs, const ClusterResult& res) {
    const Eigen::Index n = fs.rows.rows();
    const int j = res.k;
    if (j < 2) {
        throw undefined_metric_error("validity metrics need at least two clusters");
    }
    if (static_cast<Eigen::Index>(j) == n) {
        throw undefined_metric_error("validity metrics are undefined when every point is its own cluster");
    }
    if (res.assignments.size() != static_cast<std::size_t>(n)) {
        throw invalid_input_error("cluster result does not match the feature set");
    }

    const Eigen::RowVectorXd global_mean = fs.rows.colwise().mean();
    Eigen::MatrixXd cluster_means = Eigen::MatrixXd::Zero(j, fs.rows.cols());
    std::vector<double> counts(static_cast<std::size_t>(j), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = res.assignments[static_cast<std::size_t>(i)];
        cluster_means.row(c) += fs.rows.row(i);
        counts[static_cast<std::size_t>(c)] += 1.0;
    }
    for (int c = 0; c < j; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0.0) {
            throw invalid_input_error("cluster " + std::to_string(c) + " is empty");
        }
        cluster_means.row(c) /= counts[static_cast<std::size_t>(c)];
    }

    double bc = 0.0;
    for (int c = 0; c < j; ++c) {
        bc += (cluster_means.row(c) - global_mean).norm();
    }
    bc /= static_cast<double>(j - 1);

    double wc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = res.assignments[static_cast<std::size_t>(i)];
        wc += (fs.rows.row(i) - cluster_means.row(c)).norm() / counts[static_cast<std::size_t>(c)];
    }
    wc /= static_cast<double>(n - j);

    if (bc + wc == 0.0) {
        throw degenerate_metric_error("bc + wc is zero; lambda metrics are undefined");
    }
    ValidityMetrics out;
    out.bc = bc;
    out.wc = wc;
    out.lambda_bc = bc / (bc + wc);
    out.lambda_wc = wc / (bc + wc);
    return out;
}

double median_of(std::vector<double> values) {
    if (values.empty()) {
        throw invalid_input_error("median of empty list");
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return 0.5 * (values[mid - 1] + values[mid]);
}

SweepResult sweep_k(const FeatureSet& fs, int k_min, int k_max,
                    const std::vector<std::uint64_t>& seeds, const KmeansParams& params,
                    int threads) {
    const Eigen::Index n = fs.rows.rows();
    if (k_min < 2 || k_min > k_max || static_cast<Eigen::Index>(k_max) > n - 1) {
        throw config_error("sweep range must satisfy 2 <= k_min <= k_max <= N-1");
    }
    if (seeds.empty()) {
        throw config_error("sweep needs at least one seed");
    }

    const std::size_t n_k = static_cast<std::size_t>(k_max - k_min + 1);
    SweepResult out;
    out.rows.resize(n_k * seeds.size());
    parallel_for(out.rows.size(), threads, [&](std::size_t idx) {
        const int k = k_min + static_cast<int>(idx / seeds.size());
        const std::uint64_t seed = seeds[idx % seeds.size()];
        const ClusterResult res = kmeans(fs, k, seed, params);
        const ValidityMetrics vm = validity(fs, res);
        out.rows[idx] = SweepRow{k, seed, vm.lambda_bc, vm.lambda_wc, res.inertia, res.iterations};
    });

    out.medians.reserve(n_k);
    for (std::size_t ki = 0; ki < n_k; ++ki) {
        std::vector<double> lbc;
        std::vector<double> lwc;
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            lbc.push_back(out.rows[ki * seeds.size() + s].lambda_bc);
            lwc.push_back(out.rows[ki * seeds.size() + s].lambda_wc);
        }
        out.medians.push_back(
            SweepMedian{k_min + static_cast<int>(ki), median_of(lbc), median_of(lwc)});
    }
    return out;
}

double adjusted_rand_index(const std::vector<int>& labels, const std::vector<int>& truth) {
    if (labels.size() != truth.size()) {
        throw invalid_input_error("label vectors differ in length");
    }
    if (labels.size() < 2) {
        throw invalid_input_error("adjusted rand index needs at least two items");
    }

    auto compact = [](const std::vector<int>& v) {
        std::vector<int> ids(v);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        std::vector<std::size_t> mapped(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            mapped[i] = static_cast<std::size_t>(
                std::lower_bound(ids.begin(), ids.end(), v[i]) - ids.begin());
        }
        return std::make_pair(mapped, ids.size());
    };
    const auto [la, na] = compact(labels);
    const auto [lb, nb] = compact(truth);

    std::vector<double> table(na * nb, 0.0);
    std::vector<double> row_sums(na, 0.0);
    std::vector<double> col_sums(nb, 0.0);
    for (std::size_t i = 0; i < la.size(); ++i) {
        table[la[i] * nb + lb[i]] += 1.0;
        row_sums[la[i]] += 1.0;
        col_sums[lb[i]] += 1.0;
    }

    auto choose2 = [](double m) { return m * (m - 1.0) / 2.0; };
    double sum_cells = 0.0;
    for (double v : table) {
        sum_cells += choose2(v);
    }
    double sum_rows = 0.0;
    for (double v : row_sums) {
        sum_rows += choose2(v);
    }
    double sum_cols = 0.0;
    for (double v : col_sums) {
        sum_cols += choose2(v);
    }
    const double total_pairs = choose2(static_cast<double>(la.size()));
    const double expected = sum_rows * sum_cols / total_pairs;
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) {
        return 1.0; // both partitions trivial and identical in pair structure
    }
    return (sum_cells - expected) / (max_index - expected);
}

int plateau_k(const std::vector<SweepMedian>& medians, double threshold) {
    for (std::size_t i = 1; i < medians.size(); ++i) {
        if (std::fabs(medians[i].lambda_wc - medians[i - 1].lambda_wc) < threshold) {
            return medians[i].k;
        }
    }
    return 0;
}

} // namespace enc
