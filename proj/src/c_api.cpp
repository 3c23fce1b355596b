#include "encounter.h"

#include "encounter/autoencoder.hpp"
#include "encounter/clustering.hpp"
#include "encounter/error.hpp"
#include "encounter/export.hpp"
#include "encounter/extraction.hpp"
#include "encounter/features.hpp"
#include "encounter/io.hpp"
#include "encounter/synth.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

struct enc_corpus {
    std::vector<enc::GpsTrajectory> trajectories;
};

struct enc_archive {
    enc::EncounterArchive archive;
};

struct enc_features {
    enc::FeatureSet fs;
};

struct enc_model {
    enc::AutoencoderModel model;
    enc::FeatureKind kind;
};

struct enc_clustering {
    enc::ClusterResult result;
};

struct enc_sweep {
    enc::SweepResult sweep;
    enc::FeatureKind kind;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Runs fn, translating exceptions into status codes + the thread-local
// message.
template <typename Fn>
enc_status guarded(Fn&& fn) {
    try {
        fn();
        return ENC_OK;
    } catch (const enc::io_error& e) {
        set_error(e.what());
        return ENC_ERR_IO;
    } catch (const enc::numeric_error& e) {
        set_error(e.what());
        return ENC_ERR_NUMERIC;
    } catch (const enc::error& e) {
        set_error(e.what());
        return ENC_ERR_INVALID;
    } catch (const std::exception& e) {
        set_error(e.what());
        return ENC_ERR_NUMERIC;
    }
}

enc_status require(bool cond, const char* msg) {
    if (!cond) {
        set_error(msg);
        return ENC_ERR_INVALID;
    }
    return ENC_OK;
}

enc_status copy_string(const std::string& s, char* buf, size_t buf_len) {
    if (buf == nullptr || buf_len < s.size() + 1) {
        set_error("output buffer too small (" + std::to_string(s.size() + 1) + " bytes needed)");
        return ENC_ERR_INVALID;
    }
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return ENC_OK;
}

enc::FeatureKind to_kind(int kind) {
    if (kind < 0 || kind > static_cast<int>(enc::FeatureKind::NedAe)) {
        throw enc::config_error("kind tag " + std::to_string(kind) + " is out of range");
    }
    return static_cast<enc::FeatureKind>(kind);
}

// Per-encounter autoencoder inputs for a kind, one sample per column.
Eigen::MatrixXd ae_dataset(const enc::EncounterArchive& archive, enc::FeatureKind kind,
                           std::size_t kbar, int threads) {
    const std::vector<enc::UnifiedEncounter> unified =
        enc::unify_all(archive.encounters, kbar, threads);
    const std::size_t dim = enc::ae_input_dim(kind, kbar);
    Eigen::MatrixXd data(static_cast<Eigen::Index>(dim),
                         static_cast<Eigen::Index>(unified.size()));
    for (std::size_t i = 0; i < unified.size(); ++i) {
        const std::vector<double> input = enc::ae_input_for_kind(unified[i], kind);
        data.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(
            input.data(), static_cast<Eigen::Index>(input.size()));
    }
    return data;
}

} // namespace

extern "C" {

const char* enc_version(void) { return "1.0.0"; }

const char* enc_last_error(void) { return g_last_error.c_str(); }

enc_status enc_kind_from_name(const char* name, int* kind_out) {
    if (enc_status s = require(name && kind_out, "null argument")) {
        return s;
    }
    return guarded([&] { *kind_out = static_cast<int>(enc::feature_kind_from_name(name)); });
}

const char* enc_kind_name(int kind) {
    if (kind < 0 || kind > static_cast<int>(enc::FeatureKind::NedAe)) {
        return "unknown";
    }
    return enc::feature_kind_name(static_cast<enc::FeatureKind>(kind));
}

int enc_kind_uses_model(int kind) {
    return kind >= 0 && kind <= static_cast<int>(enc::FeatureKind::NedAe) &&
                   enc::feature_kind_uses_model(static_cast<enc::FeatureKind>(kind))
               ? 1
               : 0;
}

enc_status enc_digest_file(const char* path, uint64_t* digest_out) {
    if (enc_status s = require(path && digest_out, "null argument")) {
        return s;
    }
    return guarded([&] { *digest_out = enc::fnv1a_file(path); });
}

/* ---- corpus ------------------------------------------------------- */

enc_status enc_corpus_load_csv(const char* path, enc_corpus** out) {
    if (enc_status s = require(path && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        auto corpus = std::make_unique<enc_corpus>();
        corpus->trajectories = enc::load_trajectories_csv(path);
        *out = corpus.release();
    });
}

enc_status enc_corpus_size(const enc_corpus* corpus, uint64_t* out) {
    if (enc_status s = require(corpus && out, "null argument")) {
        return s;
    }
    *out = corpus->trajectories.size();
    return ENC_OK;
}

void enc_corpus_free(enc_corpus* corpus) { delete corpus; }

/* ---- extraction and synthesis ------------------------------------- */

void enc_extract_params_init(enc_extract_params* params) {
    if (params) {
        *params = enc_extract_params{100.0, 10.0, 10.0, 1.0, 1};
    }
}

enc_status enc_extract(const enc_corpus* corpus, const enc_extract_params* params,
                       enc_archive** out) {
    if (enc_status s = require(corpus && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        enc::ExtractParams p;
        if (params) {
            p.max_dist_m = params->max_dist_m;
            p.min_duration_s = params->min_duration_s;
            p.grid_hz = params->grid_hz;
            p.max_gap_s = params->max_gap_s;
            p.threads = params->threads;
        }
        auto archive = std::make_unique<enc_archive>();
        archive->archive.encounters = enc::find_encounters(corpus->trajectories, p);
        *out = archive.release();
    });
}

void enc_synth_params_init(enc_synth_params* params) {
    if (params) {
        *params = enc_synth_params{40, 1.5, 42.30, -83.70, 0};
    }
}

enc_status enc_synth(const enc_synth_params* params, enc_archive** out) {
    if (enc_status s = require(out, "null argument")) {
        return s;
    }
    return guarded([&] {
        enc_synth_params p;
        enc_synth_params_init(&p);
        if (params) {
            p = *params;
        }
        enc::ScenarioSpec base;
        base.noise_sigma = p.noise_sigma;
        base.anchor_lat = p.anchor_lat;
        base.anchor_lon = p.anchor_lon;
        const std::vector<enc::LabeledEncounter> corpus =
            enc::gen_corpus(p.per_kind, base, p.seed);
        auto archive = std::make_unique<enc_archive>();
        archive->archive.encounters.reserve(corpus.size());
        archive->archive.labels.reserve(corpus.size());
        for (const enc::LabeledEncounter& le : corpus) {
            archive->archive.encounters.push_back(le.encounter);
            archive->archive.labels.push_back(enc::scenario_kind_name(le.label));
        }
        *out = archive.release();
    });
}

/* ---- archive ------------------------------------------------------ */

enc_status enc_archive_save(const enc_archive* archive, const char* dir) {
    if (enc_status s = require(archive && dir, "null argument")) {
        return s;
    }
    return guarded([&] { enc::save_archive(dir, archive->archive); });
}

enc_status enc_archive_load(const char* dir, enc_archive** out) {
    if (enc_status s = require(dir && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        auto archive = std::make_unique<enc_archive>();
        archive->archive = enc::load_archive(dir);
        *out = archive.release();
    });
}

enc_status enc_archive_size(const enc_archive* archive, uint64_t* out) {
    if (enc_status s = require(archive && out, "null argument")) {
        return s;
    }
    *out = archive->archive.encounters.size();
    return ENC_OK;
}

enc_status enc_archive_encounter_id(const enc_archive* archive, uint64_t index, char* buf,
                                    size_t buf_len) {
    if (enc_status s = require(archive, "null argument")) {
        return s;
    }
    if (enc_status s =
            require(index < archive->archive.encounters.size(), "encounter index out of range")) {
        return s;
    }
    return copy_string(archive->archive.encounters[index].id, buf, buf_len);
}

enc_status enc_archive_label(const enc_archive* archive, uint64_t index, char* buf,
                             size_t buf_len) {
    if (enc_status s = require(archive, "null argument")) {
        return s;
    }
    if (enc_status s =
            require(index < archive->archive.encounters.size(), "encounter index out of range")) {
        return s;
    }
    const std::string label =
        archive->archive.labels.empty() ? std::string() : archive->archive.labels[index];
    return copy_string(label, buf, buf_len);
}

enc_status enc_archive_save_gps_csv(const enc_archive* archive, const char* path) {
    if (enc_status s = require(archive && path, "null argument")) {
        return s;
    }
    return guarded([&] {
        enc::save_trajectories_csv(path, enc::to_gps_corpus(archive->archive.encounters));
    });
}

void enc_archive_free(enc_archive* archive) { delete archive; }

/* ---- features ------------------------------------------------------ */

enc_status enc_featurize(const enc_archive* archive, int kind, uint64_t kbar,
                         const enc_model* model, int threads, enc_features** out) {
    if (enc_status s = require(archive && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        const enc::FeatureKind fkind = to_kind(kind);
        if (enc::feature_kind_uses_model(fkind)) {
            if (model == nullptr) {
                throw enc::config_error(std::string("feature kind '") +
                                        enc::feature_kind_name(fkind) +
                                        "' requires a trained model");
            }
            if (model->kind != fkind) {
                throw enc::config_error(std::string("model was trained for kind '") +
                                        enc::feature_kind_name(model->kind) + "', not '" +
                                        enc::feature_kind_name(fkind) + "'");
            }
        }
        const std::vector<enc::UnifiedEncounter> unified =
            enc::unify_all(archive->archive.encounters, kbar, threads);
        const std::vector<enc::FeatureRep> reps =
            enc::featurize(unified, fkind, model ? &model->model : nullptr, threads);
        auto features = std::make_unique<enc_features>();
        features->fs = enc::make_feature_set(reps);
        *out = features.release();
    });
}

enc_status enc_features_save(const enc_features* features, const char* path) {
    if (enc_status s = require(features && path, "null argument")) {
        return s;
    }
    return guarded([&] { enc::save_feature_cache(path, features->fs); });
}

enc_status enc_features_load(const char* path, enc_features** out) {
    if (enc_status s = require(path && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        auto features = std::make_unique<enc_features>();
        features->fs = enc::load_feature_cache(path);
        *out = features.release();
    });
}

enc_status enc_features_dims(const enc_features* features, uint64_t* count, uint64_t* dim) {
    if (enc_status s = require(features && count && dim, "null argument")) {
        return s;
    }
    *count = features->fs.size();
    *dim = features->fs.dim();
    return ENC_OK;
}

enc_status enc_features_kind(const enc_features* features, int* kind) {
    if (enc_status s = require(features && kind, "null argument")) {
        return s;
    }
    *kind = static_cast<int>(features->fs.kind);
    return ENC_OK;
}

enc_status enc_features_encounter_id(const enc_features* features, uint64_t row, char* buf,
                                     size_t buf_len) {
    if (enc_status s = require(features, "null argument")) {
        return s;
    }
    if (enc_status s = require(row < features->fs.ids.size(), "feature row out of range")) {
        return s;
    }
    return copy_string(features->fs.ids[row], buf, buf_len);
}

void enc_features_free(enc_features* features) { delete features; }

/* ---- autoencoder ---------------------------------------------------- */

void enc_ae_config_init(enc_ae_config* config) {
    if (config) {
        *config = enc_ae_config{64, 10, 200, 1e-3, 32, 0};
    }
}

enc_status enc_train_ae(const enc_archive* archive, int kind, uint64_t kbar,
                        const enc_ae_config* config, int threads, enc_model** out,
                        double* first_epoch_loss, double* last_epoch_loss) {
    if (enc_status s = require(archive && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        const enc::FeatureKind fkind = to_kind(kind);
        if (!enc::feature_kind_uses_model(fkind)) {
            throw enc::config_error(std::string("kind '") + enc::feature_kind_name(fkind) +
                                    "' does not use an autoencoder");
        }
        enc_ae_config cfg;
        enc_ae_config_init(&cfg);
        if (config) {
            cfg = *config;
        }
        const Eigen::MatrixXd data = ae_dataset(archive->archive, fkind, kbar, threads);
        const std::vector<std::size_t> dims = {static_cast<std::size_t>(data.rows()), cfg.hidden,
                                               cfg.latent, cfg.hidden,
                                               static_cast<std::size_t>(data.rows())};
        enc::TrainConfig tc;
        tc.epochs = cfg.epochs;
        tc.learning_rate = cfg.learning_rate;
        tc.batch_size = cfg.batch_size;
        tc.seed = cfg.seed;
        enc::TrainResult trained = enc::ae_train(enc::ae_init(dims, cfg.seed), data, tc);
        if (first_epoch_loss) {
            *first_epoch_loss = trained.epoch_loss.front();
        }
        if (last_epoch_loss) {
            *last_epoch_loss = trained.epoch_loss.back();
        }
        auto model = std::make_unique<enc_model>();
        model->model = std::move(trained.model);
        model->kind = fkind;
        *out = model.release();
    });
}

enc_status enc_model_save(const enc_model* model, const char* path) {
    if (enc_status s = require(model && path, "null argument")) {
        return s;
    }
    return guarded([&] { enc::save_model(path, model->model, model->kind); });
}

enc_status enc_model_load(const char* path, enc_model** out) {
    if (enc_status s = require(path && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        auto model = std::make_unique<enc_model>();
        auto [m, kind] = enc::load_model(path);
        model->model = std::move(m);
        model->kind = kind;
        *out = model.release();
    });
}

enc_status enc_model_input_dim(const enc_model* model, uint64_t* out) {
    if (enc_status s = require(model && out, "null argument")) {
        return s;
    }
    *out = model->model.input_dim();
    return ENC_OK;
}

enc_status enc_model_kind(const enc_model* model, int* kind) {
    if (enc_status s = require(model && kind, "null argument")) {
        return s;
    }
    *kind = static_cast<int>(model->kind);
    return ENC_OK;
}

void enc_model_free(enc_model* model) { delete model; }

/* ---- clustering ----------------------------------------------------- */

enc_status enc_kmeans(const enc_features* features, uint32_t k, uint64_t seed, uint32_t max_iter,
                      double tol, enc_clustering** out) {
    if (enc_status s = require(features && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        enc::KmeansParams params;
        if (max_iter > 0) {
            params.max_iter = static_cast<int>(max_iter);
        }
        if (tol > 0.0) {
            params.tol = tol;
        }
        auto clustering = std::make_unique<enc_clustering>();
        clustering->result = enc::kmeans(features->fs, static_cast<int>(k), seed, params);
        *out = clustering.release();
    });
}

enc_status enc_clustering_k(const enc_clustering* clustering, uint32_t* out) {
    if (enc_status s = require(clustering && out, "null argument")) {
        return s;
    }
    *out = static_cast<uint32_t>(clustering->result.k);
    return ENC_OK;
}

enc_status enc_clustering_inertia(const enc_clustering* clustering, double* out) {
    if (enc_status s = require(clustering && out, "null argument")) {
        return s;
    }
    *out = clustering->result.inertia;
    return ENC_OK;
}

enc_status enc_clustering_iterations(const enc_clustering* clustering, uint32_t* out) {
    if (enc_status s = require(clustering && out, "null argument")) {
        return s;
    }
    *out = static_cast<uint32_t>(clustering->result.iterations);
    return ENC_OK;
}

enc_status enc_clustering_assignments(const enc_clustering* clustering, int32_t* buf,
                                      uint64_t buf_len) {
    if (enc_status s = require(clustering && buf, "null argument")) {
        return s;
    }
    if (enc_status s = require(buf_len >= clustering->result.assignments.size(),
                               "assignment buffer too small")) {
        return s;
    }
    for (std::size_t i = 0; i < clustering->result.assignments.size(); ++i) {
        buf[i] = clustering->result.assignments[i];
    }
    return ENC_OK;
}

enc_status enc_clustering_save_assignments(const enc_clustering* clustering,
                                           const enc_features* features, const char* path) {
    if (enc_status s = require(clustering && features && path, "null argument")) {
        return s;
    }
    return guarded([&] {
        if (features->fs.ids.size() != clustering->result.assignments.size()) {
            throw enc::invalid_input_error("clustering does not match the feature set");
        }
        enc::save_assignments_csv(path, features->fs.ids, clustering->result.assignments);
    });
}

void enc_clustering_free(enc_clustering* clustering) { delete clustering; }

enc_status enc_validity(const enc_features* features, const enc_clustering* clustering,
                        double* bc, double* wc, double* lambda_bc, double* lambda_wc) {
    if (enc_status s = require(features && clustering, "null argument")) {
        return s;
    }
    return guarded([&] {
        const enc::ValidityMetrics vm = enc::validity(features->fs, clustering->result);
        if (bc) {
            *bc = vm.bc;
        }
        if (wc) {
            *wc = vm.wc;
        }
        if (lambda_bc) {
            *lambda_bc = vm.lambda_bc;
        }
        if (lambda_wc) {
            *lambda_wc = vm.lambda_wc;
        }
    });
}

enc_status enc_sweep_run(const enc_features* features, uint32_t k_min, uint32_t k_max,
                         const uint64_t* seeds, uint64_t n_seeds, uint32_t max_iter, double tol,
                         int threads, enc_sweep** out) {
    if (enc_status s = require(features && seeds && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        enc::KmeansParams params;
        if (max_iter > 0) {
            params.max_iter = static_cast<int>(max_iter);
        }
        if (tol > 0.0) {
            params.tol = tol;
        }
        const std::vector<std::uint64_t> seed_list(seeds, seeds + n_seeds);
        auto sweep = std::make_unique<enc_sweep>();
        sweep->sweep = enc::sweep_k(features->fs, static_cast<int>(k_min),
                                    static_cast<int>(k_max), seed_list, params, threads);
        sweep->kind = features->fs.kind;
        *out = sweep.release();
    });
}

enc_status enc_sweep_row_count(const enc_sweep* sweep, uint64_t* out) {
    if (enc_status s = require(sweep && out, "null argument")) {
        return s;
    }
    *out = sweep->sweep.rows.size();
    return ENC_OK;
}

enc_status enc_sweep_row(const enc_sweep* sweep, uint64_t index, uint32_t* k, uint64_t* seed,
                         double* lambda_bc, double* lambda_wc, double* inertia,
                         uint32_t* iterations) {
    if (enc_status s = require(sweep, "null argument")) {
        return s;
    }
    if (enc_status s = require(index < sweep->sweep.rows.size(), "sweep row out of range")) {
        return s;
    }
    const enc::SweepRow& row = sweep->sweep.rows[index];
    if (k) {
        *k = static_cast<uint32_t>(row.k);
    }
    if (seed) {
        *seed = row.seed;
    }
    if (lambda_bc) {
        *lambda_bc = row.lambda_bc;
    }
    if (lambda_wc) {
        *lambda_wc = row.lambda_wc;
    }
    if (inertia) {
        *inertia = row.inertia;
    }
    if (iterations) {
        *iterations = static_cast<uint32_t>(row.iterations);
    }
    return ENC_OK;
}

enc_status enc_sweep_median(const enc_sweep* sweep, uint32_t k, double* lambda_bc,
                            double* lambda_wc) {
    if (enc_status s = require(sweep, "null argument")) {
        return s;
    }
    for (const enc::SweepMedian& m : sweep->sweep.medians) {
        if (m.k == static_cast<int>(k)) {
            if (lambda_bc) {
                *lambda_bc = m.lambda_bc;
            }
            if (lambda_wc) {
                *lambda_wc = m.lambda_wc;
            }
            return ENC_OK;
        }
    }
    set_error("k=" + std::to_string(k) + " is not part of the sweep");
    return ENC_ERR_INVALID;
}

enc_status enc_sweep_plateau_k(const enc_sweep* sweep, double threshold, int32_t* out) {
    if (enc_status s = require(sweep && out, "null argument")) {
        return s;
    }
    *out = enc::plateau_k(sweep->sweep.medians, threshold);
    return ENC_OK;
}

enc_status enc_sweep_save_csv(const enc_sweep* sweep, const char* results_path,
                              const char* medians_path) {
    if (enc_status s = require(sweep && results_path, "null argument")) {
        return s;
    }
    return guarded([&] {
        enc::save_results_csv(results_path, sweep->kind, sweep->sweep.rows);
        if (medians_path) {
            enc::save_medians_csv(medians_path, sweep->kind, sweep->sweep.medians);
        }
    });
}

void enc_sweep_free(enc_sweep* sweep) { delete sweep; }

enc_status enc_ari(const int32_t* labels, const int32_t* truth, uint64_t n, double* out) {
    if (enc_status s = require(labels && truth && out, "null argument")) {
        return s;
    }
    return guarded([&] {
        const std::vector<int> a(labels, labels + n);
        const std::vector<int> b(truth, truth + n);
        *out = enc::adjusted_rand_index(a, b);
    });
}

/* ---- export and reporting ------------------------------------------- */

enc_status enc_export(const enc_archive* archive, const char* assignments_csv, int format,
                      const char* out_dir) {
    if (enc_status s = require(archive && assignments_csv && out_dir, "null argument")) {
        return s;
    }
    return guarded([&] {
        if (format < 0 || format > ENC_EXPORT_CSV) {
            throw enc::config_error("export format tag " + std::to_string(format) +
                                    " is out of range");
        }
        const auto assignments = enc::load_assignments_csv(assignments_csv);
        const enc::ExportFormat fmt = format == ENC_EXPORT_GEOJSON ? enc::ExportFormat::GeoJson
                                      : format == ENC_EXPORT_SVG   ? enc::ExportFormat::Svg
                                                                   : enc::ExportFormat::Csv;
        enc::export_clusters(out_dir, archive->archive, assignments, fmt);
    });
}

enc_status enc_report(const char* results_csv, const char* out_path, int32_t* plateau_out) {
    if (enc_status s = require(results_csv && out_path, "null argument")) {
        return s;
    }
    return guarded([&] {
        const std::vector<enc::ResultsRow> rows = enc::load_results_csv(results_csv);
        if (rows.empty()) {
            throw enc::invalid_input_error("results CSV has no rows");
        }

        // kind -> k -> lambda samples across seeds.
        std::map<std::string, std::map<int, std::vector<double>>> bc_of;
        std::map<std::string, std::map<int, std::vector<double>>> wc_of;
        for (const enc::ResultsRow& r : rows) {
            bc_of[r.kind][r.row.k].push_back(r.row.lambda_bc);
            wc_of[r.kind][r.row.k].push_back(r.row.lambda_wc);
        }

        std::ostringstream md;
        md << "# Cluster validity report\n";
        std::string best_kind;
        double best_bc = -1.0;
        int32_t best_plateau = 0;
        for (const auto& [kind, by_k] : bc_of) {
            md << "\n## " << kind << "\n\n";
            md << "| k | median lambda_bc | median lambda_wc |\n";
            md << "|---|------------------|------------------|\n";
            std::vector<enc::SweepMedian> medians;
            for (const auto& [k, bcs] : by_k) {
                const double mbc = enc::median_of(bcs);
                const double mwc = enc::median_of(wc_of[kind][k]);
                medians.push_back(enc::SweepMedian{k, mbc, mwc});
                char line[96];
                std::snprintf(line, sizeof(line), "| %d | %.4f | %.4f |\n", k, mbc, mwc);
                md << line;
            }
            const int pk = enc::plateau_k(medians, 0.01);
            if (pk > 0) {
                md << "\nlambda_wc plateau (change below 0.01) starts at k = " << pk << ".\n";
            } else {
                md << "\nno lambda_wc plateau within the swept range.\n";
            }
            const double final_bc = medians.back().lambda_bc;
            if (final_bc > best_bc) {
                best_bc = final_bc;
                best_kind = kind;
                best_plateau = pk;
            }
        }
        if (bc_of.size() > 1) {
            char line[128];
            std::snprintf(line, sizeof(line),
                          "\nBest separation at the top of the swept range: %s (median "
                          "lambda_bc %.4f).\n",
                          best_kind.c_str(), best_bc);
            md << line;
        }
        enc::atomic_write(out_path, md.str());
        if (plateau_out) {
            *plateau_out = best_plateau;
        }
    });
}

} /* extern "C" */
