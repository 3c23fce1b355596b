#include "encounter/features.hpp"

#include "encounter/error.hpp"
#include "encounter/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace enc {

const char* feature_kind_name(FeatureKind kind) {
    switch (kind) {
    case FeatureKind::Dtw:
        return "dtw";
    case FeatureKind::Ned:
        return "ned";
    case FeatureKind::Ae:
        return "ae";
    case FeatureKind::DtwAe:
        return "dtw-ae";
    case FeatureKind::NedAe:
        return "ned-ae";
    }
    return "unknown";
}

FeatureKind feature_kind_from_name(const std::string& name) {
    if (name == "dtw") {
        return FeatureKind::Dtw;
    }
    if (name == "ned") {
        return FeatureKind::Ned;
    }
    if (name == "ae") {
        return FeatureKind::Ae;
    }
    if (name == "dtw-ae" || name == "dtw_ae") {
        return FeatureKind::DtwAe;
    }
    if (name == "ned-ae" || name == "ned_ae") {
        return FeatureKind::NedAe;
    }
    throw config_error("unknown feature kind '" + name + "'");
}

bool feature_kind_uses_model(FeatureKind kind) {
    return kind == FeatureKind::Ae || kind == FeatureKind::DtwAe || kind == FeatureKind::NedAe;
}

namespace {

void check_unified(const UnifiedEncounter& enc) {
    if (enc.points_a.size() != enc.points_b.size()) {
        throw invalid_input_error("unified encounter '" + enc.id + "' has unequal vehicle lengths");
    }
    if (enc.points_a.size() < 2) {
        throw invalid_input_error("unified encounter '" + enc.id + "' is shorter than two points");
    }
}

} // namespace

FeatureMatrix dtw_matrix(const UnifiedEncounter& enc) {
    check_unified(enc);
    const std::size_t n = enc.points_a.size();
    FeatureMatrix out;
    out.n = n;
    out.values.resize(n * n);
    for (std::size_t m = 0; m < n; ++m) {
        const LocalPoint& pa = enc.points_a[m];
        for (std::size_t k = 0; k < n; ++k) {
            const LocalPoint& pb = enc.points_b[k];
            out.values[m * n + k] = std::hypot(pa.x - pb.x, pa.y - pb.y);
        }
    }
    return out;
}

FeatureVector ned_vector(const UnifiedEncounter& enc) {
    check_unified(enc);
    const std::size_t n = enc.points_a.size();
    FeatureVector out;
    out.values.resize(n);
    double max_dist = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = std::hypot(enc.points_a[k].x - enc.points_b[k].x,
                                    enc.points_a[k].y - enc.points_b[k].y);
        out.values[k] = d;
        max_dist = std::max(max_dist, d);
    }
    if (max_dist > 0.0) {
        for (double& v : out.values) {
            v /= max_dist;
        }
    }
    return out;
}

std::vector<double> ae_raw_input(const UnifiedEncounter& enc) {
    check_unified(enc);
    const std::size_t n = enc.points_a.size();
    std::vector<double> out;
    out.reserve(4 * n);
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        scale = std::max({scale, std::fabs(enc.points_a[k].x), std::fabs(enc.points_a[k].y),
                          std::fabs(enc.points_b[k].x), std::fabs(enc.points_b[k].y)});
    }
    if (scale == 0.0) {
        scale = 1.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(enc.points_a[k].x / scale);
        out.push_back(enc.points_a[k].y / scale);
        out.push_back(enc.points_b[k].x / scale);
        out.push_back(enc.points_b[k].y / scale);
    }
    return out;
}

std::vector<double> ae_input_for_kind(const UnifiedEncounter& enc, FeatureKind kind) {
    switch (kind) {
    case FeatureKind::Ae:
        return ae_raw_input(enc);
    case FeatureKind::DtwAe:
        return dtw_matrix(enc).values;
    case FeatureKind::NedAe:
        return ned_vector(enc).values;
    default:
        throw config_error("feature kind has no autoencoder input");
    }
}

std::size_t ae_input_dim(FeatureKind kind, std::size_t kbar) {
    switch (kind) {
    case FeatureKind::Ae:
        return 4 * kbar;
    case FeatureKind::DtwAe:
        return kbar * kbar;
    case FeatureKind::NedAe:
        return kbar;
    default:
        throw config_error("feature kind has no autoencoder input");
    }
}

std::vector<FeatureRep> featurize(const std::vector<UnifiedEncounter>& encs, FeatureKind kind,
                                  const AutoencoderModel* model, int threads) {
    if (feature_kind_uses_model(kind) && model == nullptr) {
        throw config_error(std::string("feature kind '") + feature_kind_name(kind) +
                           "' requires a trained autoencoder model");
    }
    std::vector<FeatureRep> out(encs.size());
    parallel_for(encs.size(), threads, [&](std::size_t i) {
        FeatureRep rep;
        rep.encounter_id = encs[i].id;
        rep.kind = kind;
        switch (kind) {
        case FeatureKind::Dtw:
            rep.data = dtw_matrix(encs[i]).values;
            break;
        case FeatureKind::Ned:
            rep.data = ned_vector(encs[i]).values;
            break;
        default: {
            const std::vector<double> input = ae_input_for_kind(encs[i], kind);
            if (input.size() != model->input_dim()) {
                throw invalid_input_error(
                    "encounter '" + encs[i].id + "' produces a " + std::to_string(input.size()) +
                    "-dim input but the model expects " + std::to_string(model->input_dim()));
            }
            const Eigen::VectorXd code = ae_encode(
                *model, Eigen::Map<const Eigen::VectorXd>(input.data(),
                                                          static_cast<Eigen::Index>(input.size())));
            rep.data.assign(code.data(), code.data() + code.size());
            break;
        }
        }
        out[i] = std::move(rep);
    });
    return out;
}

} // namespace enc
