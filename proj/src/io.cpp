#include "encounter/io.hpp"

#include "encounter/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace enc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kFeatureMagic[5] = {'E', 'N', 'C', 'F', '1'};
constexpr char kModelMagic[5] = {'E', 'N', 'C', 'M', '1'};

void append_le_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void append_le_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    append_le_u64(out, bits);
}

std::uint64_t read_le_u64(const std::string& data, std::size_t offset) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[offset + i])) << (8 * i);
    }
    return v;
}

double read_le_f64(const std::string& data, std::size_t offset) {
    const std::uint64_t bits = read_le_u64(data, offset);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw io_error("read failed on '" + path.string() + "'");
    }
    return std::move(ss).str();
}

double parse_double(const std::string& field, const fs::path& path, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || (end && *end != '\0') || errno == ERANGE || !std::isfinite(v)) {
        throw format_error(path.string() + ":" + std::to_string(line) +
                           ": expected a finite number, got '" + field + "'");
    }
    return v;
}

long parse_long(const std::string& field, const fs::path& path, std::size_t line) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw format_error(path.string() + ":" + std::to_string(line) +
                           ": expected an integer, got '" + field + "'");
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

// Reads a CSV file, checks the header, and hands each data line to fn as
// (fields, line_number).
template <typename Fn>
void for_each_csv_row(const fs::path& path, const std::string& expected_header, std::size_t n_fields,
                      Fn&& fn) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open '" + path.string() + "' for reading");
    }
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw format_error(path.string() + ": empty file, expected header '" + expected_header + "'");
    }
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
        line.pop_back();
    }
    if (line != expected_header) {
        throw format_error(path.string() + ":1: expected header '" + expected_header + "', got '" +
                           line + "'");
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != n_fields) {
            throw format_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(n_fields) + " fields, got " +
                               std::to_string(fields.size()));
        }
        fn(fields, line_no);
    }
}

json parse_json_file(const fs::path& path) {
    const std::string text = read_file(path);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw format_error("'" + path.string() + "' is not valid JSON");
    }
    return j;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

} // namespace

std::uint64_t fnv1a(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t fnv1a_file(const fs::path& path) {
    const std::string data = read_file(path);
    return fnv1a(data.data(), data.size());
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw io_error("cannot create directory '" + path.parent_path().string() +
                           "': " + ec.message());
        }
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw io_error("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw io_error("write failed on '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw io_error("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

std::vector<GpsTrajectory> load_trajectories_csv(const fs::path& path) {
    std::map<std::string, GpsTrajectory> by_vehicle;
    for_each_csv_row(path, "vehicle_id,timestamp,latitude,longitude", 4,
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f[0].empty()) {
                             throw format_error(path.string() + ":" + std::to_string(line) +
                                                ": empty vehicle_id");
                         }
                         GpsSample s;
                         s.timestamp = parse_double(f[1], path, line);
                         s.latitude = parse_double(f[2], path, line);
                         s.longitude = parse_double(f[3], path, line);
                         if (s.latitude < -90.0 || s.latitude > 90.0 || s.longitude < -180.0 ||
                             s.longitude > 180.0) {
                             throw format_error(path.string() + ":" + std::to_string(line) +
                                                ": coordinates out of range");
                         }
                         auto& traj = by_vehicle[f[0]];
                         traj.vehicle_id = f[0];
                         traj.samples.push_back(s);
                     });
    std::vector<GpsTrajectory> out;
    out.reserve(by_vehicle.size());
    for (auto& [id, traj] : by_vehicle) {
        std::stable_sort(traj.samples.begin(), traj.samples.end(),
                         [](const GpsSample& a, const GpsSample& b) { return a.timestamp < b.timestamp; });
        for (std::size_t i = 1; i < traj.samples.size(); ++i) {
            if (traj.samples[i].timestamp == traj.samples[i - 1].timestamp) {
                throw format_error(path.string() + ": vehicle '" + id +
                                   "' has duplicate timestamp " +
                                   std::to_string(traj.samples[i].timestamp));
            }
        }
        out.push_back(std::move(traj));
    }
    return out;
}

void save_trajectories_csv(const fs::path& path, const std::vector<GpsTrajectory>& corpus) {
    std::string out = "vehicle_id,timestamp,latitude,longitude\n";
    for (const GpsTrajectory& traj : corpus) {
        for (const GpsSample& s : traj.samples) {
            out += traj.vehicle_id;
            out += ',';
            out += format_fixed(s.timestamp, 3);
            out += ',';
            out += format_fixed(s.latitude, 8);
            out += ',';
            out += format_fixed(s.longitude, 8);
            out += '\n';
        }
    }
    atomic_write(path, out);
}

void save_archive(const fs::path& dir, const EncounterArchive& archive) {
    if (!archive.labels.empty() && archive.labels.size() != archive.encounters.size()) {
        throw invalid_input_error("label list does not match encounter count");
    }

    std::string csv = "encounter_id,vehicle,step,t,x,y\n";
    json manifest_list = json::array();
    for (const DrivingEncounter& e : archive.encounters) {
        for (int vehicle = 0; vehicle < 2; ++vehicle) {
            const LocalTrajectory& traj = vehicle == 0 ? e.traj_a : e.traj_b;
            for (std::size_t i = 0; i < traj.size(); ++i) {
                csv += e.id;
                csv += vehicle == 0 ? ",a," : ",b,";
                csv += std::to_string(i);
                csv += ',';
                csv += format_fixed(traj.times[i], 3);
                csv += ',';
                csv += format_fixed(traj.points[i].x, 6);
                csv += ',';
                csv += format_fixed(traj.points[i].y, 6);
                csv += '\n';
            }
        }
        manifest_list.push_back({{"id", e.id},
                                 {"duration", e.duration},
                                 {"vehicle_a", e.source_ids.first},
                                 {"vehicle_b", e.source_ids.second},
                                 {"anchor_lat", e.anchor().latitude},
                                 {"anchor_lon", e.anchor().longitude}});
    }
    json manifest = {{"count", archive.encounters.size()}, {"encounters", manifest_list}};

    atomic_write(dir / "encounters.csv", csv);
    atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
    if (!archive.labels.empty()) {
        std::string labels = "encounter_id,kind\n";
        for (std::size_t i = 0; i < archive.encounters.size(); ++i) {
            labels += archive.encounters[i].id + "," + archive.labels[i] + "\n";
        }
        atomic_write(dir / "labels.csv", labels);
    }
}

EncounterArchive load_archive(const fs::path& dir) {
    const fs::path manifest_path = dir / "manifest.json";
    const json manifest = parse_json_file(manifest_path);
    if (!manifest.contains("encounters") || !manifest["encounters"].is_array()) {
        throw format_error(manifest_path.string() + ": missing 'encounters' array");
    }

    EncounterArchive archive;
    std::map<std::string, std::size_t> index_of;
    for (const json& item : manifest["encounters"]) {
        DrivingEncounter e;
        e.id = item.at("id").get<std::string>();
        e.duration = item.at("duration").get<double>();
        e.source_ids = {item.at("vehicle_a").get<std::string>(),
                        item.at("vehicle_b").get<std::string>()};
        const GeoAnchor anchor{item.at("anchor_lat").get<double>(),
                               item.at("anchor_lon").get<double>()};
        e.traj_a.anchor = anchor;
        e.traj_b.anchor = anchor;
        index_of[e.id] = archive.encounters.size();
        archive.encounters.push_back(std::move(e));
    }

    const fs::path csv_path = dir / "encounters.csv";
    for_each_csv_row(csv_path, "encounter_id,vehicle,step,t,x,y", 6,
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         const auto it = index_of.find(f[0]);
                         if (it == index_of.end()) {
                             throw format_error(csv_path.string() + ":" + std::to_string(line) +
                                                ": encounter '" + f[0] + "' is not in the manifest");
                         }
                         if (f[1] != "a" && f[1] != "b") {
                             throw format_error(csv_path.string() + ":" + std::to_string(line) +
                                                ": vehicle must be 'a' or 'b'");
                         }
                         DrivingEncounter& e = archive.encounters[it->second];
                         LocalTrajectory& traj = f[1] == "a" ? e.traj_a : e.traj_b;
                         const long step = parse_long(f[2], csv_path, line);
                         if (step != static_cast<long>(traj.size())) {
                             throw format_error(csv_path.string() + ":" + std::to_string(line) +
                                                ": steps of '" + f[0] + "/" + f[1] +
                                                "' are not contiguous from 0");
                         }
                         traj.times.push_back(parse_double(f[3], csv_path, line));
                         traj.points.push_back(LocalPoint{parse_double(f[4], csv_path, line),
                                                          parse_double(f[5], csv_path, line)});
                     });

    for (const DrivingEncounter& e : archive.encounters) {
        if (e.traj_a.size() != e.traj_b.size() || e.traj_a.size() < 2) {
            throw format_error(dir.string() + ": encounter '" + e.id +
                               "' has missing or unbalanced samples");
        }
    }

    const fs::path labels_path = dir / "labels.csv";
    if (fs::exists(labels_path)) {
        std::map<std::string, std::string> label_of;
        for_each_csv_row(labels_path, "encounter_id,kind", 2,
                         [&](const std::vector<std::string>& f, std::size_t) {
                             label_of[f[0]] = f[1];
                         });
        archive.labels.reserve(archive.encounters.size());
        for (const DrivingEncounter& e : archive.encounters) {
            const auto it = label_of.find(e.id);
            if (it == label_of.end()) {
                throw format_error(labels_path.string() + ": no label for encounter '" + e.id + "'");
            }
            archive.labels.push_back(it->second);
        }
    }
    return archive;
}

std::filesystem::path feature_sidecar_path(const fs::path& cache_path) {
    return cache_path.string() + ".json";
}

void save_feature_cache(const fs::path& path, const FeatureSet& fs_data) {
    std::string out(kFeatureMagic, sizeof(kFeatureMagic));
    append_le_u64(out, static_cast<std::uint64_t>(fs_data.kind));
    append_le_u64(out, fs_data.size());
    append_le_u64(out, fs_data.dim());
    for (Eigen::Index r = 0; r < fs_data.rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < fs_data.rows.cols(); ++c) {
            append_le_f64(out, fs_data.rows(r, c));
        }
    }
    atomic_write(path, out);

    json sidecar = {{"kind", feature_kind_name(fs_data.kind)},
                    {"count", fs_data.size()},
                    {"ids", fs_data.ids}};
    atomic_write(feature_sidecar_path(path), sidecar.dump(2) + "\n");
}

FeatureSet load_feature_cache(const fs::path& path) {
    const std::string data = read_file(path);
    if (data.size() < sizeof(kFeatureMagic) + 24 ||
        std::memcmp(data.data(), kFeatureMagic, sizeof(kFeatureMagic)) != 0) {
        throw format_error("'" + path.string() + "' is not a feature cache (bad magic)");
    }
    std::size_t off = sizeof(kFeatureMagic);
    const std::uint64_t kind_tag = read_le_u64(data, off);
    const std::uint64_t count = read_le_u64(data, off + 8);
    const std::uint64_t dim = read_le_u64(data, off + 16);
    off += 24;
    if (kind_tag > static_cast<std::uint64_t>(FeatureKind::NedAe)) {
        throw format_error("'" + path.string() + "' has unknown kind tag " +
                           std::to_string(kind_tag));
    }
    if (data.size() != off + count * dim * 8) {
        throw format_error("'" + path.string() + "' payload size does not match header");
    }

    FeatureSet fs_data;
    fs_data.kind = static_cast<FeatureKind>(kind_tag);
    fs_data.rows.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
    for (std::uint64_t r = 0; r < count; ++r) {
        for (std::uint64_t c = 0; c < dim; ++c) {
            fs_data.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                read_le_f64(data, off + (r * dim + c) * 8);
        }
    }

    const json sidecar = parse_json_file(feature_sidecar_path(path));
    if (!sidecar.contains("ids") || !sidecar["ids"].is_array() ||
        sidecar["ids"].size() != count) {
        throw format_error("'" + feature_sidecar_path(path).string() +
                           "' does not list one id per cached row");
    }
    fs_data.ids = sidecar["ids"].get<std::vector<std::string>>();
    return fs_data;
}

void save_model(const fs::path& path, const AutoencoderModel& model, FeatureKind kind) {
    json header = {{"dims", model.layer_dims},
                   {"activations", json::array()},
                   {"seed", model.seed},
                   {"epochs", model.epochs_trained},
                   {"kind", feature_kind_name(kind)}};
    for (Activation a : model.activations) {
        header["activations"].push_back(activation_name(a));
    }
    const std::string header_text = header.dump();

    std::string out(kModelMagic, sizeof(kModelMagic));
    append_le_u64(out, header_text.size());
    out += header_text;
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        const Eigen::MatrixXd& w = model.weights[i];
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            for (Eigen::Index r = 0; r < w.rows(); ++r) {
                append_le_f64(out, w(r, c));
            }
        }
        for (Eigen::Index r = 0; r < model.biases[i].size(); ++r) {
            append_le_f64(out, model.biases[i][r]);
        }
    }
    atomic_write(path, out);
}

std::pair<AutoencoderModel, FeatureKind> load_model(const fs::path& path) {
    const std::string data = read_file(path);
    if (data.size() < sizeof(kModelMagic) + 8 ||
        std::memcmp(data.data(), kModelMagic, sizeof(kModelMagic)) != 0) {
        throw format_error("'" + path.string() + "' is not a model checkpoint (bad magic)");
    }
    std::size_t off = sizeof(kModelMagic);
    const std::uint64_t header_len = read_le_u64(data, off);
    off += 8;
    if (data.size() < off + header_len) {
        throw format_error("'" + path.string() + "' header is truncated");
    }
    json header = json::parse(data.substr(off, header_len), nullptr, false);
    if (header.is_discarded()) {
        throw format_error("'" + path.string() + "' header is not valid JSON");
    }
    off += header_len;

    AutoencoderModel model;
    model.layer_dims = header.at("dims").get<std::vector<std::size_t>>();
    model.seed = header.at("seed").get<std::uint64_t>();
    model.epochs_trained = header.at("epochs").get<std::size_t>();
    for (const json& tag : header.at("activations")) {
        model.activations.push_back(activation_from_name(tag.get<std::string>()));
    }
    if (model.layer_dims.size() < 3 || model.activations.size() + 1 != model.layer_dims.size()) {
        throw format_error("'" + path.string() + "' header dims/activations are inconsistent");
    }
    const FeatureKind kind = feature_kind_from_name(header.at("kind").get<std::string>());

    std::size_t expected = 0;
    for (std::size_t i = 0; i + 1 < model.layer_dims.size(); ++i) {
        expected += model.layer_dims[i] * model.layer_dims[i + 1] + model.layer_dims[i + 1];
    }
    if (data.size() != off + expected * 8) {
        throw format_error("'" + path.string() + "' payload size does not match dims");
    }
    for (std::size_t i = 0; i + 1 < model.layer_dims.size(); ++i) {
        Eigen::MatrixXd w(model.layer_dims[i], model.layer_dims[i + 1]);
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            for (Eigen::Index r = 0; r < w.rows(); ++r) {
                w(r, c) = read_le_f64(data, off);
                off += 8;
            }
        }
        Eigen::VectorXd b(model.layer_dims[i + 1]);
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            b[r] = read_le_f64(data, off);
            off += 8;
        }
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    return {std::move(model), kind};
}

void save_results_csv(const fs::path& path, FeatureKind kind, const std::vector<SweepRow>& rows) {
    std::string out = "kind,k,seed,lambda_bc,lambda_wc,inertia,iterations\n";
    for (const SweepRow& r : rows) {
        out += feature_kind_name(kind);
        out += ',' + std::to_string(r.k);
        out += ',' + std::to_string(r.seed);
        out += ',' + format_fixed(r.lambda_bc, 9);
        out += ',' + format_fixed(r.lambda_wc, 9);
        char inertia[40];
        std::snprintf(inertia, sizeof(inertia), "%.9e", r.inertia);
        out += ',';
        out += inertia;
        out += ',' + std::to_string(r.iterations);
        out += '\n';
    }
    atomic_write(path, out);
}

void save_medians_csv(const fs::path& path, FeatureKind kind,
                      const std::vector<SweepMedian>& medians) {
    std::string out = "kind,k,median_lambda_bc,median_lambda_wc\n";
    for (const SweepMedian& m : medians) {
        out += feature_kind_name(kind);
        out += ',' + std::to_string(m.k);
        out += ',' + format_fixed(m.lambda_bc, 9);
        out += ',' + format_fixed(m.lambda_wc, 9);
        out += '\n';
    }
    atomic_write(path, out);
}

std::vector<ResultsRow> load_results_csv(const fs::path& path) {
    std::vector<ResultsRow> rows;
    for_each_csv_row(path, "kind,k,seed,lambda_bc,lambda_wc,inertia,iterations", 7,
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         ResultsRow r;
                         r.kind = f[0];
                         r.row.k = static_cast<int>(parse_long(f[1], path, line));
                         r.row.seed = static_cast<std::uint64_t>(parse_long(f[2], path, line));
                         r.row.lambda_bc = parse_double(f[3], path, line);
                         r.row.lambda_wc = parse_double(f[4], path, line);
                         r.row.inertia = parse_double(f[5], path, line);
                         r.row.iterations = static_cast<int>(parse_long(f[6], path, line));
                         rows.push_back(std::move(r));
                     });
    return rows;
}

void save_assignments_csv(const fs::path& path, const std::vector<std::string>& ids,
                          const std::vector<int>& assignments) {
    if (ids.size() != assignments.size()) {
        throw invalid_input_error("ids and assignments differ in length");
    }
    std::string out = "encounter_id,cluster\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += ids[i] + ',' + std::to_string(assignments[i]) + '\n';
    }
    atomic_write(path, out);
}

std::vector<std::pair<std::string, int>> load_assignments_csv(const fs::path& path) {
    std::vector<std::pair<std::string, int>> out;
    for_each_csv_row(path, "encounter_id,cluster", 2,
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         out.emplace_back(f[0], static_cast<int>(parse_long(f[1], path, line)));
                     });
    return out;
}

} // namespace enc
