#include "encounter/export.hpp"

#include "encounter/error.hpp"
#include "encounter/geo.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace enc {

namespace fs = std::filesystem;
using nlohmann::json;

ExportFormat export_format_from_name(const std::string& name) {
    if (name == "geojson") {
        return ExportFormat::GeoJson;
    }
    if (name == "svg") {
        return ExportFormat::Svg;
    }
    if (name == "csv") {
        return ExportFormat::Csv;
    }
    throw config_error("unknown export format '" + name + "' (expected geojson, svg or csv)");
}

namespace {

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// cluster -> encounter indices, validated against the archive.
std::map<int, std::vector<std::size_t>>
group_by_cluster(const EncounterArchive& archive,
                 const std::vector<std::pair<std::string, int>>& assignments) {
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < archive.encounters.size(); ++i) {
        index_of[archive.encounters[i].id] = i;
    }
    if (assignments.size() != archive.encounters.size()) {
        throw invalid_input_error("assignments cover " + std::to_string(assignments.size()) +
                                  " encounters but the archive holds " +
                                  std::to_string(archive.encounters.size()));
    }
    std::map<int, std::vector<std::size_t>> groups;
    std::vector<char> seen(archive.encounters.size(), 0);
    for (const auto& [id, cluster] : assignments) {
        const auto it = index_of.find(id);
        if (it == index_of.end()) {
            throw invalid_input_error("assignments name encounter '" + id +
                                      "' which is not in the archive");
        }
        if (seen[it->second]) {
            throw invalid_input_error("encounter '" + id + "' is assigned twice");
        }
        seen[it->second] = 1;
        groups[cluster].push_back(it->second);
    }
    for (auto& [cluster, members] : groups) {
        std::sort(members.begin(), members.end());
    }
    return groups;
}

std::string cluster_file_stem(int cluster) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "cluster_%02d", cluster);
    return buf;
}

void write_geojson(const fs::path& out_dir, const EncounterArchive& archive,
                   const std::map<int, std::vector<std::size_t>>& groups) {
    for (const auto& [cluster, members] : groups) {
        json features = json::array();
        for (std::size_t idx : members) {
            const DrivingEncounter& e = archive.encounters[idx];
            for (int vehicle = 0; vehicle < 2; ++vehicle) {
                const LocalTrajectory& traj = vehicle == 0 ? e.traj_a : e.traj_b;
                json coords = json::array();
                for (std::size_t i = 0; i < traj.size(); ++i) {
                    const GpsSample s = local_to_gps(traj.points[i], traj.times[i], e.anchor());
                    coords.push_back({s.longitude, s.latitude});
                }
                features.push_back({{"type", "Feature"},
                                    {"properties",
                                     {{"encounter_id", e.id},
                                      {"vehicle", vehicle == 0 ? "a" : "b"},
                                      {"cluster", cluster}}},
                                    {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}});
            }
        }
        const json collection = {{"type", "FeatureCollection"}, {"features", features}};
        atomic_write(out_dir / (cluster_file_stem(cluster) + ".geojson"),
                     collection.dump(2) + "\n");
    }
}

void write_csv(const fs::path& out_dir, const EncounterArchive& archive,
               const std::map<int, std::vector<std::size_t>>& groups) {
    for (const auto& [cluster, members] : groups) {
        std::string out = "encounter_id,cluster,vehicle,step,t,x,y,lat,lon\n";
        for (std::size_t idx : members) {
            const DrivingEncounter& e = archive.encounters[idx];
            for (int vehicle = 0; vehicle < 2; ++vehicle) {
                const LocalTrajectory& traj = vehicle == 0 ? e.traj_a : e.traj_b;
                for (std::size_t i = 0; i < traj.size(); ++i) {
                    const GpsSample s = local_to_gps(traj.points[i], traj.times[i], e.anchor());
                    out += e.id;
                    out += ',' + std::to_string(cluster);
                    out += vehicle == 0 ? ",a," : ",b,";
                    out += std::to_string(i);
                    out += ',' + fmt(traj.times[i], 3);
                    out += ',' + fmt(traj.points[i].x, 6);
                    out += ',' + fmt(traj.points[i].y, 6);
                    out += ',' + fmt(s.latitude, 8);
                    out += ',' + fmt(s.longitude, 8);
                    out += '\n';
                }
            }
        }
        atomic_write(out_dir / (cluster_file_stem(cluster) + ".csv"), out);
    }
}

struct Panel {
    double x0, y0; // top-left corner in the SVG
    double min_x, min_y, scale;
};

void append_polyline(std::string& svg, const Panel& p, const LocalTrajectory& traj,
                     double panel_h, const char* color) {
    svg += "  <polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double px = p.x0 + (traj.points[i].x - p.min_x) * p.scale;
        const double py = p.y0 + panel_h - (traj.points[i].y - p.min_y) * p.scale;
        if (i > 0) {
            svg += ' ';
        }
        svg += fmt(px, 2) + "," + fmt(py, 2);
    }
    svg += "\"/>\n";

    const auto place = [&](const LocalPoint& pt) {
        return std::make_pair(p.x0 + (pt.x - p.min_x) * p.scale,
                              p.y0 + panel_h - (pt.y - p.min_y) * p.scale);
    };
    const auto [sx, sy] = place(traj.points.front());
    svg += "  <circle cx=\"" + fmt(sx, 2) + "\" cy=\"" + fmt(sy, 2) + "\" r=\"2.5\" fill=\"";
    svg += color;
    svg += "\"/>\n";
    const auto [ex, ey] = place(traj.points.back());
    svg += "  <path d=\"M" + fmt(ex - 3, 2) + " " + fmt(ey - 3, 2) + " L" + fmt(ex + 3, 2) + " " +
           fmt(ey + 3, 2) + " M" + fmt(ex - 3, 2) + " " + fmt(ey + 3, 2) + " L" + fmt(ex + 3, 2) +
           " " + fmt(ey - 3, 2) + "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\"/>\n";
}

void write_svg(const fs::path& out_dir, const EncounterArchive& archive,
               const std::map<int, std::vector<std::size_t>>& groups) {
    const double panel_w = 220.0;
    const double panel_h = 220.0;
    const double margin = 14.0;
    const double title_h = 18.0;
    const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(
                                      static_cast<double>(groups.size())))));
    const int rows =
        static_cast<int>((groups.size() + static_cast<std::size_t>(cols) - 1) / cols);
    const double width = cols * (panel_w + margin) + margin;
    const double height = rows * (panel_h + title_h + margin) + margin;

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width, 0) + "\" height=\"" +
           fmt(height, 0) + "\" viewBox=\"0 0 " + fmt(width, 0) + " " + fmt(height, 0) + "\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    int panel_idx = 0;
    for (const auto& [cluster, members] : groups) {
        Panel p{};
        p.x0 = margin + (panel_idx % cols) * (panel_w + margin);
        p.y0 = margin + title_h + (panel_idx / cols) * (panel_h + title_h + margin);
        ++panel_idx;

        double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
        bool first = true;
        for (std::size_t idx : members) {
            const DrivingEncounter& e = archive.encounters[idx];
            for (const LocalTrajectory* traj : {&e.traj_a, &e.traj_b}) {
                for (const LocalPoint& pt : traj->points) {
                    if (first) {
                        min_x = max_x = pt.x;
                        min_y = max_y = pt.y;
                        first = false;
                    } else {
                        min_x = std::min(min_x, pt.x);
                        max_x = std::max(max_x, pt.x);
                        min_y = std::min(min_y, pt.y);
                        max_y = std::max(max_y, pt.y);
                    }
                }
            }
        }
        const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
        p.scale = (panel_w - 10.0) / span;
        p.min_x = min_x - (span - (max_x - min_x)) / 2.0 - 5.0 / p.scale;
        p.min_y = min_y - (span - (max_y - min_y)) / 2.0 - 5.0 / p.scale;

        svg += "  <text x=\"" + fmt(p.x0, 2) + "\" y=\"" + fmt(p.y0 - 5.0, 2) +
               "\" font-family=\"sans-serif\" font-size=\"12\">cluster " + std::to_string(cluster) +
               " (" + std::to_string(members.size()) + " encounters)</text>\n";
        svg += "  <rect x=\"" + fmt(p.x0, 2) + "\" y=\"" + fmt(p.y0, 2) + "\" width=\"" +
               fmt(panel_w, 2) + "\" height=\"" + fmt(panel_h, 2) +
               "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
        for (std::size_t idx : members) {
            const DrivingEncounter& e = archive.encounters[idx];
            append_polyline(svg, p, e.traj_a, panel_h, "#1f77b4");
            append_polyline(svg, p, e.traj_b, panel_h, "#d62728");
        }
    }
    svg += "</svg>\n";
    atomic_write(out_dir / "clusters.svg", svg);
}

} // namespace

void export_clusters(const fs::path& out_dir, const EncounterArchive& archive,
                     const std::vector<std::pair<std::string, int>>& assignments,
                     ExportFormat format) {
    const auto groups = group_by_cluster(archive, assignments);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw io_error("cannot create directory '" + out_dir.string() + "': " + ec.message());
    }
    switch (format) {
    case ExportFormat::GeoJson:
        write_geojson(out_dir, archive, groups);
        break;
    case ExportFormat::Csv:
        write_csv(out_dir, archive, groups);
        break;
    case ExportFormat::Svg:
        write_svg(out_dir, archive, groups);
        break;
    }
}

} // namespace enc
