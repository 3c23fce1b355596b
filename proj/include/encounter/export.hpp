#ifndef ENCOUNTER_EXPORT_HPP
#define ENCOUNTER_EXPORT_HPP

#include "encounter/io.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace enc {

enum class ExportFormat { GeoJson, Svg, Csv };

ExportFormat export_format_from_name(const std::string& name);

// Writes one file per cluster under out_dir:
//   geojson: cluster_XX.geojson, a FeatureCollection with one LineString
//            per vehicle in lat/lon (re-projected from the encounter
//            anchor), encounter id / vehicle / cluster in properties.
//   csv:     cluster_XX.csv with
//            `encounter_id,cluster,vehicle,step,t,x,y,lat,lon`.
//   svg:     a single clusters.svg with one panel per cluster; start
//            points are drawn as dots, end points as crosses.
// Assignments must cover exactly the archive's encounter ids; a mismatch
// raises invalid_input_error.
void export_clusters(const std::filesystem::path& out_dir, const EncounterArchive& archive,
                     const std::vector<std::pair<std::string, int>>& assignments,
                     ExportFormat format);

} // namespace enc

#endif
