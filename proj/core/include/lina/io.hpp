#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lina/measurement.hpp"
#include "lina/mdlina.hpp"

namespace lina {

// CSV: header row of variable names, one sample per data row. Internally the
// matrix is variables x samples, so reading transposes.
DomainDataset read_domain_csv(const std::filesystem::path& file, int domain_id = 1);
void write_domain_csv(const std::filesystem::path& file, const DomainDataset& d);

// Plain numeric matrix (no header), one matrix row per line.
Matrix read_matrix_csv(const std::filesystem::path& file);
void write_matrix_csv(const std::filesystem::path& file, const Matrix& m);

// Manifest: "domain.<id> = <csv path>" lines, paths relative to the manifest.
MultiDomainDataset read_manifest(const std::filesystem::path& file);
void write_manifest(const std::filesystem::path& file,
                    const std::vector<std::string>& domain_files);

// Clusters: "<factor name> = <var> <var> ..." lines; names resolved against
// the dataset's variable names.
ClusterSpec read_clusters(const std::filesystem::path& file,
                          const std::vector<std::string>& variable_names);
void write_clusters(const std::filesystem::path& file, const ClusterSpec& spec,
                    const std::vector<std::string>& variable_names);

// Measurement model: "loading <var> <factor> <value>" and "psi <var> <value>".
void write_measurement_model(const std::filesystem::path& file,
                             const MeasurementModel& model);
MeasurementModel read_measurement_model(const std::filesystem::path& file);

// Transform matrix + hard assignment as structured text.
void write_transform(const std::filesystem::path& file, const TransformMatrix& H,
                     const HardAssignment& assignment);
std::pair<TransformMatrix, HardAssignment> read_transform(
    const std::filesystem::path& file);

// DOT digraph with edge labels carrying the effects.
void write_dot(const std::filesystem::path& file, const Matrix& B,
               const std::vector<std::string>& names);
std::vector<std::tuple<int, int, double>> read_dot_edges(
    const std::filesystem::path& file);

// Flat key-value text (config files, run reports).
std::map<std::string, std::string> read_keyvalue(const std::filesystem::path& file);
void write_keyvalue(const std::filesystem::path& file,
                    const std::vector<std::pair<std::string, std::string>>& kv);

// Shortest round-trippable decimal representation.
std::string format_double(double v);

}  // namespace lina
