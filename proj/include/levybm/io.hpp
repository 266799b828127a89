#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levybm/kac_stroock.hpp"
#include "levybm/sampler.hpp"
#include "levybm/verify.hpp"

namespace levybm {

// JSON documents use the field names fixed by schemas/triplet.schema.json and
// schemas/config.schema.json. Doubles are written in shortest round-trip form
// (never truncated), so serialisation is deterministic and parsing recovers
// the written values exactly. Density parts are function-valued and therefore
// not serialisable; triplets carrying one are rejected by triplet_to_json.
std::string triplet_to_json(const LevyTriplet& triplet);
LevyTriplet triplet_from_json(const std::string& text);  // ParseError

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);  // ParseError

struct LoadedConfig {
  ExperimentConfig config;
  // One entry per theta that is not ComplexAdmissible: degenerate studies
  // stay scriptable, but never silently.
  std::vector<std::string> warnings;
};
// Reads, parses, validates. IoError / ParseError / ValidationError.
LoadedConfig load_config(const std::filesystem::path& file);

std::string report_to_json(const StatReport& report);
// One row per check; the epsilon column makes concatenated summaries from an
// epsilon ladder directly plottable.
std::string report_to_csv(const StatReport& report);

// CSV dumps. Columns: t,re,im for one component; t,re,im,component for a
// multi-component replica; t,X for a raw driver path.
std::string path_to_csv(const ComplexPath& path);
std::string paths_to_csv(std::span<const ComplexPath> components);
std::string driver_to_csv(const PathSample& path);
// Sidecar describing how a dumped replica was produced.
std::string path_meta_json(std::span<const ComplexPath> components,
                           const ExperimentConfig& config,
                           std::uint64_t replica_index);

std::string fnv1a64_hex(std::string_view bytes);

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

struct Manifest {
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> files;  // manifest.json itself is last
};

// Writes every (name, content) pair into out_dir (created if absent) plus a
// manifest.json listing each file with size and content hash. Deterministic:
// same contents give byte-identical artifacts including the manifest. Refuses
// to overwrite existing files unless force; IoError on any filesystem
// failure.
Manifest write_artifacts(
    const std::filesystem::path& out_dir,
    std::span<const std::pair<std::string, std::string>> files, bool force);

// report.json + summary.csv + manifest.json.
Manifest write_report(const StatReport& report,
                      const std::filesystem::path& out_dir, bool force);

}  // namespace levybm
