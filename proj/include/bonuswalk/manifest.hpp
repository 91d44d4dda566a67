#pragma once

// Run manifests tie every output file to the resolved parameters, seed, and
// input digests that produced it, so any run can be replayed byte-for-byte.
// The run id is a digest of the resolved parameters (excluding output
// paths); every output file carries it, in a `# run_id=` comment for CSV
// and a "run_id" field for JSON.

#include <cstdint>
#include <string>
#include <vector>

namespace bonuswalk {

std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& path); // throws IoError

struct ManifestParam {
    std::string name;
    std::string value;
    std::string source; // "cli", "file", "default", "manifest", or "cli (overrode file)"
};

struct InputDigest {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    int schema_version = 1;
    std::string tool;    // "bonuswalk <version>"
    std::string subcommand;
    std::string run_id;
    std::vector<ManifestParam> params;
    std::vector<InputDigest> inputs;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
    std::string error;   // empty on success
    int exit_code = 0;
};

// First 16 hex chars of sha256 over "subcommand\nname=value\n..." for all
// params except output paths, in name order.
std::string compute_run_id(const std::string& subcommand, const std::vector<ManifestParam>& params);

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& json_text);

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

} // namespace bonuswalk
