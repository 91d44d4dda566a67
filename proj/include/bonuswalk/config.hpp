#pragma once

// Parameter resolution for the CLI: command-line flags override config-file
// values, which override defaults, and every resolved value remembers where
// it came from for the run manifest. Config files use the same flat
// `key value` grammar as BMS spec files.

#include "bonuswalk/manifest.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bonuswalk {

// Parsed config file: keys must be unique and members of `allowed_keys`.
std::map<std::string, std::string> parse_config_file(const std::string& text,
                                                     const std::string& source_name,
                                                     const std::vector<std::string>& allowed_keys);

class ParamResolver {
public:
    // `file_values` from --config (may be empty), `manifest_values` from
    // --replay (may be empty). Manifest values behave like file values but
    // are labelled "manifest".
    ParamResolver(std::map<std::string, std::string> file_values,
                  std::map<std::string, std::string> manifest_values);

    // cli_given: the flag appeared on the command line (CLI11 ->count() > 0).
    // Returns the winning textual value and records the source.
    std::string resolve(const std::string& name, bool cli_given, const std::string& cli_value,
                        const std::string& default_value);

    // Convenience: resolve and mark a parameter that has no file override.
    std::string resolve_cli_only(const std::string& name, bool cli_given,
                                 const std::string& cli_value, const std::string& default_value);

    const std::vector<ManifestParam>& trace() const { return trace_; }

    // Keys present in the file/manifest but never consumed by resolve().
    std::vector<std::string> unused_keys() const;

private:
    std::map<std::string, std::string> file_values_;
    std::map<std::string, std::string> manifest_values_;
    std::map<std::string, bool> consumed_;
    std::vector<ManifestParam> trace_;
};

} // namespace bonuswalk
