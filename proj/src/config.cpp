#include "bonuswalk/config.hpp"

#include "bonuswalk/errors.hpp"
#include "bonuswalk/text.hpp"

#include <algorithm>

namespace bonuswalk {

std::map<std::string, std::string> parse_config_file(const std::string& text,
                                                     const std::string& source_name,
                                                     const std::vector<std::string>& allowed_keys) {
    std::map<std::string, std::string> out;
    for (const auto& kv : parse_kv_lines(text)) {
        const std::string where = source_name + ":" + std::to_string(kv.line);
        if (std::find(allowed_keys.begin(), allowed_keys.end(), kv.key) == allowed_keys.end()) {
            std::string known;
            for (const auto& k : allowed_keys) {
                known += (known.empty() ? "" : ", ") + k;
            }
            throw ValidationError(where + ": unknown key '" + kv.key + "' (known: " + known + ")");
        }
        if (!out.emplace(kv.key, kv.value).second) {
            throw ValidationError(where + ": duplicate key '" + kv.key + "'");
        }
    }
    return out;
}

ParamResolver::ParamResolver(std::map<std::string, std::string> file_values,
                             std::map<std::string, std::string> manifest_values)
    : file_values_(std::move(file_values)), manifest_values_(std::move(manifest_values)) {}

std::string ParamResolver::resolve(const std::string& name, bool cli_given,
                                   const std::string& cli_value,
                                   const std::string& default_value) {
    consumed_[name] = true;
    const auto file_it = file_values_.find(name);
    const auto manifest_it = manifest_values_.find(name);
    const bool in_file = file_it != file_values_.end();
    const bool in_manifest = manifest_it != manifest_values_.end();

    std::string value;
    std::string source;
    if (cli_given) {
        value = cli_value;
        source = in_file ? "cli (overrode file)" : "cli";
    } else if (in_file) {
        value = file_it->second;
        source = "file";
    } else if (in_manifest) {
        value = manifest_it->second;
        source = "manifest";
    } else {
        value = default_value;
        source = "default";
    }
    trace_.push_back(ManifestParam{name, value, source});
    return value;
}

std::string ParamResolver::resolve_cli_only(const std::string& name, bool cli_given,
                                            const std::string& cli_value,
                                            const std::string& default_value) {
    consumed_[name] = true;
    trace_.push_back(
        ManifestParam{name, cli_given ? cli_value : default_value, cli_given ? "cli" : "default"});
    return cli_given ? cli_value : default_value;
}

std::vector<std::string> ParamResolver::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : file_values_) {
        (void)value;
        if (!consumed_.count(key)) {
            out.push_back(key);
        }
    }
    for (const auto& [key, value] : manifest_values_) {
        (void)value;
        if (!consumed_.count(key)) {
            out.push_back(key);
        }
    }
    return out;
}

} // namespace bonuswalk
