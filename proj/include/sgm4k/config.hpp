#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgm4k/errors.hpp"

namespace sgm4k {

// Flat key=value configuration text. Keys mirror the CLI flag names without
// the leading dashes ("disp-range=64"). '#' starts a comment; blank lines are
// ignored.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(std::string_view text);
ConfigMap load_config_file(const std::filesystem::path& path);

namespace cfg {

// Value parsers shared by the CLI and the config file so both surfaces agree.
int to_int(const std::string& value, const std::string& key);
double to_double(const std::string& value, const std::string& key);
bool to_bool(const std::string& value, const std::string& key);
std::vector<int> to_int_list(const std::string& value, const std::string& key);
std::vector<std::string> split_list(const std::string& value);

// Precedence: explicit flag > config file entry > built-in default.
template <typename T, typename Parse>
T resolve(const std::optional<T>& flag, const ConfigMap& config, const std::string& key,
          const T& fallback, Parse&& parse) {
    if (flag)
        return *flag;
    if (const auto it = config.find(key); it != config.end())
        return parse(it->second, key);
    return fallback;
}

inline int resolve_int(const std::optional<int>& flag, const ConfigMap& config,
                       const std::string& key, int fallback) {
    return resolve(flag, config, key, fallback, to_int);
}

inline double resolve_double(const std::optional<double>& flag, const ConfigMap& config,
                             const std::string& key, double fallback) {
    return resolve(flag, config, key, fallback, to_double);
}

inline bool resolve_bool(const std::optional<bool>& flag, const ConfigMap& config,
                         const std::string& key, bool fallback) {
    return resolve(flag, config, key, fallback, to_bool);
}

inline std::string resolve_string(const std::optional<std::string>& flag, const ConfigMap& config,
                                  const std::string& key, const std::string& fallback) {
    return resolve(flag, config, key, fallback,
                   [](const std::string& v, const std::string&) { return v; });
}

} // namespace cfg

} // namespace sgm4k
