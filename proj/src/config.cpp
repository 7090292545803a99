#include "sgm4k/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sgm4k {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

} // namespace

ConfigMap parse_config_text(std::string_view text) {
    ConfigMap map;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const std::string stripped = trim(line);
        if (stripped.empty())
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw format_error("config line " + std::to_string(line_no) +
                               ": expected key=value, got '" + stripped + "'");
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty())
            throw format_error("config line " + std::to_string(line_no) + ": empty key");
        map[key] = value;
    }
    return map;
}

ConfigMap load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace cfg {

int to_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw param_error("config key '" + key + "': not an integer: " + value);
    }
}

double to_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw param_error("config key '" + key + "': not a number: " + value);
    }
}

bool to_bool(const std::string& value, const std::string& key) {
    std::string v = value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw param_error("config key '" + key + "': not a boolean: " + value);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ','))
        if (const std::string t = std::string(item); !t.empty())
            out.push_back(t);
    return out;
}

std::vector<int> to_int_list(const std::string& value, const std::string& key) {
    std::vector<int> out;
    for (const std::string& item : split_list(value))
        out.push_back(to_int(item, key));
    return out;
}

} // namespace cfg

} // namespace sgm4k
