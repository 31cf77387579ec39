#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "asian/config.hpp"
#include "asian/errors.hpp"

namespace asian::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& token, int line) {
    std::string t = token;
    t.erase(std::remove(t.begin(), t.end(), '_'), t.end());
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != t.size())
        throw ConfigError("config line " + std::to_string(line) + ": cannot parse value '" + token + "'");
    return v;
}

// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    char quote = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

Value parse_toml_value(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError("config line " + std::to_string(line) + ": missing value");
    if (v.front() == '"' || v.front() == '\'') {
        if (v.size() < 2 || v.back() != v.front())
            throw ConfigError("config line " + std::to_string(line) + ": unterminated string");
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '[') {
        if (v.back() != ']') throw ConfigError("config line " + std::to_string(line) + ": arrays must be on one line");
        std::vector<double> out;
        std::stringstream items(v.substr(1, v.size() - 2));
        std::string item;
        while (std::getline(items, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(parse_number(item, line));
        }
        return out;
    }
    return parse_number(v, line);
}

}  // namespace

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    return key;
}

void ConfigMap::set(const std::string& key, Value value) { entries_[normalize_key(key)] = std::move(value); }

bool ConfigMap::contains(const std::string& key) const { return entries_.count(normalize_key(key)) > 0; }

void ConfigMap::merge_from(const ConfigMap& overrides) {
    for (const auto& [k, v] : overrides.entries_) entries_[k] = v;
}

double ConfigMap::number(const std::string& key, double fallback) const {
    const auto it = entries_.find(normalize_key(key));
    if (it == entries_.end()) return fallback;
    if (const auto* d = std::get_if<double>(&it->second)) return *d;
    if (const auto* s = std::get_if<std::string>(&it->second)) return parse_number(*s, 0);
    throw ConfigError("config key '" + key + "' must be a number");
}

std::string ConfigMap::text(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(normalize_key(key));
    if (it == entries_.end()) return fallback;
    if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
    throw ConfigError("config key '" + key + "' must be a string");
}

std::vector<double> ConfigMap::numbers(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = entries_.find(normalize_key(key));
    if (it == entries_.end()) return fallback;
    if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
    if (const auto* d = std::get_if<double>(&it->second)) return {*d};
    if (const auto* s = std::get_if<std::string>(&it->second)) {
        std::vector<double> out;
        std::stringstream items(*s);
        std::string item;
        while (std::getline(items, item, ','))
            if (!trim(item).empty()) out.push_back(parse_number(trim(item), 0));
        return out;
    }
    throw ConfigError("config key '" + key + "' must be a list of numbers");
}

void ConfigMap::require_known(const std::vector<std::string>& known) const {
    for (const auto& [k, v] : entries_)
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw ConfigError("unknown config key '" + k + "'");
}

ConfigMap parse_toml(std::istream& in) {
    ConfigMap map;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[')
            throw ConfigError("config line " + std::to_string(n) + ": tables are not supported (flat keys only)");
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(n) + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(n) + ": empty key");
        map.set(key, parse_toml_value(s.substr(eq + 1), n));
    }
    return map;
}

ConfigMap parse_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: JSON plan must be an object");
    ConfigMap map;
    for (const auto& [key, v] : doc.items()) {
        if (v.is_number()) {
            map.set(key, v.get<double>());
        } else if (v.is_string()) {
            map.set(key, v.get<std::string>());
        } else if (v.is_boolean()) {
            map.set(key, v.get<bool>());
        } else if (v.is_array()) {
            std::vector<double> xs;
            for (const auto& x : v) {
                if (!x.is_number()) throw ConfigError("config key '" + key + "': arrays must hold numbers");
                xs.push_back(x.get<double>());
            }
            map.set(key, std::move(xs));
        } else {
            throw ConfigError("config key '" + key + "': nested objects are not supported");
        }
    }
    return map;
}

ConfigMap load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return json ? parse_json(in) : parse_toml(in);
}

}  // namespace asian::config
