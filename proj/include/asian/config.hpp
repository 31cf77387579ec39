#pragma once

#include <istream>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace asian::config {

using Value = std::variant<double, std::string, bool, std::vector<double>>;

/// Flat key/value configuration. Keys are normalised to snake case
/// ("cev-nu" and "cev_nu" are the same key).
class ConfigMap {
public:
    void set(const std::string& key, Value value);
    bool contains(const std::string& key) const;
    void merge_from(const ConfigMap& overrides);

    double number(const std::string& key, double fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;

    /// Throws ConfigError naming the first key outside `known`.
    void require_known(const std::vector<std::string>& known) const;

    const std::map<std::string, Value>& entries() const { return entries_; }

private:
    std::map<std::string, Value> entries_;
};

std::string normalize_key(std::string key);

/// Top-level flat TOML: `key = value` with numbers, quoted strings, booleans
/// and single-line numeric arrays; `#` comments. Tables are rejected.
ConfigMap parse_toml(std::istream& in);
/// A flat JSON object with the same value kinds.
ConfigMap parse_json(std::istream& in);
/// Picks the parser from the extension (.json, otherwise TOML).
ConfigMap load_file(const std::string& path);

}  // namespace asian::config
