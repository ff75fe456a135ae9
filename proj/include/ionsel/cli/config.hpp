// Copyright 2026 The ionsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ionsel/core/errors.hpp"

namespace ionsel::cli {

using Json = nlohmann::json;

class ConfigError : public Error {
   public:
    using Error::Error;
};

/// Strict view over one JSON object: every key must be consumed before finish(), so a
/// misspelt or unsupported key is reported by name instead of silently ignored.
class Section {
   public:
    Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where("") + " must be a JSON object");
    }

    const std::string& path() const { return path_; }
    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key) {
        if (!j_.contains(key)) throw ConfigError("missing key '" + where(key) + "'");
        used_.insert(key);
        return j_.at(key);
    }

    Section section(const std::string& key) { return Section(raw(key), where(key)); }

    std::optional<Section> optional_section(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return section(key);
    }

    double number(const std::string& key) {
        const Json& v = raw(key);
        if (!v.is_number()) throw ConfigError("'" + where(key) + "' must be a number");
        double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError("'" + where(key) + "' must be finite");
        return x;
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    long long integer(const std::string& key) {
        const Json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError("'" + where(key) + "' must be an integer");
        return v.get<long long>();
    }

    long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ConfigError("'" + where(key) + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key) {
        const Json& v = raw(key);
        if (!v.is_string()) throw ConfigError("'" + where(key) + "' must be a string");
        return v.get<std::string>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        return has(key) ? string(key) : fallback;
    }

    std::string choice(const std::string& key, const std::vector<std::string>& allowed, const std::string& fallback) {
        std::string v = string(key, fallback);
        for (const auto& a : allowed)
            if (a == v) return v;
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        throw ConfigError("'" + where(key) + "' must be one of: " + list);
    }

    std::vector<double> numbers(const std::string& key) {
        const Json& v = raw(key);
        if (!v.is_array()) throw ConfigError("'" + where(key) + "' must be an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number() || !std::isfinite(x.get<double>()))
                throw ConfigError("'" + where(key) + "' must be an array of finite numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    /// Rejects keys that were never read.
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError("unknown key '" + where(it.key()) + "'");
    }

   private:
    std::string where(const std::string& key) const {
        if (path_.empty()) return key.empty() ? "config" : key;
        return key.empty() ? path_ : path_ + "." + key;
    }

    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

inline Json parse_config(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

}  // namespace ionsel::cli
