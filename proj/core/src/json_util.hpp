#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

namespace mixroute::jsonutil {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline const json& require(const json& j, const std::string& key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw std::runtime_error(ctx + ": missing key \"" + key + "\"");
    }
    return *it;
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                           const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* a : allowed) {
            if (it.key() == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::runtime_error(ctx + ": unknown key \"" + it.key() + "\"");
        }
    }
}

inline double require_number(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number()) throw std::runtime_error(ctx + ": key \"" + key + "\" must be a number");
    return v.get<double>();
}

inline std::string require_string(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_string()) throw std::runtime_error(ctx + ": key \"" + key + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace mixroute::jsonutil
