#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "poly_parser.hpp"
#include "timefn.hpp"
#include "vectorfield.hpp"

namespace liesup::doc {

using Json = nlohmann::ordered_json;

inline std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ValidationError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(child(path, key), "missing required key");
    return *it;
}

inline const Json& require_array(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = require(obj, key, path);
    if (!v.is_array()) throw ValidationError(child(path, key), "expected an array");
    return v;
}

inline std::string as_string(const Json& v, const std::string& path) {
    if (!v.is_string()) throw ValidationError(path, "expected a string");
    return v.get<std::string>();
}

inline double as_number(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError(path, "expected a number");
    return v.get<double>();
}

inline std::int64_t as_integer(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
    return v.get<std::int64_t>();
}

inline std::size_t as_count(const Json& v, const std::string& path) {
    const auto n = as_integer(v, path);
    if (n < 0) throw ValidationError(path, "expected a non-negative integer");
    return static_cast<std::size_t>(n);
}

inline std::vector<double> as_numbers(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ValidationError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], child(path, i)));
    return out;
}

inline TimeFunction as_timefn(const Json& v, const std::string& path) {
    if (v.is_number()) return parse_timefn(v.dump());
    try {
        return parse_timefn(as_string(v, path));
    } catch (const ParseError& e) {
        throw ValidationError(path, e.what());
    }
}

inline std::vector<TimeFunction> as_timefns(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ValidationError(path, "expected an array of time functions");
    std::vector<TimeFunction> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_timefn(v[i], child(path, i)));
    return out;
}

inline std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

/// A field written as a list of component polynomials over `names`.
inline PolyVectorField as_field(const Json& v, const std::vector<std::string>& names, const std::string& path) {
    if (!v.is_array()) throw ValidationError(path, "expected a list of component polynomials");
    if (v.size() != names.size()) {
        throw ValidationError(path, "field has " + std::to_string(v.size()) + " components, expected " + std::to_string(names.size()));
    }
    std::vector<Poly> comps;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = child(path, i);
        try {
            comps.push_back(parse_poly(as_string(v[i], p), names));
        } catch (const ParseError& e) {
            throw ValidationError(p, e.what());
        }
    }
    return PolyVectorField(std::move(comps));
}

inline Json field_json(const PolyVectorField& f, const std::vector<std::string>& names) {
    Json arr = Json::array();
    for (const auto& c : f.components()) arr.push_back(c.to_string(names));
    return arr;
}

inline std::vector<std::string> variable_names(const Json& obj, std::size_t dimension, const std::string& path) {
    auto it = obj.find("variables");
    if (it == obj.end()) return default_names(dimension);
    const std::string p = child(path, "variables");
    if (!it->is_array() || it->size() != dimension) throw ValidationError(p, "expected " + std::to_string(dimension) + " variable names");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < it->size(); ++i) names.push_back(as_string((*it)[i], child(p, i)));
    return names;
}

}  // namespace liesup::doc
