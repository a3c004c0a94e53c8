#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qpsh/field.hpp"

namespace qpsh::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Quaternions and matrices
// ---------------------------------------------------------------------------

inline json to_json(const Quaternion& q) { return json::array({q.t, q.x, q.y, q.z}); }

namespace detail {

inline const json& field_at(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + ": missing \"" + key + "\"");
    return *it;
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path + ": expected a number");
    return j.get<double>();
}

inline double number_or(const json& j, const char* key, double fallback, const std::string& path) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : number(*it, path + "." + key);
}

inline std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw SchemaError(path + ": expected a non-negative integer");
    return j.get<std::size_t>();
}

}  // namespace detail

inline Quaternion quaternion_from_json(const json& j, const std::string& path = "$") {
    if (!j.is_array() || j.size() != 4) throw SchemaError(path + ": expected a 4-array [t, x, y, z]");
    return {detail::number(j[0], path + "[0]"), detail::number(j[1], path + "[1]"), detail::number(j[2], path + "[2]"),
            detail::number(j[3], path + "[3]")};
}

inline json to_json(const QVector& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(to_json(q));
    return out;
}

inline QVector vector_from_json(const json& j, const std::string& path = "$") {
    if (!j.is_array()) throw SchemaError(path + ": expected an array of quaternions");
    QVector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(quaternion_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

inline json to_json(const QMatrix& m, bool hyperhermitian = false) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.size(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.size(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    json out{{"n", m.size()}, {"entries", std::move(rows)}};
    if (hyperhermitian) out["hyperhermitian"] = true;
    return out;
}

inline json to_json(const HHMatrix& m) { return to_json(m.matrix(), true); }

struct ParsedMatrix {
    QMatrix matrix;
    bool hyperhermitian = false;
};

/// Reads {"n", "entries", "hyperhermitian"?}.  A bare entries array is also
/// accepted, with n taken from its length.
inline ParsedMatrix matrix_from_json(const json& j, const std::string& path = "$") {
    const bool bare = j.is_array();
    const json& rows = bare ? j : detail::field_at(j, "entries", path);
    const std::string rows_path = bare ? path : path + ".entries";
    if (!rows.is_array()) throw SchemaError(rows_path + ": expected an array of rows");
    const std::size_t n = bare ? rows.size() : detail::count(detail::field_at(j, "n", path), path + ".n");
    if (rows.size() != n)
        throw SchemaError(rows_path + ": expected " + std::to_string(n) + " rows, found " + std::to_string(rows.size()));
    ParsedMatrix out;
    out.matrix = QMatrix(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::string row_path = rows_path + "[" + std::to_string(r) + "]";
        if (!rows[r].is_array() || rows[r].size() != n)
            throw SchemaError(row_path + ": expected a row of " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c)
            out.matrix(r, c) = quaternion_from_json(rows[r][c], row_path + "[" + std::to_string(c) + "]");
    }
    if (!bare) {
        const auto it = j.find("hyperhermitian");
        if (it != j.end()) {
            if (!it->is_boolean()) throw SchemaError(path + ".hyperhermitian: expected a boolean");
            out.hyperhermitian = it->get<bool>();
        }
    }
    if (out.hyperhermitian) HHMatrix::checked(out.matrix);
    return out;
}

/// Hyperhermitian matrix from JSON; the symmetry check always applies.
inline HHMatrix hh_from_json(const json& j, const std::string& path = "$") {
    return HHMatrix::checked(matrix_from_json(j, path).matrix);
}

inline json read_json_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw SchemaError(file + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(file + ": malformed JSON: " + e.what());
    }
}

inline void write_json_file(const std::string& file, const json& j) {
    std::ofstream out(file);
    if (!out) throw Error(file + ": cannot open for writing");
    out << j.dump(2) << '\n';
}

inline ParsedMatrix parse_matrix_file(const std::string& file) { return matrix_from_json(read_json_file(file), file + ": $"); }

inline void write_matrix_file(const std::string& file, const QMatrix& m, bool hyperhermitian = false) {
    write_json_file(file, to_json(m, hyperhermitian));
}

// ---------------------------------------------------------------------------
// Field expression trees
// ---------------------------------------------------------------------------
//
//   {"kind": "quadratic", "A": matrix, "b": [q...]?, "c": 0?}
//   {"kind": "norm_squared", "n": 2}
//   {"kind": "linear", "b": [q...], "c": 0?}
//   {"kind": "gaussian", "center": [q...], "width": 1, "amplitude": 1?}
//   {"kind": "bump", "center": [q...], "radius": 1}
//   {"kind": "radial", "g": profile, "center": [q...]}
//   {"kind": "sum", "terms": [field...]}
//   {"kind": "scale", "factor": s, "field": field}
//   {"kind": "product", "factors": [field, field]}
//   {"kind": "cutoff", "radius": r, "center": [q...]?, "field": field}
//   {"kind": "precompose", "A": matrix, "a": q?, "field": field}
//   {"kind": "smooth_max", "tau": t, "pieces": [{"b": [q...], "c": 0?}...]}
//   {"kind": "holomorphic", "n": n, "terms": [{"coef": [re, im], "exponents": [...]}...]}
//
// profiles: {"kind": "polynomial", "coeffs": [...]}, {"kind": "exponential",
// "amplitude", "rate"}, {"kind": "log1p"}, {"kind": "cutoff", "radius"}.

inline RadialProfile profile_from_json(const json& j, const std::string& path) {
    const json& kind = detail::field_at(j, "kind", path);
    if (!kind.is_string()) throw SchemaError(path + ".kind: expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "polynomial") {
        const json& c = detail::field_at(j, "coeffs", path);
        if (!c.is_array()) throw SchemaError(path + ".coeffs: expected an array");
        std::vector<double> coeffs;
        for (std::size_t i = 0; i < c.size(); ++i) coeffs.push_back(detail::number(c[i], path + ".coeffs[" + std::to_string(i) + "]"));
        return RadialProfile::polynomial(std::move(coeffs));
    }
    if (k == "exponential")
        return RadialProfile::exponential(detail::number_or(j, "amplitude", 1.0, path),
                                          detail::number(detail::field_at(j, "rate", path), path + ".rate"));
    if (k == "log1p") return RadialProfile::log1p();
    if (k == "cutoff") return RadialProfile::cutoff(detail::number(detail::field_at(j, "radius", path), path + ".radius"));
    throw SchemaError(path + ".kind: unknown profile \"" + k + "\"");
}

inline ScalarField field_from_json(const json& j, const std::string& path = "$") {
    const json& kind = detail::field_at(j, "kind", path);
    if (!kind.is_string()) throw SchemaError(path + ".kind: expected a string");
    const std::string k = kind.get<std::string>();
    auto sub = [&](const char* key) { return field_from_json(detail::field_at(j, key, path), path + "." + key); };
    auto vec = [&](const char* key) { return vector_from_json(detail::field_at(j, key, path), path + "." + key); };
    auto num = [&](const char* key) { return detail::number(detail::field_at(j, key, path), path + "." + key); };
    auto list = [&](const char* key) {
        const json& a = detail::field_at(j, key, path);
        if (!a.is_array() || a.empty()) throw SchemaError(path + "." + key + ": expected a non-empty array");
        return a;
    };

    if (k == "quadratic") {
        const HHMatrix a = hh_from_json(detail::field_at(j, "A", path), path + ".A");
        const QVector b = j.contains("b") ? vec("b") : QVector(a.size());
        if (b.size() != a.size()) throw SchemaError(path + ".b: expected " + std::to_string(a.size()) + " entries");
        return ScalarField::quadratic(a, b, detail::number_or(j, "c", 0.0, path));
    }
    if (k == "norm_squared") return norm_squared_field(detail::count(detail::field_at(j, "n", path), path + ".n"));
    if (k == "linear") return ScalarField::linear(vec("b"), detail::number_or(j, "c", 0.0, path));
    if (k == "gaussian") return ScalarField::gaussian(vec("center"), num("width"), detail::number_or(j, "amplitude", 1.0, path));
    if (k == "bump") return ScalarField::bump(vec("center"), num("radius"));
    if (k == "radial") return ScalarField::radial(profile_from_json(detail::field_at(j, "g", path), path + ".g"), vec("center"));
    if (k == "sum") {
        const json& terms = list("terms");
        std::vector<ScalarField> fields;
        for (std::size_t i = 0; i < terms.size(); ++i)
            fields.push_back(field_from_json(terms[i], path + ".terms[" + std::to_string(i) + "]"));
        return ScalarField::sum(std::move(fields));
    }
    if (k == "scale") return ScalarField::scale(num("factor"), sub("field"));
    if (k == "product") {
        const json& factors = list("factors");
        ScalarField out = field_from_json(factors[0], path + ".factors[0]");
        for (std::size_t i = 1; i < factors.size(); ++i)
            out = out * field_from_json(factors[i], path + ".factors[" + std::to_string(i) + "]");
        return out;
    }
    if (k == "cutoff") {
        ScalarField f = sub("field");
        const QVector center = j.contains("center") ? vec("center") : QVector(f.n());
        return ScalarField::cutoff(std::move(f), num("radius"), center);
    }
    if (k == "precompose") {
        const QMatrix a = matrix_from_json(detail::field_at(j, "A", path), path + ".A").matrix;
        const Quaternion s = j.contains("a") ? quaternion_from_json(j["a"], path + ".a") : Quaternion::one();
        return ScalarField::precompose(sub("field"), a, s);
    }
    if (k == "smooth_max") {
        const json& pieces = list("pieces");
        std::vector<std::pair<QVector, double>> out;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const std::string p = path + ".pieces[" + std::to_string(i) + "]";
            out.emplace_back(vector_from_json(detail::field_at(pieces[i], "b", p), p + ".b"),
                             detail::number_or(pieces[i], "c", 0.0, p));
        }
        return ScalarField::smooth_max(std::move(out), num("tau"));
    }
    if (k == "holomorphic") {
        const std::size_t n = detail::count(detail::field_at(j, "n", path), path + ".n");
        const json& terms = list("terms");
        std::vector<HolomorphicTerm> out;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string p = path + ".terms[" + std::to_string(i) + "]";
            const json& coef = detail::field_at(terms[i], "coef", p);
            if (!coef.is_array() || coef.size() != 2) throw SchemaError(p + ".coef: expected [re, im]");
            const json& e = detail::field_at(terms[i], "exponents", p);
            if (!e.is_array()) throw SchemaError(p + ".exponents: expected an array");
            std::vector<int> exps;
            for (std::size_t m = 0; m < e.size(); ++m) {
                const auto v = detail::count(e[m], p + ".exponents[" + std::to_string(m) + "]");
                exps.push_back(static_cast<int>(v));
            }
            out.push_back({{detail::number(coef[0], p + ".coef[0]"), detail::number(coef[1], p + ".coef[1]")}, exps});
        }
        return ScalarField::holomorphic_modulus_squared(n, std::move(out));
    }
    throw SchemaError(path + ".kind: unknown field kind \"" + k + "\"");
}

inline ScalarField parse_field_file(const std::string& file) { return field_from_json(read_json_file(file), file + ": $"); }

}  // namespace qpsh::io
