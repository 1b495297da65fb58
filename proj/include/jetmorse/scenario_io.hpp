#ifndef JETMORSE_SCENARIO_IO_HPP
#define JETMORSE_SCENARIO_IO_HPP

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include <jetmorse/error.hpp>
#include <jetmorse/hermitian.hpp>
#include <jetmorse/jet.hpp>

// Scenario file (JSON):
//
//   {
//     "n": 2, "r": 2,
//     "samples": [ { "weight": 1.0, "c": c[i][j][a][b] } ],
//     "theta_L": [[z11, z12], [z21, z22]],
//     "delta": 0.0
//   }
//
// Complex numbers are [re, im] pairs (a bare number is read as a real value). The curvature
// tensor nests base indices i, j outermost and fiber indices a, b innermost.

namespace jetmorse
{

namespace io
{

using json = nlohmann::json;

inline cplx complex_from_json(const json &v, const std::string &where)
{
    if (v.is_number()) {
        return {v.get<double>(), 0.0};
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw validation_error(where + ": expected a number or an [re, im] pair");
}

inline json complex_to_json(cplx z)
{
    return json::array({z.real(), z.imag()});
}

inline const json &field(const json &obj, const char *name, const std::string &where)
{
    if (!obj.is_object() || !obj.contains(name)) {
        throw validation_error(where + ": missing field '" + name + "'");
    }
    return obj.at(name);
}

inline int positive_int(const json &v, const std::string &where)
{
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw validation_error(where + ": expected a positive integer");
    }
    return v.get<int>();
}

inline const json &array_of(const json &v, std::size_t size, const std::string &where)
{
    if (!v.is_array() || v.size() != size) {
        throw validation_error(where + ": expected an array of length " + std::to_string(size));
    }
    return v;
}

inline Eigen::MatrixXcd matrix_from_json(const json &v, int rows, int cols, const std::string &where)
{
    array_of(v, static_cast<std::size_t>(rows), where);
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const std::string wi = where + "[" + std::to_string(i) + "]";
        array_of(v[static_cast<std::size_t>(i)], static_cast<std::size_t>(cols), wi);
        for (int j = 0; j < cols; ++j) {
            m(i, j) = complex_from_json(v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                        wi + "[" + std::to_string(j) + "]");
        }
    }
    return m;
}

inline json matrix_to_json(const Eigen::MatrixXcd &m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_to_json(m(i, j)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

inline CurvatureModel model_from_json(const json &v, int n, int r, const std::string &where)
{
    CurvatureModel m(n, r);
    array_of(v, static_cast<std::size_t>(n), where);
    for (int i = 0; i < n; ++i) {
        const std::string wi = where + "[" + std::to_string(i) + "]";
        array_of(v[static_cast<std::size_t>(i)], static_cast<std::size_t>(n), wi);
        for (int j = 0; j < n; ++j) {
            const json &cij = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const Eigen::MatrixXcd block = matrix_from_json(cij, r, r, wi + "[" + std::to_string(j) + "]");
            for (int a = 0; a < r; ++a) {
                for (int b = 0; b < r; ++b) {
                    m(i, j, a, b) = block(a, b);
                }
            }
        }
    }
    return m;
}

inline json model_to_json(const CurvatureModel &m)
{
    json out = json::array();
    for (int i = 0; i < m.n(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.n(); ++j) {
            Eigen::MatrixXcd block(m.r(), m.r());
            for (int a = 0; a < m.r(); ++a) {
                for (int b = 0; b < m.r(); ++b) {
                    block(a, b) = m(i, j, a, b);
                }
            }
            row.push_back(matrix_to_json(block));
        }
        out.push_back(std::move(row));
    }
    return out;
}

// Builds and validates a scenario; messages name the offending field or index.
inline BaseScenario scenario_from_json(const json &doc)
{
    BaseScenario sc;
    sc.n = positive_int(field(doc, "n", "scenario"), "scenario.n");
    sc.r = positive_int(field(doc, "r", "scenario"), "scenario.r");
    const json &samples = field(doc, "samples", "scenario");
    if (!samples.is_array() || samples.empty()) {
        throw validation_error("scenario.samples: expected a non-empty array");
    }
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const std::string where = "scenario.samples[" + std::to_string(s) + "]";
        const json &w = field(samples[s], "weight", where);
        if (!w.is_number()) {
            throw validation_error(where + ".weight: expected a number");
        }
        sc.samples.push_back({w.get<double>(), model_from_json(field(samples[s], "c", where), sc.n, sc.r, where + ".c")});
    }
    const Eigen::MatrixXcd theta = matrix_from_json(field(doc, "theta_L", "scenario"), sc.n, sc.n, "scenario.theta_L");
    try {
        sc.theta_L = HermitianForm(theta);
    } catch (const validation_error &) {
        throw validation_error("scenario.theta_L: not hermitian");
    }
    if (doc.contains("delta")) {
        const json &d = doc.at("delta");
        if (!d.is_number()) {
            throw validation_error("scenario.delta: expected a number");
        }
        sc.delta = d.get<double>();
    }
    validate_scenario(sc);
    return sc;
}

inline json scenario_to_json(const BaseScenario &sc)
{
    json doc;
    doc["n"] = sc.n;
    doc["r"] = sc.r;
    json samples = json::array();
    for (const auto &s : sc.samples) {
        samples.push_back({{"weight", s.weight}, {"c", model_to_json(s.model)}});
    }
    doc["samples"] = std::move(samples);
    doc["theta_L"] = matrix_to_json(sc.theta_L.matrix());
    doc["delta"] = sc.delta;
    return doc;
}

inline json parse_json_text(const std::string &text, const std::string &source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw validation_error(source + ": " + e.what());
    }
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw validation_error(path + ": cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline BaseScenario parse_scenario(const std::string &path)
{
    const json doc = parse_json_text(read_file(path), path);
    try {
        return scenario_from_json(doc);
    } catch (const validation_error &e) {
        throw validation_error(path + ": " + e.what());
    }
}

inline void write_scenario(const BaseScenario &sc, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw validation_error(path + ": cannot write file");
    }
    out << scenario_to_json(sc).dump(2) << '\n';
}

// Jet file: {"xi": [[z, ...], ...]} with k rows of r entries (scaled Taylor coefficients),
// optionally "alpha": [z, ...] for a reparametrization of the same order.
inline Jet jet_from_json(const json &doc)
{
    const json &xi = field(doc, "xi", "jet");
    if (!xi.is_array() || xi.empty() || !xi[0].is_array()) {
        throw validation_error("jet.xi: expected a k x r array");
    }
    const int k = static_cast<int>(xi.size());
    const int r = static_cast<int>(xi[0].size());
    return Jet(matrix_from_json(xi, k, r, "jet.xi"));
}

inline json jet_to_json(const Jet &j)
{
    return json{{"k", j.k()}, {"r", j.r()}, {"xi", matrix_to_json(j.xi())}};
}

inline Reparam reparam_from_json(const json &v)
{
    if (!v.is_array() || v.empty()) {
        throw validation_error("jet.alpha: expected a non-empty array");
    }
    std::vector<cplx> a;
    for (std::size_t i = 0; i < v.size(); ++i) {
        a.push_back(complex_from_json(v[i], "jet.alpha[" + std::to_string(i) + "]"));
    }
    return Reparam(std::move(a));
}

} // namespace io

using io::parse_scenario;
using io::write_scenario;

} // namespace jetmorse

#endif
