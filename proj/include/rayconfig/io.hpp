#pragma once

// JSON serialization: parameter files, optional basis files, certificates,
// and machine-readable run reports. Integer data (mu, kappa) is bit-exact;
// lambda entries are renormalized onto the unit circle on load.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rayconfig/colorability.hpp"
#include "rayconfig/common.hpp"
#include "rayconfig/graph.hpp"
#include "rayconfig/params.hpp"

namespace rayconfig {

using json = nlohmann::ordered_json;

inline json params_to_json(const PointSet& ps, const ParameterSet& p) {
    json j;
    j["N"] = ps.n_points;
    json lambda = json::array();
    for (const cplx& v : p.lambda) lambda.push_back({v.real(), v.imag()});
    j["lambda"] = std::move(lambda);
    json mu = json::array();
    for (int i = 0; i < ps.ring_size; ++i) {
        json row = json::array();
        for (int k = 0; k < ps.ring_size; ++k) row.push_back(static_cast<int>(p.mu_pow.at(i, k)));
        mu.push_back(std::move(row));
    }
    j["mu"] = std::move(mu);
    json kappa = json::array();
    for (int i = 0; i < ps.ring_size; ++i) {
        json row = json::array();
        for (int k = 0; k < ps.ring_size; ++k) row.push_back(static_cast<int>(p.kappa.at(i, k)));
        kappa.push_back(std::move(row));
    }
    j["kappa"] = std::move(kappa);
    return j;
}

inline std::pair<PointSet, ParameterSet> params_from_json(const json& j,
                                                          bool allow_non_4n = false) {
    if (!j.contains("N") || !j.contains("lambda") || !j.contains("mu") || !j.contains("kappa"))
        throw InvalidInput("parameter file needs N, lambda, mu, kappa");
    const PointSet ps = make_point_set(j.at("N").get<int>(), allow_non_4n);
    const int n = ps.ring_size;
    ParameterSet p;
    const json& lam = j.at("lambda");
    if (static_cast<int>(lam.size()) != n) throw InvalidInput("lambda must have N-1 entries");
    for (const json& entry : lam) {
        if (!entry.is_array() || entry.size() != 2)
            throw InvalidInput("lambda entries must be [re, im] pairs");
        p.lambda.push_back(normalize_phase({entry[0].get<double>(), entry[1].get<double>()}));
    }
    auto read_table = [&](const json& src, const char* name, auto& table, auto valid) {
        if (static_cast<int>(src.size()) != n)
            throw InvalidInput(std::string(name) + " must be (N-1) x (N-1)");
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(src[i].size()) != n)
                throw InvalidInput(std::string(name) + " must be (N-1) x (N-1)");
            for (int k = 0; k < n; ++k) {
                const int v = src[i][k].get<int>();
                if (!valid(v)) throw InvalidInput(std::string(name) + " entry out of range");
                table.at(i, k) = static_cast<std::remove_reference_t<decltype(table.at(0, 0))>>(v);
            }
        }
    };
    p.mu_pow = SquareTable<std::uint8_t>(n, 0);
    p.kappa = SquareTable<std::int8_t>(n, 1);
    read_table(j.at("mu"), "mu", p.mu_pow, [](int v) { return v >= 0 && v <= 3; });
    read_table(j.at("kappa"), "kappa", p.kappa, [](int v) { return v == 1 || v == -1; });
    return {ps, p};
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path);
    out << content;
}

inline std::pair<PointSet, ParameterSet> load_params(const std::string& path,
                                                     bool allow_non_4n = false) {
    try {
        return params_from_json(json::parse(read_file(path)), allow_non_4n);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("parse error in " + path + ": " + e.what());
    }
}

inline void save_params(const std::string& path, const PointSet& ps, const ParameterSet& p) {
    write_file(path, params_to_json(ps, p).dump(2) + "\n");
}

// Optional basis file: a list of N-1 2x2 complex matrices, rows = vectors.
inline std::vector<BasisPair> basis_family_from_json(const PointSet& ps, const json& j) {
    if (!j.is_array() || static_cast<int>(j.size()) != ps.ring_size)
        throw InvalidInput("basis file must list N-1 matrices");
    std::vector<BasisPair> out;
    for (const json& mat : j) {
        if (!mat.is_array() || mat.size() != 2) throw InvalidInput("basis matrices must be 2x2");
        BasisPair pair;
        for (int r = 0; r < 2; ++r) {
            if (!mat[r].is_array() || mat[r].size() != 2)
                throw InvalidInput("basis matrices must be 2x2");
            for (int c = 0; c < 2; ++c) {
                const json& entry = mat[r][c];
                if (!entry.is_array() || entry.size() != 2)
                    throw InvalidInput("basis entries must be [re, im] pairs");
                pair.vec[r][c] = {entry[0].get<double>(), entry[1].get<double>()};
            }
        }
        if (orthonormality_defect(pair) > 1e-9)
            throw InvalidInput("basis matrix " + std::to_string(out.size()) + " is not orthonormal");
        out.push_back(pair);
    }
    return out;
}

inline std::vector<BasisPair> load_basis_family(const PointSet& ps, const std::string& path) {
    try {
        return basis_family_from_json(ps, json::parse(read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("parse error in " + path + ": " + e.what());
    }
}

inline std::string digest_hex(std::uint64_t h) {
    std::ostringstream out;
    out << std::hex << std::setfill('0') << std::setw(16) << h;
    return out.str();
}

inline json certificate_to_json(const Certificate& cert) {
    json j;
    if (const auto* found = std::get_if<ColoringFound>(&cert)) {
        j["kind"] = "ColoringFound";
        j["coloring"] = found->coloring.red;
        j["stats"] = {{"nodes_visited", found->stats.nodes_visited},
                      {"wall_notes", found->stats.wall_notes}};
    } else if (const auto* exhausted = std::get_if<ExhaustedNoColoring>(&cert)) {
        j["kind"] = "ExhaustedNoColoring";
        j["stats"] = {{"nodes_visited", exhausted->stats.nodes_visited},
                      {"wall_notes", exhausted->stats.wall_notes}};
    } else if (const auto* infeasible = std::get_if<Gf2Infeasible>(&cert)) {
        j["kind"] = "Gf2Infeasible";
        j["trace"] = infeasible->trace;
    } else if (const auto* feasible = std::get_if<Gf2Feasible>(&cert)) {
        j["kind"] = "Gf2Feasible";
        j["witness"] = feasible->witness;
    }
    return j;
}

inline json gf2_system_to_json(const Gf2System& sys) {
    json rows = json::array();
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        json vars = json::array();
        for (int v = 0; v < sys.n_vars; ++v)
            if (sys.rows[i].test(v)) vars.push_back(v);
        rows.push_back({{"id", i}, {"label", sys.rows[i].label}, {"vars", std::move(vars)},
                        {"rhs", sys.rows[i].rhs}});
    }
    return {{"n_vars", sys.n_vars}, {"rows", std::move(rows)}};
}

// Machine-readable run summary; deterministic for fixed inputs and seed
// except for wall-clock timings, which never enter the digest.
struct RunReport {
    std::string command;
    json inputs = json::object();
    json outcomes = json::array();
    json timings = json::object();
    std::string digest;

    void add_outcome(const std::string& check, bool pass, json details = json::object()) {
        outcomes.push_back({{"check", check}, {"pass", pass}, {"details", std::move(details)}});
    }
    bool all_passed() const {
        for (const json& o : outcomes)
            if (!o.at("pass").get<bool>()) return false;
        return true;
    }
    json to_json() const {
        json j;
        j["command"] = command;
        j["inputs"] = inputs;
        j["outcomes"] = outcomes;
        j["timings"] = timings;
        j["tool_version"] = kVersion;
        j["digest"] = digest;
        return j;
    }
};

}  // namespace rayconfig
