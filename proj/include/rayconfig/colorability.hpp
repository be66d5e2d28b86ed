#pragma once

// Two independent routes to non-bicolorability: a graph-level search for a
// valid red assignment (one red per designated basis, reds pairwise
// non-orthogonal), and an algebraic GF(2) certificate over the parity
// constraints that any red assignment must satisfy.
//
// The graph search consumes only the realized graph; the GF(2) route never
// looks at a ray. Their agreement is evidence, not circularity.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "rayconfig/common.hpp"
#include "rayconfig/graph.hpp"
#include "rayconfig/indexset.hpp"

namespace rayconfig {

// One red ray per designated basis (global ray indices); everything else blue.
struct Coloring {
    std::vector<int> red;
};

struct SearchStats {
    std::uint64_t nodes_visited = 0;
    std::string wall_notes;
};

struct ColoringFound {
    Coloring coloring;
    SearchStats stats;
};
struct ExhaustedNoColoring {
    SearchStats stats;
};
struct Gf2Infeasible {
    std::vector<int> trace;  // original row ids whose sum is 0 = 1
};
struct Gf2Feasible {
    std::vector<std::uint8_t> witness;  // one bit per variable
};
using Certificate = std::variant<ColoringFound, ExhaustedNoColoring, Gf2Infeasible, Gf2Feasible>;

inline bool verify_coloring(const OrthogonalityGraph& g, const std::vector<std::vector<int>>& bases,
                            const Coloring& coloring) {
    if (coloring.red.size() != bases.size()) return false;
    for (std::size_t b = 0; b < bases.size(); ++b)
        if (std::find(bases[b].begin(), bases[b].end(), coloring.red[b]) == bases[b].end())
            return false;
    for (std::size_t a = 0; a < coloring.red.size(); ++a)
        for (std::size_t b = a + 1; b < coloring.red.size(); ++b)
            if (g.edge(coloring.red[a], coloring.red[b])) return false;
    return true;
}

enum class SearchMode { Exhaustive, Backtracking };

inline constexpr std::uint64_t kExhaustiveCap = 1000000;

// Exhaustive mode enumerates every assignment (one ray per basis) and is
// limited to 10^6 of them; backtracking orders bases most-constrained-first
// (fewest non-orthogonal cross pairs) and prunes on the first orthogonal red
// pair, throwing SearchBudgetExceeded past `limit` visited nodes.
inline Certificate search_bicoloring(const OrthogonalityGraph& g,
                                     const std::vector<std::vector<int>>& bases, SearchMode mode,
                                     std::uint64_t limit = 10000000000ULL) {
    const std::size_t nb = bases.size();
    SearchStats stats;

    if (mode == SearchMode::Exhaustive) {
        std::uint64_t total = 1;
        for (const auto& basis : bases) {
            total *= basis.size();
            if (total > kExhaustiveCap)
                throw InvalidInput("exhaustive search needs at most 10^6 assignments");
        }
        std::vector<std::size_t> pick(nb, 0);
        Coloring coloring;
        coloring.red.resize(nb);
        for (std::uint64_t it = 0; it < total; ++it) {
            ++stats.nodes_visited;
            for (std::size_t b = 0; b < nb; ++b) coloring.red[b] = bases[b][pick[b]];
            bool ok = true;
            for (std::size_t a = 0; a < nb && ok; ++a)
                for (std::size_t b = a + 1; b < nb && ok; ++b)
                    if (g.edge(coloring.red[a], coloring.red[b])) ok = false;
            if (ok && verify_coloring(g, bases, coloring)) return ColoringFound{coloring, stats};
            for (std::size_t b = nb; b-- > 0;) {
                if (++pick[b] < bases[b].size()) break;
                pick[b] = 0;
            }
        }
        return ExhaustedNoColoring{stats};
    }

    // Most-constrained-first: ascending count of non-adjacent cross pairs.
    std::vector<std::uint64_t> compatible(nb, 0);
    std::vector<std::uint8_t> member(g.n, 0);
    for (std::size_t b = 0; b < nb; ++b) {
        for (int r : bases[b]) member[r] = 1;
        for (int r : bases[b])
            for (int other = 0; other < g.n; ++other)
                if (!g.edge(r, other) && other != r && !member[other]) ++compatible[b];
        for (int r : bases[b]) member[r] = 0;
    }
    std::vector<std::size_t> order(nb);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return compatible[x] != compatible[y] ? compatible[x] < compatible[y] : x < y;
    });

    Coloring partial;
    partial.red.assign(nb, -1);
    std::vector<int> chosen;
    chosen.reserve(nb);
    auto dfs = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == nb) return true;
        const std::size_t basis = order[depth];
        for (int candidate : bases[basis]) {
            if (++stats.nodes_visited > limit) throw SearchBudgetExceeded(stats.nodes_visited);
            bool ok = true;
            for (int prev : chosen)
                if (g.edge(candidate, prev)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            partial.red[basis] = candidate;
            chosen.push_back(candidate);
            if (self(self, depth + 1)) return true;
            chosen.pop_back();
            partial.red[basis] = -1;
        }
        return false;
    };
    if (dfs(dfs, 0) && verify_coloring(g, bases, partial)) return ColoringFound{partial, stats};
    return ExhaustedNoColoring{stats};
}

// ---------------------------------------------------------------------------
// GF(2) route.

struct Gf2Row {
    std::vector<std::uint64_t> coeffs;
    int rhs = 0;
    std::string label;

    bool test(int var) const { return (coeffs[var >> 6] >> (var & 63)) & 1u; }
    void flip(int var) { coeffs[var >> 6] ^= std::uint64_t{1} << (var & 63); }
};

// Variables: sigma_v(z) for every v, z in V (including the membership bit
// sigma_v(v)), then pi_hat(z) for z in V. Vertex order: ring points 0..N-2,
// then *. Rows: (i) sigma_v(v1) + sigma_{v1}(v) = p2 per unordered pair;
// (ii) sum_{z != v} sigma_v(z) + pi_hat(v) = p0 + p3 per v; (iii) the
// membership rows sigma_v(v) = p1 and sum_z pi_hat(z) = p0.
struct Gf2System {
    int n_points = 0;
    int n_vars = 0;
    std::vector<Gf2Row> rows;

    int var_sigma(int v, int z) const { return v * n_points + z; }
    int var_pi(int z) const { return n_points * n_points + z; }
};

inline std::string gf2_vertex_name(const PointSet& ps, int v) {
    return v == ps.star_index() ? std::string("star") : std::to_string(v);
}

inline Gf2System build_gf2_system(const PointSet& ps, const RelationParams& p) {
    const int n = ps.n_points;
    Gf2System sys;
    sys.n_points = n;
    sys.n_vars = n * (n + 1);
    const std::size_t words = (static_cast<std::size_t>(sys.n_vars) + 63) / 64;
    auto blank = [&](int rhs, std::string label) {
        Gf2Row row;
        row.coeffs.assign(words, 0);
        row.rhs = rhs;
        row.label = std::move(label);
        return row;
    };
    for (int v = 0; v < n; ++v)
        for (int v1 = v + 1; v1 < n; ++v1) {
            Gf2Row row = blank(p.p2, "pair:" + gf2_vertex_name(ps, v) + "," + gf2_vertex_name(ps, v1));
            row.flip(sys.var_sigma(v, v1));
            row.flip(sys.var_sigma(v1, v));
            sys.rows.push_back(std::move(row));
        }
    for (int v = 0; v < n; ++v) {
        Gf2Row row = blank((p.p0 + p.p3) & 1, "row-sum:" + gf2_vertex_name(ps, v));
        for (int z = 0; z < n; ++z)
            if (z != v) row.flip(sys.var_sigma(v, z));
        row.flip(sys.var_pi(v));
        sys.rows.push_back(std::move(row));
    }
    for (int v = 0; v < n; ++v) {
        Gf2Row row = blank(p.p1, "member:sigma:" + gf2_vertex_name(ps, v));
        row.flip(sys.var_sigma(v, v));
        sys.rows.push_back(std::move(row));
    }
    Gf2Row row = blank(p.p0, "member:pi");
    for (int z = 0; z < n; ++z) row.flip(sys.var_pi(z));
    sys.rows.push_back(std::move(row));
    return sys;
}

inline bool gf2_row_is_zero(const Gf2Row& row) {
    for (std::uint64_t w : row.coeffs)
        if (w) return false;
    return true;
}

// XOR of the cited original rows; a valid infeasibility trace sums to 0 = 1.
inline Gf2Row gf2_combine(const Gf2System& sys, const std::vector<int>& row_ids) {
    Gf2Row acc;
    acc.coeffs.assign(sys.rows.empty() ? 1 : sys.rows.front().coeffs.size(), 0);
    for (int id : row_ids) {
        const Gf2Row& r = sys.rows.at(id);
        for (std::size_t w = 0; w < acc.coeffs.size(); ++w) acc.coeffs[w] ^= r.coeffs[w];
        acc.rhs ^= r.rhs;
    }
    return acc;
}

inline bool verify_gf2_trace(const Gf2System& sys, const std::vector<int>& trace) {
    const Gf2Row sum = gf2_combine(sys, trace);
    return gf2_row_is_zero(sum) && sum.rhs == 1;
}

inline bool verify_gf2_witness(const Gf2System& sys, const std::vector<std::uint8_t>& witness) {
    if (static_cast<int>(witness.size()) != sys.n_vars) return false;
    for (const Gf2Row& row : sys.rows) {
        int acc = 0;
        for (int v = 0; v < sys.n_vars; ++v)
            if (row.test(v)) acc ^= witness[v];
        if (acc != row.rhs) return false;
    }
    return true;
}

// Gauss-Jordan elimination with full row provenance. An inconsistent row
// yields Gf2Infeasible with the multiset of original rows summing to 0 = 1;
// otherwise free variables are set to zero and a witness is returned.
inline Certificate gf2_certify(const Gf2System& sys) {
    struct WorkRow {
        Gf2Row row;
        std::vector<std::uint64_t> provenance;
        int pivot = -1;
    };
    const std::size_t prov_words = (sys.rows.size() + 63) / 64;
    std::vector<WorkRow> work;
    work.reserve(sys.rows.size());
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        WorkRow w{sys.rows[i], std::vector<std::uint64_t>(prov_words, 0), -1};
        w.provenance[i >> 6] |= std::uint64_t{1} << (i & 63);
        work.push_back(std::move(w));
    }
    auto xor_into = [](WorkRow& dst, const WorkRow& src) {
        for (std::size_t w = 0; w < dst.row.coeffs.size(); ++w) dst.row.coeffs[w] ^= src.row.coeffs[w];
        dst.row.rhs ^= src.row.rhs;
        for (std::size_t w = 0; w < dst.provenance.size(); ++w) dst.provenance[w] ^= src.provenance[w];
    };
    for (int col = 0; col < sys.n_vars; ++col) {
        int pivot = -1;
        for (std::size_t r = 0; r < work.size(); ++r)
            if (work[r].pivot < 0 && work[r].row.test(col)) {
                pivot = static_cast<int>(r);
                break;
            }
        if (pivot < 0) continue;
        work[pivot].pivot = col;
        for (std::size_t r = 0; r < work.size(); ++r)
            if (static_cast<int>(r) != pivot && work[r].row.test(col)) xor_into(work[r], work[pivot]);
    }
    for (const WorkRow& w : work) {
        if (w.pivot < 0 && w.row.rhs == 1 && gf2_row_is_zero(w.row)) {
            std::vector<int> trace;
            for (std::size_t i = 0; i < sys.rows.size(); ++i)
                if ((w.provenance[i >> 6] >> (i & 63)) & 1u) trace.push_back(static_cast<int>(i));
            return Gf2Infeasible{std::move(trace)};
        }
    }
    std::vector<std::uint8_t> witness(sys.n_vars, 0);
    for (const WorkRow& w : work)
        if (w.pivot >= 0) witness[w.pivot] = static_cast<std::uint8_t>(w.row.rhs);
    return Gf2Feasible{std::move(witness)};
}

}  // namespace rayconfig
