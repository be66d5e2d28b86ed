#pragma once

// Whole-configuration assembly: all (N+1) * 2^(N-1) labeled rays, the
// orthogonality graph over them, consistency with the parity relation,
// deformation verification, and exports.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rayconfig/common.hpp"
#include "rayconfig/indexset.hpp"
#include "rayconfig/params.hpp"
#include "rayconfig/rays.hpp"

namespace rayconfig {

// Ray order: A_* first (ascending label), then A_0 .. A_{N-2}, then the
// joint family; designated_bases holds one contiguous index list per family.
struct Configuration {
    PointSet point_set;
    ParameterSet params;
    XTable xt;
    YZTables yz;
    BasisFamily bases;
    CoefficientTable coeffs;
    std::vector<RayLabel> labels;
    std::vector<std::vector<int>> designated_bases;

    std::size_t ray_count() const { return labels.size(); }
};

inline Configuration build_configuration(const PointSet& ps, const ParameterSet& params,
                                         std::vector<BasisPair> phi = {}) {
    const ValidationReport check = validate_parameters(ps, params);
    if (!check.passed)
        throw InvalidInput("parameters failed validation: " + check.violations.front().condition);
    Configuration cfg;
    cfg.point_set = ps;
    cfg.params = params;
    cfg.xt = derive_x(ps, params);
    cfg.yz = derive_yz(ps, params, cfg.xt);
    cfg.bases = make_basis_family(ps, cfg.xt, std::move(phi));
    cfg.coeffs = build_coeff_table(ps, cfg.yz);
    const RelationParams p = RelationParams::canonical();

    cfg.labels.reserve((ps.n_points + 1) * ps.dimension());
    auto add_family = [&](GroupKind kind, int vertex, mask_t u_mask) {
        std::vector<int> indices;
        indices.reserve(ps.dimension());
        for (const ParityFunction& phi_fn : enumerate_labels(ps, u_mask, p)) {
            indices.push_back(static_cast<int>(cfg.labels.size()));
            cfg.labels.push_back(RayLabel{kind, vertex, phi_fn});
        }
        cfg.designated_bases.push_back(std::move(indices));
    };
    add_family(GroupKind::Singleton, ps.star_index(), mask_t{1} << ps.star_index());
    for (int l = 0; l < ps.ring_size; ++l) add_family(GroupKind::Singleton, l, mask_t{1} << l);
    add_family(GroupKind::Full, 0, ps.all_mask());
    return cfg;
}

// Dense rays for every label, in label order. N <= 8 only.
inline std::vector<DenseRay> build_dense_rays(const Configuration& cfg) {
    const PointSet& ps = cfg.point_set;
    std::vector<DenseRay> rays;
    rays.reserve(cfg.ray_count());
    for (const RayLabel& label : cfg.labels) {
        if (label.kind == GroupKind::Full)
            rays.push_back(build_f(ps, cfg.bases, cfg.coeffs, label.phi));
        else if (label.vertex == ps.star_index())
            rays.push_back(build_psi_star(ps, cfg.bases, label.phi));
        else
            rays.push_back(build_psi_l(ps, cfg.bases, label.vertex, label.phi));
    }
    return rays;
}

struct OrthogonalityGraph {
    int n = 0;
    double epsilon = 1e-9;
    std::vector<std::uint8_t> adj;  // n*n, symmetric, zero diagonal
    std::vector<std::pair<int, int>> ambiguous_pairs;  // empty for a valid graph

    bool edge(int i, int j) const { return adj[static_cast<std::size_t>(i) * n + j] != 0; }
    void set_edge(int i, int j) {
        adj[static_cast<std::size_t>(i) * n + j] = 1;
        adj[static_cast<std::size_t>(j) * n + i] = 1;
    }
    std::size_t edge_count() const {
        std::size_t m = 0;
        for (std::uint8_t b : adj) m += b;
        return m / 2;
    }
    friend bool operator==(const OrthogonalityGraph& a, const OrthogonalityGraph& b) {
        return a.n == b.n && a.adj == b.adj;
    }
};

inline OrthogonalityGraph make_empty_graph(int n, double epsilon = 1e-9) {
    OrthogonalityGraph g;
    g.n = n;
    g.epsilon = epsilon;
    g.adj.assign(static_cast<std::size_t>(n) * n, 0);
    return g;
}

inline constexpr double kAmbiguityCeiling = 1e-6;

enum class DenseCheck { Auto, Off, On };

// Pairwise scan over the factored path; an overlap magnitude below epsilon is
// an edge, one above the ambiguity ceiling is a non-edge, anything between
// aborts. When the dimension allows it (and the policy agrees) every overlap
// is cross-checked against the dense inner product within 1e-10.
inline OrthogonalityGraph orthogonality_graph(const Configuration& cfg, double epsilon = 1e-9,
                                              DenseCheck dense = DenseCheck::Auto,
                                              int threads = 1) {
    if (epsilon <= 0 || epsilon >= kAmbiguityCeiling)
        throw InvalidInput("epsilon must lie in (0, 1e-6)");
    const PointSet& ps = cfg.point_set;
    const int n = static_cast<int>(cfg.ray_count());
    const bool with_dense =
        dense == DenseCheck::On || (dense == DenseCheck::Auto && ps.n_points <= kDenseMaxPoints);
    std::vector<DenseRay> dense_rays;
    if (with_dense) dense_rays = build_dense_rays(cfg);

    OrthogonalityGraph g = make_empty_graph(n, epsilon);
    struct Trouble {
        int i = -1, j = -1;
        double value = 0.0;
        bool dense_mismatch = false;
    };
    std::vector<Trouble> troubles(std::max(threads, 1));

    auto scan_rows = [&](int begin, int end, Trouble& trouble) {
        for (int i = begin; i < end; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const cplx v =
                    inner_product_factored(ps, cfg.bases, cfg.coeffs, cfg.labels[i], cfg.labels[j]);
                const double mag = std::abs(v);
                if (with_dense) {
                    const cplx dv = inner_product(dense_rays[i], dense_rays[j]);
                    if (std::abs(v - dv) > 1e-10) {
                        trouble = {i, j, std::abs(v - dv), true};
                        return;
                    }
                }
                if (mag < epsilon) {
                    g.adj[static_cast<std::size_t>(i) * n + j] = 1;
                } else if (mag < kAmbiguityCeiling) {
                    trouble = {i, j, mag, false};
                    return;
                }
            }
        }
    };

    const int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        scan_rows(0, n, troubles[0]);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end, t] { scan_rows(begin, end, troubles[t]); });
        }
        for (std::thread& th : pool) th.join();
    }
    Trouble first;
    for (const Trouble& t : troubles)
        if (t.i >= 0 && (first.i < 0 || t.i < first.i || (t.i == first.i && t.j < first.j)))
            first = t;
    if (first.i >= 0) {
        if (first.dense_mismatch)
            throw std::logic_error("factored and dense inner products disagree at pair (" +
                                   std::to_string(first.i) + "," + std::to_string(first.j) + ")");
        throw AmbiguousOverlap(first.i, first.j, first.value);
    }
    // mirror the upper triangle
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.adj[static_cast<std::size_t>(j) * n + i] = g.adj[static_cast<std::size_t>(i) * n + j];
    return g;
}

// Directional contract: every non-orthogonal pair must satisfy the parity
// relation, and inside one group non-orthogonality must mean identical label
// (distinct labels of one designated basis are always orthogonal).
inline ValidationReport check_relation_consistency(const Configuration& cfg,
                                                   const OrthogonalityGraph& g,
                                                   const RelationParams& p) {
    ValidationReport report;
    const int n = g.n;
    for (int i = 0; i < n && report.passed; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool same_group = group_mask(cfg.point_set, cfg.labels[i]) ==
                                    group_mask(cfg.point_set, cfg.labels[j]);
            if (same_group && !g.edge(i, j)) {
                report.fail("same-group-biconditional", {i, j}, 0.0);
                break;
            }
            if (!g.edge(i, j) && !relation_holds(cfg.point_set, p, cfg.labels[i], cfg.labels[j])) {
                report.fail("non-orthogonal-implies-relation", {i, j}, 0.0);
                break;
            }
        }
    }
    return report;
}

struct DeformationWitness {
    std::vector<int> bijection;
    bool verified = false;
};

// Label-identity deformation check by default; a custom bijection may be
// supplied. Verified means the two graphs agree on every pair.
inline DeformationWitness verify_deformation(const OrthogonalityGraph& a,
                                             const OrthogonalityGraph& b,
                                             std::optional<std::vector<int>> bijection = {}) {
    if (a.n != b.n) throw InvalidInput("ray-count mismatch between configurations");
    DeformationWitness w;
    if (bijection) {
        w.bijection = std::move(*bijection);
        if (static_cast<int>(w.bijection.size()) != a.n)
            throw InvalidInput("bijection size mismatch");
        std::vector<std::uint8_t> hit(a.n, 0);
        for (int v : w.bijection) {
            if (v < 0 || v >= a.n || hit[v]) throw InvalidInput("map is not a bijection");
            hit[v] = 1;
        }
    } else {
        w.bijection.resize(a.n);
        for (int i = 0; i < a.n; ++i) w.bijection[i] = i;
    }
    w.verified = true;
    for (int i = 0; i < a.n && w.verified; ++i)
        for (int j = i + 1; j < a.n; ++j)
            if (a.edge(i, j) != b.edge(w.bijection[i], w.bijection[j])) {
                w.verified = false;
                break;
            }
    return w;
}

inline constexpr int kIsomorphismMaxRays = 80;

// Backtracking search for any adjacency-preserving bijection. Exponential in
// the worst case, so it is capped at kIsomorphismMaxRays vertices.
inline std::optional<std::vector<int>> search_deformation(const OrthogonalityGraph& a,
                                                          const OrthogonalityGraph& b) {
    if (a.n != b.n) return std::nullopt;
    if (a.n > kIsomorphismMaxRays)
        throw InvalidInput("deformation search is limited to " +
                           std::to_string(kIsomorphismMaxRays) + " rays");
    const int n = a.n;
    std::vector<int> deg_a(n, 0), deg_b(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            deg_a[i] += a.edge(i, j);
            deg_b[i] += b.edge(i, j);
        }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return deg_a[x] != deg_a[y] ? deg_a[x] > deg_a[y] : x < y; });

    std::vector<int> map(n, -1);
    std::vector<std::uint8_t> used(n, 0);
    auto backtrack = [&](auto&& self, int depth) -> bool {
        if (depth == n) return true;
        const int v = order[depth];
        for (int cand = 0; cand < n; ++cand) {
            if (used[cand] || deg_b[cand] != deg_a[v]) continue;
            bool ok = true;
            for (int d = 0; d < depth && ok; ++d)
                if (a.edge(v, order[d]) != b.edge(cand, map[order[d]])) ok = false;
            if (!ok) continue;
            map[v] = cand;
            used[cand] = 1;
            if (self(self, depth + 1)) return true;
            used[cand] = 0;
            map[v] = -1;
        }
        return false;
    };
    if (!backtrack(backtrack, 0)) return std::nullopt;
    return map;
}

// ---------------------------------------------------------------------------
// Exports. Byte-deterministic: stable label order, LF endings, integers only.

enum class ExportFormat { Json, DimacsClique, EdgeList };

inline std::string label_string(const PointSet& ps, const RayLabel& label) {
    std::string bits = "0b";
    for (int i = ps.n_points - 1; i >= 0; --i) bits += label.phi.at(i) ? '1' : '0';
    if (label.kind == GroupKind::Full) return "F:" + bits;
    if (label.vertex == ps.star_index()) return "Psi:star:" + bits;
    return "Psi:l=" + std::to_string(label.vertex) + ":" + bits;
}

inline std::string export_graph(const OrthogonalityGraph& g, const std::vector<std::string>& nodes,
                                const std::vector<std::vector<int>>& bases, ExportFormat format) {
    std::ostringstream out;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (g.edge(i, j)) edges.emplace_back(i, j);

    switch (format) {
        case ExportFormat::Json: {
            out << "{\"nodes\":[";
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (i) out << ',';
                out << '"' << nodes[i] << '"';
            }
            out << "],\"edges\":[";
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (e) out << ',';
                out << '[' << edges[e].first << ',' << edges[e].second << ']';
            }
            out << "],\"bases\":[";
            for (std::size_t b = 0; b < bases.size(); ++b) {
                if (b) out << ',';
                out << '[';
                for (std::size_t k = 0; k < bases[b].size(); ++k) {
                    if (k) out << ',';
                    out << bases[b][k];
                }
                out << ']';
            }
            out << "]}\n";
            break;
        }
        case ExportFormat::DimacsClique: {
            out << "p edge " << g.n << ' ' << edges.size() << '\n';
            for (const auto& [i, j] : edges) out << "e " << i + 1 << ' ' << j + 1 << '\n';
            break;
        }
        case ExportFormat::EdgeList: {
            for (const auto& [i, j] : edges) out << i << ' ' << j << '\n';
            break;
        }
    }
    return out.str();
}

inline std::string export_graph(const OrthogonalityGraph& g, const Configuration& cfg,
                                ExportFormat format) {
    std::vector<std::string> nodes;
    nodes.reserve(cfg.ray_count());
    for (const RayLabel& label : cfg.labels) nodes.push_back(label_string(cfg.point_set, label));
    return export_graph(g, nodes, cfg.designated_bases, format);
}

// Stable hash of labels plus adjacency; identical inputs give identical digests.
inline std::uint64_t configuration_digest(const Configuration& cfg, const OrthogonalityGraph& g) {
    std::uint64_t h = fnv1a64("rayconfig-digest-v1");
    const int n = cfg.point_set.n_points;
    h = fnv1a64(&n, sizeof(n), h);
    for (const RayLabel& label : cfg.labels) {
        const std::string s = label_string(cfg.point_set, label);
        h = fnv1a64(s.data(), s.size(), h);
    }
    h = fnv1a64(g.adj.data(), g.adj.size(), h);
    return h;
}

}  // namespace rayconfig
