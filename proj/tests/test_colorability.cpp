#include <doctest.h>

#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <vector>

#include "rayconfig/colorability.hpp"

using namespace rayconfig;

namespace {

Configuration all_ones_config(int n) {
    const PointSet ps = make_point_set(n);
    return build_configuration(ps, all_ones_parameters(ps));
}

// Two 2-element bases with one cross edge: bicolorable.
struct Toy {
    OrthogonalityGraph graph = make_empty_graph(4);
    std::vector<std::vector<int>> bases{{0, 1}, {2, 3}};
};

Toy make_toy() {
    Toy toy;
    toy.graph.set_edge(0, 1);
    toy.graph.set_edge(2, 3);
    toy.graph.set_edge(0, 2);
    return toy;
}

std::uint64_t count_solutions(const OrthogonalityGraph& g,
                              const std::vector<std::vector<int>>& bases) {
    std::vector<std::size_t> pick(bases.size(), 0);
    std::uint64_t total = 1, found = 0;
    for (const auto& b : bases) total *= b.size();
    Coloring c;
    c.red.resize(bases.size());
    for (std::uint64_t it = 0; it < total; ++it) {
        for (std::size_t b = 0; b < bases.size(); ++b) c.red[b] = bases[b][pick[b]];
        if (verify_coloring(g, bases, c)) ++found;
        for (std::size_t b = bases.size(); b-- > 0;) {
            if (++pick[b] < bases[b].size()) break;
            pick[b] = 0;
        }
    }
    return found;
}

}  // namespace

TEST_CASE("toy graph: mutually unbiased bases admit a bicoloring") {
    const Toy toy = make_toy();
    for (SearchMode mode : {SearchMode::Exhaustive, SearchMode::Backtracking}) {
        const Certificate cert = search_bicoloring(toy.graph, toy.bases, mode);
        const auto* found = std::get_if<ColoringFound>(&cert);
        REQUIRE(found != nullptr);
        CHECK(verify_coloring(toy.graph, toy.bases, found->coloring));
    }
}

TEST_CASE("N=4 all-ones: exhaustive search finds no bicoloring in 32768 assignments") {
    const Configuration cfg = all_ones_config(4);
    const OrthogonalityGraph g = orthogonality_graph(cfg);
    const Certificate cert = search_bicoloring(g, cfg.designated_bases, SearchMode::Exhaustive);
    const auto* exhausted = std::get_if<ExhaustedNoColoring>(&cert);
    REQUIRE(exhausted != nullptr);
    CHECK(exhausted->stats.nodes_visited == 32768);

    SUBCASE("backtracking agrees and visits fewer nodes") {
        const Certificate bt = search_bicoloring(g, cfg.designated_bases, SearchMode::Backtracking);
        const auto* bt_exhausted = std::get_if<ExhaustedNoColoring>(&bt);
        REQUIRE(bt_exhausted != nullptr);
        CHECK(bt_exhausted->stats.nodes_visited < 32768);
    }
    SUBCASE("a tiny budget raises SearchBudgetExceeded") {
        CHECK_THROWS_AS(search_bicoloring(g, cfg.designated_bases, SearchMode::Backtracking, 10),
                        SearchBudgetExceeded);
    }
}

TEST_CASE("exhaustive mode refuses oversized assignment spaces") {
    const Configuration cfg = all_ones_config(8);  // 128^9 assignments
    const OrthogonalityGraph g = orthogonality_graph(cfg, 1e-9, DenseCheck::Off);
    CHECK_THROWS_AS(search_bicoloring(g, cfg.designated_bases, SearchMode::Exhaustive),
                    InvalidInput);
}

TEST_CASE("N=8: backtracking exhausts without finding a bicoloring") {
    const PointSet ps = make_point_set(8);
    for (std::uint64_t seed : {0ull, 1ull}) {
        const ParameterSet p = seed == 0 ? all_ones_parameters(ps) : random_parameters(ps, seed);
        const Configuration cfg = build_configuration(ps, p);
        const OrthogonalityGraph g = orthogonality_graph(cfg, 1e-9, DenseCheck::Off);
        const Certificate cert = search_bicoloring(g, cfg.designated_bases, SearchMode::Backtracking);
        CHECK(std::holds_alternative<ExhaustedNoColoring>(cert));
    }
}

TEST_CASE("verify_coloring rejects malformed colorings") {
    const Toy toy = make_toy();
    CHECK_FALSE(verify_coloring(toy.graph, toy.bases, Coloring{{0, 2}}));    // orthogonal reds
    CHECK_FALSE(verify_coloring(toy.graph, toy.bases, Coloring{{2, 3}}));    // red outside basis
    CHECK_FALSE(verify_coloring(toy.graph, toy.bases, Coloring{{0}}));       // wrong arity
    CHECK(verify_coloring(toy.graph, toy.bases, Coloring{{0, 3}}));
    CHECK(verify_coloring(toy.graph, toy.bases, Coloring{{1, 2}}));
}

TEST_CASE("adding clique constraints can only shrink the solution set") {
    const Toy toy = make_toy();
    const std::uint64_t base_count = count_solutions(toy.graph, toy.bases);
    CHECK(base_count == 3);
    auto extended = toy.bases;
    extended.push_back({0, 1});  // an orthogonal pair reused as an extra constraint
    CHECK(count_solutions(toy.graph, extended) <= base_count);

    // same monotonicity on the real N=4 graph, using any non-designated
    // 8-clique a bounded greedy hunt can find
    const Configuration cfg = all_ones_config(4);
    const OrthogonalityGraph g = orthogonality_graph(cfg);
    std::mt19937 rng(0);
    std::vector<int> order(g.n);
    for (int i = 0; i < g.n; ++i) order[i] = i;
    std::set<std::set<int>> designated;
    for (const auto& b : cfg.designated_bases) designated.insert({b.begin(), b.end()});
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<int> clique;
        for (int v : order) {
            bool ok = true;
            for (int c : clique)
                if (!g.edge(v, c)) {
                    ok = false;
                    break;
                }
            if (ok) clique.push_back(v);
        }
        if (clique.size() != 8) continue;
        if (designated.count({clique.begin(), clique.end()})) continue;
        auto bases = cfg.designated_bases;
        std::sort(clique.begin(), clique.end());
        bases.push_back(clique);
        const Certificate cert = search_bicoloring(g, bases, SearchMode::Backtracking);
        CHECK(std::holds_alternative<ExhaustedNoColoring>(cert));
        break;
    }
}

TEST_CASE("partial red assignments surviving orthogonality satisfy the parity rows") {
    const Configuration cfg = all_ones_config(4);
    const OrthogonalityGraph g = orthogonality_graph(cfg);
    const RelationParams p = RelationParams::canonical();
    // every compatible (non-orthogonal) red pair across two designated bases
    // satisfies the relation row that the GF(2) system encodes for it
    int checked = 0;
    for (std::size_t ba = 0; ba < cfg.designated_bases.size(); ++ba)
        for (std::size_t bb = ba + 1; bb < cfg.designated_bases.size(); ++bb)
            for (int ra : cfg.designated_bases[ba])
                for (int rb : cfg.designated_bases[bb]) {
                    if (g.edge(ra, rb)) continue;
                    CHECK(relation_holds(cfg.point_set, p, cfg.labels[ra], cfg.labels[rb]));
                    ++checked;
                }
    CHECK(checked > 0);
}

TEST_CASE("gf2 system shape at N=4") {
    const PointSet ps = make_point_set(4);
    const Gf2System sys = build_gf2_system(ps, RelationParams::canonical());
    CHECK(sys.n_vars == 4 * 5);          // sigma_v(z) over V x V plus pi over V
    CHECK(sys.rows.size() == 6 + 4 + 4 + 1);  // pairs, row-sums, memberships, pi row
    for (const auto& row : sys.rows) {
        int support = 0;
        for (int v = 0; v < sys.n_vars; ++v) support += row.test(v);
        CHECK(support >= 1);
        CHECK(support <= sys.n_points);
    }
}

TEST_CASE("summing the rows reproduces the p0 obstruction exactly when 4 | N") {
    for (int n : {4, 8}) {
        const PointSet ps = make_point_set(n);
        for (int bits = 0; bits < 16; ++bits) {
            const RelationParams p{(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
            const Gf2System sys = build_gf2_system(ps, p);
            std::vector<int> combo;
            for (std::size_t i = 0; i < sys.rows.size(); ++i)
                if (sys.rows[i].label.rfind("pair:", 0) == 0 ||
                    sys.rows[i].label.rfind("row-sum:", 0) == 0 || sys.rows[i].label == "member:pi")
                    combo.push_back(static_cast<int>(i));
            const Gf2Row sum = gf2_combine(sys, combo);
            CHECK(gf2_row_is_zero(sum));
            CHECK(sum.rhs == p.p0);
        }
    }
    SUBCASE("the reduction needs 4 | N: at N=6 the combined row picks up p2") {
        const PointSet ps = make_point_set(6, true);
        const RelationParams p{1, 0, 1, 0};
        const Gf2System sys = build_gf2_system(ps, p);
        std::vector<int> combo;
        for (std::size_t i = 0; i < sys.rows.size(); ++i)
            if (sys.rows[i].label.rfind("pair:", 0) == 0 ||
                sys.rows[i].label.rfind("row-sum:", 0) == 0 || sys.rows[i].label == "member:pi")
                combo.push_back(static_cast<int>(i));
        const Gf2Row sum = gf2_combine(sys, combo);
        CHECK(gf2_row_is_zero(sum));
        CHECK(sum.rhs == ((p.p0 + p.p2) & 1));
        CHECK(sum.rhs != p.p0);
    }
}

TEST_CASE("gf2 verdicts at N=4 match brute-force enumeration of all assignments") {
    // independent oracle: 20 variables, so every assignment can be tried
    const PointSet ps = make_point_set(4);
    for (int bits = 0; bits < 16; ++bits) {
        const RelationParams p{(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
        const Gf2System sys = build_gf2_system(ps, p);
        REQUIRE(sys.n_vars == 20);
        std::vector<std::uint32_t> masks;
        std::vector<int> rhs;
        for (const auto& row : sys.rows) {
            std::uint32_t m = 0;
            for (int v = 0; v < sys.n_vars; ++v)
                if (row.test(v)) m |= std::uint32_t{1} << v;
            masks.push_back(m);
            rhs.push_back(row.rhs);
        }
        bool satisfiable = false;
        for (std::uint32_t assignment = 0; assignment < (1u << 20) && !satisfiable; ++assignment) {
            bool ok = true;
            for (std::size_t r = 0; r < masks.size(); ++r)
                if ((std::popcount(assignment & masks[r]) & 1) != rhs[r]) {
                    ok = false;
                    break;
                }
            satisfiable = ok;
        }
        const Certificate cert = gf2_certify(sys);
        CHECK(std::holds_alternative<Gf2Feasible>(cert) == satisfiable);
        CHECK(satisfiable == (p.p0 == 0));
    }
}

TEST_CASE("gf2 certificates") {
    SUBCASE("p0 = 1 is infeasible for every N divisible by 4, any p1..p3") {
        for (int n : {4, 8}) {
            const PointSet ps = make_point_set(n);
            for (int bits = 0; bits < 8; ++bits) {
                const RelationParams p{1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
                const Gf2System sys = build_gf2_system(ps, p);
                const Certificate cert = gf2_certify(sys);
                const auto* infeasible = std::get_if<Gf2Infeasible>(&cert);
                REQUIRE(infeasible != nullptr);
                // independent substitution: XOR the cited rows by hand
                std::vector<std::uint8_t> acc(sys.n_vars, 0);
                int rhs = 0;
                for (int id : infeasible->trace) {
                    for (int v = 0; v < sys.n_vars; ++v)
                        acc[v] ^= sys.rows[id].test(v) ? 1 : 0;
                    rhs ^= sys.rows[id].rhs;
                }
                CHECK(std::all_of(acc.begin(), acc.end(), [](std::uint8_t b) { return b == 0; }));
                CHECK(rhs == 1);
                CHECK(verify_gf2_trace(sys, infeasible->trace));
            }
        }
    }
    SUBCASE("p0 = 0 is feasible with a substitution-checked witness") {
        for (int n : {4, 8}) {
            const PointSet ps = make_point_set(n);
            for (int bits = 0; bits < 8; ++bits) {
                const RelationParams p{0, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
                const Gf2System sys = build_gf2_system(ps, p);
                const Certificate cert = gf2_certify(sys);
                const auto* feasible = std::get_if<Gf2Feasible>(&cert);
                REQUIRE(feasible != nullptr);
                // independent substitution into every original row
                for (const Gf2Row& row : sys.rows) {
                    int acc = 0;
                    for (int v = 0; v < sys.n_vars; ++v)
                        if (row.test(v)) acc ^= feasible->witness[v];
                    CHECK(acc == row.rhs);
                }
            }
        }
    }
}
