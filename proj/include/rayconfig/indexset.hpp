#pragma once

// Combinatorial substrate: the point set V = Z/(N-1) u {*}, parity
// functions V -> Z/2 stored as bitmasks, the admissible label sets L(U),
// and the parity relation R that the realized non-orthogonality must imply.

#include <bit>
#include <cstdint>
#include <vector>

#include "rayconfig/common.hpp"

namespace rayconfig {

using mask_t = std::uint32_t;

// V has N points: the ring elements 0..N-2 and the formal point '*'.
// Bit i of a parity mask stores phi(i) for i in Z/(N-1); bit N-1 stores phi(*).
struct PointSet {
    int n_points = 0;    // N
    int ring_size = 0;   // N - 1, always odd
    int half_inverse = 0;  // inverse of 2 in Z/(N-1)

    int star_index() const { return n_points - 1; }
    mask_t all_mask() const { return (mask_t{1} << n_points) - 1; }
    mask_t ring_mask() const { return (mask_t{1} << ring_size) - 1; }
    std::size_t dimension() const { return std::size_t{1} << ring_size; }  // 2^(N-1)
};

struct ParityFunction {
    mask_t bits = 0;

    int at(int point) const { return static_cast<int>((bits >> point) & 1u); }
    friend bool operator==(const ParityFunction&, const ParityFunction&) = default;
};

struct RelationParams {
    int p0 = 0, p1 = 0, p2 = 0, p3 = 0;

    int at(int card_mod_4) const {
        switch (card_mod_4 & 3) {
            case 0: return p0;
            case 1: return p1;
            case 2: return p2;
            default: return p3;
        }
    }
    // The family studied here: p0 = 1, p1 = p2 = p3 = 0.
    static RelationParams canonical() { return {1, 0, 0, 0}; }
};

enum class GroupKind : std::uint8_t { Singleton, Full };

// Index of one ray: the group it belongs to plus its parity function.
struct RayLabel {
    GroupKind kind = GroupKind::Singleton;
    int vertex = 0;  // meaningful for Singleton only; star_index() denotes *
    ParityFunction phi;

    friend bool operator==(const RayLabel&, const RayLabel&) = default;
};

inline int parity(mask_t m) { return std::popcount(m) & 1; }

inline PointSet make_point_set(int n, bool allow_non_4n = false) {
    if (n < 4 || n > 24)
        throw InvalidInput("N must be between 4 and 24, got " + std::to_string(n));
    if (n % 2 != 0)
        throw InvalidInput("N must be even: the ring Z/(N-1) needs an invertible 2");
    if (n % 4 != 0 && !allow_non_4n)
        throw NotDivisibleByFour("N must be divisible by 4 (pass allow_non_4n to override)");
    PointSet ps;
    ps.n_points = n;
    ps.ring_size = n - 1;
    ps.half_inverse = n / 2;  // 2*(N/2) = N = 1 (mod N-1)
    return ps;
}

// m * 2^{-1} in Z/(N-1).
inline int half(const PointSet& ps, int m) {
    m %= ps.ring_size;
    if (m < 0) m += ps.ring_size;
    return static_cast<int>((static_cast<long long>(m) * ps.half_inverse) % ps.ring_size);
}

inline int ring_mod(const PointSet& ps, long long v) {
    long long r = v % ps.ring_size;
    if (r < 0) r += ps.ring_size;
    return static_cast<int>(r);
}

inline mask_t group_mask(const PointSet& ps, const RayLabel& label) {
    return label.kind == GroupKind::Full ? ps.all_mask() : (mask_t{1} << label.vertex);
}

inline bool is_valid_label(const PointSet& ps, const RelationParams& p, const RayLabel& label) {
    if ((label.phi.bits & ~ps.all_mask()) != 0) return false;
    if (label.kind == GroupKind::Singleton) {
        if (label.vertex < 0 || label.vertex >= ps.n_points) return false;
        return label.phi.at(label.vertex) == p.p1;
    }
    return parity(label.phi.bits) == p.p0;
}

// All parity functions phi with sum over U equal to p_{#U mod 4},
// in ascending bitmask order. Exactly 2^(N-1) of them for nonempty U.
inline std::vector<ParityFunction> enumerate_labels(const PointSet& ps, mask_t u_mask,
                                                    const RelationParams& p) {
    if (u_mask == 0) throw InvalidInput("enumerate_labels: U must be nonempty");
    if ((u_mask & ~ps.all_mask()) != 0) throw InvalidInput("enumerate_labels: U outside V");
    const int target = p.at(std::popcount(u_mask) & 3);
    std::vector<ParityFunction> out;
    out.reserve(ps.dimension());
    const mask_t end = ps.all_mask();
    for (mask_t m = 0;; ++m) {
        if (parity(m & u_mask) == target) out.push_back({m});
        if (m == end) break;
    }
    return out;
}

// The relation R. Same group: labels must be equal. Different groups:
// the parity of phi - phi1 over the symmetric difference U ^ U1 must
// match p indexed by the cardinality of U ^ U1 mod 4.
inline bool relation_holds(const PointSet& ps, const RelationParams& p, const RayLabel& a,
                           const RayLabel& b) {
    const mask_t ua = group_mask(ps, a);
    const mask_t ub = group_mask(ps, b);
    const mask_t diff = ua ^ ub;
    if (diff == 0) return a.phi == b.phi;
    return parity((a.phi.bits ^ b.phi.bits) & diff) == p.at(std::popcount(diff) & 3);
}

}  // namespace rayconfig
