#pragma once

// Deformation parameters (lambda, mu, kappa) and the derived tables
// x_{i,j}, y(k,j), z(k,j), plus validation of every solvability condition
// the construction needs before any ray is built.
//
// mu is kept exactly as a power of i (integer mod 4) and kappa exactly as a
// sign, so the conditions on z stay exact algebraic identities instead of
// tolerance checks. Only lambda is a floating-point phase.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "rayconfig/common.hpp"
#include "rayconfig/indexset.hpp"

namespace rayconfig {

template <typename T>
struct SquareTable {
    int n = 0;
    std::vector<T> v;

    SquareTable() = default;
    explicit SquareTable(int size, T init = T{}) : n(size), v(static_cast<std::size_t>(size) * size, init) {}
    T& at(int i, int j) { return v[static_cast<std::size_t>(i) * n + j]; }
    const T& at(int i, int j) const { return v[static_cast<std::size_t>(i) * n + j]; }
};

inline cplx i_power(int p) {
    switch (p & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// lambda: Z/(N-1) -> unit circle. mu: powers of i, symmetric with the chord
// condition mu(k,k+j) = mu(k,k-j). kappa: symmetric signs.
struct ParameterSet {
    std::vector<cplx> lambda;
    SquareTable<std::uint8_t> mu_pow;
    SquareTable<std::int8_t> kappa;
};

struct XTable {
    SquareTable<cplx> x;  // x(i,j), i != j; diagonal unused (kept at 1)
};

struct YZTables {
    SquareTable<cplx> y;            // y(k,j) = x(j, 2k-j), y(i,i) = 1
    SquareTable<std::uint8_t> z_pow;  // z(k,j) = kappa(2k-j,j) mu(k,j) as a power of i; z(i,i) = 1

    cplx z(int k, int j) const { return i_power(z_pow.at(k, j)); }
};

inline constexpr double kLambdaInputTol = 1e-9;

// Snaps a nearly-unit complex number onto the circle; rejects anything
// farther than kLambdaInputTol so file round-trips cannot accumulate drift.
inline cplx normalize_phase(cplx value) {
    const double mod = std::abs(value);
    if (std::abs(mod - 1.0) > kLambdaInputTol)
        throw NonUnitModulus("lambda entry has modulus " + std::to_string(mod));
    return value / mod;
}

inline ParameterSet all_ones_parameters(const PointSet& ps) {
    ParameterSet p;
    p.lambda.assign(ps.ring_size, cplx{1.0, 0.0});
    p.mu_pow = SquareTable<std::uint8_t>(ps.ring_size, 0);
    p.kappa = SquareTable<std::int8_t>(ps.ring_size, 1);
    return p;
}

inline int circular_distance(const PointSet& ps, int i, int j) {
    int d = ring_mod(ps, i - j);
    return std::min(d, ps.ring_size - d);
}

namespace detail {
// mt19937_64 output mapped to [0,1) the same way on every platform.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace detail

// lambda uniform on the circle; mu one fourth-root per chord-length class
// (the chord condition holds by construction); kappa an arbitrary symmetric
// sign table. Deterministic for a fixed seed.
inline ParameterSet random_parameters(const PointSet& ps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ParameterSet p;
    p.lambda.reserve(ps.ring_size);
    for (int k = 0; k < ps.ring_size; ++k) {
        const double angle = 2.0 * std::numbers::pi * detail::uniform01(rng);
        p.lambda.push_back(cplx{std::cos(angle), std::sin(angle)});
    }
    p.mu_pow = SquareTable<std::uint8_t>(ps.ring_size, 0);
    const int max_dist = ps.ring_size / 2;
    std::vector<std::uint8_t> class_pow(max_dist + 1, 0);
    for (int d = 1; d <= max_dist; ++d) class_pow[d] = static_cast<std::uint8_t>(rng() & 3);
    for (int i = 0; i < ps.ring_size; ++i)
        for (int j = 0; j < ps.ring_size; ++j)
            if (i != j) p.mu_pow.at(i, j) = class_pow[circular_distance(ps, i, j)];
    p.kappa = SquareTable<std::int8_t>(ps.ring_size, 1);
    for (int i = 0; i < ps.ring_size; ++i)
        for (int j = i + 1; j < ps.ring_size; ++j) {
            const std::int8_t s = (rng() & 1) ? -1 : 1;
            p.kappa.at(i, j) = s;
            p.kappa.at(j, i) = s;
        }
    return p;
}

inline int z_power(const PointSet& ps, const ParameterSet& p, int k, int j) {
    if (k == j) return 0;
    const int kap_i = ring_mod(ps, 2LL * k - j);
    return (p.mu_pow.at(k, j) + (p.kappa.at(kap_i, j) < 0 ? 2 : 0)) & 3;
}

// Checks, in order: lambda on the circle; mu a symmetric fourth-root table
// satisfying the chord condition; kappa a symmetric sign table; then the
// derived-z conditions (fourth power, squared symmetry, global product) and
// the cocycle identity zeta(p,q) zeta(q,r) zeta(r,p) = 1 with
// zeta(i,j) = z^2(i,j) z^2(j,i). Never throws: all violations are reported.
inline ValidationReport validate_parameters(const PointSet& ps, const ParameterSet& p) {
    ValidationReport report;
    const int n = ps.ring_size;

    if (static_cast<int>(p.lambda.size()) != n)
        report.fail("lambda-size", {static_cast<int>(p.lambda.size())}, n);
    else
        for (int k = 0; k < n; ++k) {
            const double dev = std::abs(std::abs(p.lambda[k]) - 1.0);
            if (dev > 1e-12) report.fail("lambda-modulus", {k}, dev);
        }

    if (p.mu_pow.n != n || p.kappa.n != n) {
        report.fail("table-size", {p.mu_pow.n, p.kappa.n}, n);
        return report;
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (p.mu_pow.at(i, j) > 3) report.fail("mu-range", {i, j}, p.mu_pow.at(i, j));
            if (p.kappa.at(i, j) != 1 && p.kappa.at(i, j) != -1)
                report.fail("kappa-range", {i, j}, p.kappa.at(i, j));
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (p.mu_pow.at(i, j) != p.mu_pow.at(j, i))
                report.fail("mu-symmetry", {i, j}, p.mu_pow.at(i, j) - p.mu_pow.at(j, i));
            if (p.kappa.at(i, j) != p.kappa.at(j, i))
                report.fail("kappa-symmetry", {i, j}, p.kappa.at(i, j) - p.kappa.at(j, i));
        }
    for (int k = 0; k < n; ++k)
        for (int j = 1; j <= n / 2; ++j) {
            const int plus = ring_mod(ps, k + j);
            const int minus = ring_mod(ps, k - j);
            if (p.mu_pow.at(k, plus) != p.mu_pow.at(k, minus))
                report.fail("mu-chord", {k, j}, p.mu_pow.at(k, plus) - p.mu_pow.at(k, minus));
        }
    if (!report.passed) return report;

    SquareTable<std::uint8_t> zp(n, 0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) zp.at(k, j) = static_cast<std::uint8_t>(z_power(ps, p, k, j));

    // z^4 = 1 is exact under the power-of-i encoding; asserted regardless.
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            if (zp.at(k, j) > 3) report.fail("z-fourth-power", {k, j}, zp.at(k, j));

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (((zp.at(i, j) ^ zp.at(j, i)) & 1) != 0)
                report.fail("z-square-symmetry", {i, j}, zp.at(i, j) - zp.at(j, i));

    // Product over ordered pairs whose difference has an odd representative.
    int forward = 0, backward = 0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            if (ring_mod(ps, j - k) % 2 == 1) {
                forward = (forward + zp.at(k, j)) & 3;
                backward = (backward + zp.at(j, k)) & 3;
            }
        }
    if (forward != backward) report.fail("z-product", {}, forward - backward);

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const int total = 2 * (zp.at(a, b) + zp.at(b, a) + zp.at(b, c) + zp.at(c, b) +
                                       zp.at(c, a) + zp.at(a, c));
                if ((total & 3) != 0) report.fail("zeta-cocycle", {a, b, c}, total & 3);
            }

    return report;
}

// x_{i,j} = kappa(i,j) lambda((i+j)/2) mu((i+j)/2, j). Symmetry in (i,j) is
// guaranteed by kappa's symmetry plus mu's chord condition; it is asserted,
// not assumed, so an invalid table that slipped past construction is caught.
inline XTable derive_x(const PointSet& ps, const ParameterSet& p) {
    const int n = ps.ring_size;
    if (static_cast<int>(p.lambda.size()) != n || p.mu_pow.n != n || p.kappa.n != n)
        throw InvalidInput("derive_x: parameter tables do not match the point set");
    XTable t;
    t.x = SquareTable<cplx>(n, cplx{1.0, 0.0});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int mid = half(ps, ring_mod(ps, i + j));
            t.x.at(i, j) = static_cast<double>(p.kappa.at(i, j)) * p.lambda[mid] *
                           i_power(p.mu_pow.at(mid, j));
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(t.x.at(i, j) - t.x.at(j, i)) > 1e-12)
                throw SymmetryViolation("x table asymmetric at (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
    return t;
}

inline YZTables derive_yz(const PointSet& ps, const ParameterSet& p, const XTable& xt) {
    const int n = ps.ring_size;
    YZTables t;
    t.y = SquareTable<cplx>(n, cplx{1.0, 0.0});
    t.z_pow = SquareTable<std::uint8_t>(n, 0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            if (k == j) continue;
            t.y.at(k, j) = xt.x.at(j, ring_mod(ps, 2LL * k - j));
            t.z_pow.at(k, j) = static_cast<std::uint8_t>(z_power(ps, p, k, j));
        }
    return t;
}

}  // namespace rayconfig
