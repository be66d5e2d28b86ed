#pragma once

// Ray construction in (C^2)^{(N-1)} and the coefficient system behind the
// joint family F.
//
// Conventions. The complete graph on V carries edge labels: the edge {i,j}
// inside the ring gets label i+j, the edge {*,k} gets label 2k (mod N-1);
// every vertex then sees each label exactly once. Tensor slot s in
// {0,...,N-2} holds the 2-dimensional factor attached to the edge labeled s,
// and slot s corresponds to bit s of a dense amplitude index. Inner products
// are linear in the second argument.
//
// Each edge {i,j} couples two qubit bases through the unitary
//   u[i,j] = (1/sqrt 2) [[1, x_{i,j}], [x*_{i,j}, -1]],
// with u[i,j][alpha][beta] = (psi[{i,j}]_beta, phi[(i+j)/2]_alpha).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "rayconfig/common.hpp"
#include "rayconfig/indexset.hpp"
#include "rayconfig/params.hpp"

namespace rayconfig {

struct UMatrix {
    std::array<std::array<cplx, 2>, 2> m{};  // m[alpha][beta]
};

inline UMatrix build_u(cplx x) {
    const double mod = std::abs(x);
    if (std::abs(mod - 1.0) > 1e-9)
        throw NonUnitModulus("u-matrix parameter has modulus " + std::to_string(mod));
    x /= mod;
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    UMatrix u;
    u.m[0][0] = inv_sqrt2;
    u.m[0][1] = inv_sqrt2 * x;
    u.m[1][0] = inv_sqrt2 * std::conj(x);
    u.m[1][1] = -inv_sqrt2;
    return u;
}

inline double unitarity_defect(const UMatrix& u) {
    double worst = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            cplx dot = 0.0;
            for (int c = 0; c < 2; ++c) dot += u.m[a][c] * std::conj(u.m[b][c]);
            worst = std::max(worst, std::abs(dot - (a == b ? cplx{1.0} : cplx{0.0})));
        }
    return worst;
}

// One orthonormal pair in C^2; vec[index][component].
struct BasisPair {
    std::array<std::array<cplx, 2>, 2> vec{};
};

inline BasisPair standard_basis_pair() {
    BasisPair b;
    b.vec[0] = {cplx{1.0}, cplx{0.0}};
    b.vec[1] = {cplx{0.0}, cplx{1.0}};
    return b;
}

inline double orthonormality_defect(const BasisPair& b) {
    double worst = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) {
            cplx dot = std::conj(b.vec[a][0]) * b.vec[c][0] + std::conj(b.vec[a][1]) * b.vec[c][1];
            worst = std::max(worst, std::abs(dot - (a == c ? cplx{1.0} : cplx{0.0})));
        }
    return worst;
}

// phi bases per ring point, psi bases per edge (derived from the u-matrices),
// and the u table itself. The factored inner-product path only ever touches u.
struct BasisFamily {
    int ring = 0;
    std::vector<BasisPair> phi;     // phi[k]
    SquareTable<UMatrix> u;         // u.at(i,j), i != j; u(i,j) == u(j,i)
    SquareTable<BasisPair> psi;     // psi.at(i,j) for the edge {i,j}
};

inline BasisFamily make_basis_family(const PointSet& ps, const XTable& xt,
                                     std::vector<BasisPair> phi = {}) {
    const int n = ps.ring_size;
    BasisFamily bf;
    bf.ring = n;
    if (phi.empty()) {
        bf.phi.assign(n, standard_basis_pair());
    } else {
        if (static_cast<int>(phi.size()) != n)
            throw InvalidInput("basis family must supply one pair per ring point");
        for (int k = 0; k < n; ++k)
            if (orthonormality_defect(phi[k]) > 1e-9)
                throw InvalidInput("phi basis " + std::to_string(k) + " is not orthonormal");
        bf.phi = std::move(phi);
    }
    bf.u = SquareTable<UMatrix>(n);
    bf.psi = SquareTable<BasisPair>(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const UMatrix u = build_u(xt.x.at(i, j));
            const int mid = half(ps, ring_mod(ps, i + j));
            // psi_beta = sum_alpha conj(u[alpha][beta]) phi[mid]_alpha
            BasisPair psi;
            for (int beta = 0; beta < 2; ++beta)
                for (int comp = 0; comp < 2; ++comp)
                    psi.vec[beta][comp] = std::conj(u.m[0][beta]) * bf.phi[mid].vec[0][comp] +
                                          std::conj(u.m[1][beta]) * bf.phi[mid].vec[1][comp];
            bf.u.at(i, j) = u;
            bf.u.at(j, i) = u;
            bf.psi.at(i, j) = psi;
            bf.psi.at(j, i) = psi;
        }
    return bf;
}

// ---------------------------------------------------------------------------
// Dense rays. Built only for N <= 8 (dimension <= 128); the factored path
// below has no such limit.

struct DenseRay {
    RayLabel label;
    std::vector<cplx> amp;
};

inline constexpr int kDenseMaxPoints = 8;

namespace detail {

inline void require_dense(const PointSet& ps) {
    if (ps.n_points > kDenseMaxPoints)
        throw DensePathUnavailable("dense rays are limited to N <= " +
                                   std::to_string(kDenseMaxPoints));
}

// amp[b] = prod_s factors[s][bit_s(b)]
inline std::vector<cplx> product_vector(const std::vector<std::array<cplx, 2>>& factors) {
    const int slots = static_cast<int>(factors.size());
    std::vector<cplx> amp(std::size_t{1} << slots);
    for (std::size_t b = 0; b < amp.size(); ++b) {
        cplx v = 1.0;
        for (int s = 0; s < slots; ++s) v *= factors[s][(b >> s) & 1];
        amp[b] = v;
    }
    return amp;
}

}  // namespace detail

inline cplx inner_product(const DenseRay& a, const DenseRay& b) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) acc += std::conj(a.amp[i]) * b.amp[i];
    return acc;
}

// Psi*_rho: phi[k]_{rho(k)} in slot 2k for every ring point k.
inline DenseRay build_psi_star(const PointSet& ps, const BasisFamily& bf, ParityFunction rho) {
    detail::require_dense(ps);
    if (rho.at(ps.star_index()) != 0 || (rho.bits & ~ps.all_mask()) != 0)
        throw LabelMembershipError("psi-star label must satisfy rho(*) = 0");
    std::vector<std::array<cplx, 2>> factors(ps.ring_size);
    for (int k = 0; k < ps.ring_size; ++k) {
        const int slot = ring_mod(ps, 2LL * k);
        factors[slot] = {bf.phi[k].vec[rho.at(k)][0], bf.phi[k].vec[rho.at(k)][1]};
    }
    RayLabel label{GroupKind::Singleton, ps.star_index(), rho};
    return {label, detail::product_vector(factors)};
}

// Psi^l_sigma: phi[l]_{sigma(*)} in slot 2l, psi[{l,j}]_{sigma(j)} in slot l+j.
// The slot labels {2l} u {l+j : j != l} cover {0,...,N-2} exactly once.
inline DenseRay build_psi_l(const PointSet& ps, const BasisFamily& bf, int l, ParityFunction sigma) {
    detail::require_dense(ps);
    if (l < 0 || l >= ps.ring_size) throw InvalidInput("psi-l vertex out of range");
    if (sigma.at(l) != 0 || (sigma.bits & ~ps.all_mask()) != 0)
        throw LabelMembershipError("psi-l label must satisfy sigma(l) = 0");
    std::vector<std::array<cplx, 2>> factors(ps.ring_size);
    std::vector<bool> seen(ps.ring_size, false);
    const int star_bit = sigma.at(ps.star_index());
    const int slot0 = ring_mod(ps, 2LL * l);
    factors[slot0] = {bf.phi[l].vec[star_bit][0], bf.phi[l].vec[star_bit][1]};
    seen[slot0] = true;
    for (int j = 0; j < ps.ring_size; ++j) {
        if (j == l) continue;
        const int slot = ring_mod(ps, static_cast<long long>(l) + j);
        if (seen[slot]) throw std::logic_error("edge numbering produced a slot collision");
        seen[slot] = true;
        const BasisPair& pair = bf.psi.at(l, j);
        factors[slot] = {pair.vec[sigma.at(j)][0], pair.vec[sigma.at(j)][1]};
    }
    RayLabel label{GroupKind::Singleton, l, sigma};
    return {label, detail::product_vector(factors)};
}

// ---------------------------------------------------------------------------
// Coefficients.

// Sign solution for the undeformed family: 0 on parity mismatch, otherwise
// (-1)^(m/2) with m the number of ring points where xi and pi differ.
inline int sign_coeff(const PointSet& ps, mask_t pi_restriction, mask_t xi_restriction) {
    const int m = std::popcount((pi_restriction ^ xi_restriction) & ps.ring_mask());
    if (m & 1) return 0;
    return ((m >> 1) & 1) ? -1 : 1;
}

// A numbering of the zero set of xi: a marked point alpha0 plus s pairs
// (alpha_{-m}, alpha_{+m}). The coefficient formula is invariant under every
// admissible choice; the canonical one sorts ascending and pairs in order.
struct AlphaNumbering {
    int alpha0 = 0;
    std::vector<std::pair<int, int>> pairs;  // (minus, plus)
};

inline std::vector<int> zero_points(const PointSet& ps, mask_t xi_restriction) {
    std::vector<int> alpha;
    for (int k = 0; k < ps.ring_size; ++k)
        if (((xi_restriction >> k) & 1u) == 0) alpha.push_back(k);
    return alpha;
}

inline AlphaNumbering canonical_numbering(const std::vector<int>& alpha_sorted) {
    AlphaNumbering num;
    num.alpha0 = alpha_sorted.front();
    for (std::size_t i = 1; i + 1 < alpha_sorted.size(); i += 2)
        num.pairs.emplace_back(alpha_sorted[i], alpha_sorted[i + 1]);
    return num;
}

namespace detail {

// Product formula for the base coefficient A(xi), evaluated with the y table
// conjugated at every ring point selected by conj_mask (the substitution that
// turns the base solution into the one for a general pi).
inline cplx eval_coeff(const PointSet& ps, const YZTables& yz, mask_t xi_restriction,
                       mask_t conj_mask, const AlphaNumbering& num) {
    const auto y = [&](int k, int j) -> cplx {
        const cplx v = yz.y.at(k, j);
        return ((conj_mask >> k) & 1u) ? std::conj(v) : v;
    };
    const auto y2 = [&](int k, int j) -> cplx {
        const cplx v = y(k, j);
        return v * v;
    };

    std::vector<int> alpha = zero_points(ps, xi_restriction);
    std::vector<int> beta;
    for (int k = 0; k < ps.ring_size; ++k)
        if ((xi_restriction >> k) & 1u) beta.push_back(k);
    const int s = static_cast<int>(num.pairs.size());

    cplx acc = (s & 1) ? cplx{1.0} : cplx{-1.0};  // (-1)^(s+1)
    for (int m = 0; m < s; ++m) {
        const auto [lo_m, hi_m] = num.pairs[m];
        for (int n = m + 1; n < s; ++n) {
            const auto [lo_n, hi_n] = num.pairs[n];
            acc *= y2(hi_n, hi_m) * y2(lo_n, hi_m) / (y2(hi_n, lo_m) * y2(lo_n, lo_m));
        }
        for (int k : alpha) acc *= y(k, lo_m) / y(k, hi_m);
        for (int k : beta) acc *= y(k, hi_m) / y(k, lo_m);
        acc /= y2(hi_m, lo_m);
    }
    for (int k = 0; k < ps.ring_size; ++k) acc *= y(k, num.alpha0);
    return acc;
}

}  // namespace detail

// Base coefficient A(xi) for even-parity xi, canonical numbering, A(0) = 1.
inline cplx coeff_base_numbered(const PointSet& ps, const YZTables& yz, mask_t xi_restriction,
                                const AlphaNumbering& num, mask_t conj_mask = 0) {
    if (parity(xi_restriction & ps.ring_mask()) != 0)
        throw LabelMembershipError("base coefficient requires even parity");
    return detail::eval_coeff(ps, yz, xi_restriction & ps.ring_mask(), conj_mask, num);
}

inline cplx coeff_base(const PointSet& ps, const YZTables& yz, mask_t xi_restriction) {
    if (parity(xi_restriction & ps.ring_mask()) != 0)
        throw LabelMembershipError("base coefficient requires even parity");
    const mask_t xi = xi_restriction & ps.ring_mask();
    return detail::eval_coeff(ps, yz, xi, 0, canonical_numbering(zero_points(ps, xi)));
}

// General coefficient A_pi(xi): zero across parity blocks, otherwise the base
// coefficient at xi + pi with the y table conjugated where pi is 1.
inline cplx coeff_value(const PointSet& ps, const YZTables& yz, mask_t pi_restriction,
                        mask_t xi_restriction) {
    const mask_t pi = pi_restriction & ps.ring_mask();
    const mask_t xi = xi_restriction & ps.ring_mask();
    if (parity(pi) != parity(xi)) return 0.0;
    const mask_t shifted = xi ^ pi;
    return detail::eval_coeff(ps, yz, shifted, pi, canonical_numbering(zero_points(ps, shifted)));
}

// Dense table of A_pi(xi) over both parity blocks, indexed by restriction masks.
struct CoefficientTable {
    int ring = 0;
    std::vector<cplx> a;  // (pi << ring) | xi

    cplx at(mask_t pi, mask_t xi) const {
        return a[(static_cast<std::size_t>(pi) << ring) | xi];
    }
};

inline CoefficientTable build_coeff_table(const PointSet& ps, const YZTables& yz) {
    CoefficientTable t;
    t.ring = ps.ring_size;
    const std::size_t block = std::size_t{1} << ps.ring_size;
    t.a.assign(block * block, cplx{0.0});
    for (mask_t pi = 0; pi < block; ++pi)
        for (mask_t xi = 0; xi < block; ++xi)
            if (parity(pi) == parity(xi))
                t.a[(static_cast<std::size_t>(pi) << t.ring) | xi] = coeff_value(ps, yz, pi, xi);
    return t;
}

inline CoefficientTable build_sign_coeff_table(const PointSet& ps) {
    CoefficientTable t;
    t.ring = ps.ring_size;
    const std::size_t block = std::size_t{1} << ps.ring_size;
    t.a.assign(block * block, cplx{0.0});
    for (mask_t pi = 0; pi < block; ++pi)
        for (mask_t xi = 0; xi < block; ++xi)
            t.a[(static_cast<std::size_t>(pi) << t.ring) | xi] =
                static_cast<double>(sign_coeff(ps, pi, xi));
    return t;
}

// The two-term recurrence every coefficient table must satisfy: for each ring
// point l, each pi, and each admissible xi,
//   (prod_{k != l, (xi+pi)(k)=0} y'(k,l)) A_pi(xi)
//     + (-1)^{(xi+pi)(l)} (prod_{k != l, (xi+pi)(k)=1} y'(k,l)) A_pi(xi^l) = 0,
// where y' carries the pi-conjugation and xi^l flips every ring bit except l.
inline ValidationReport verify_reduced_system(const PointSet& ps, const YZTables& yz,
                                              const CoefficientTable& table,
                                              double tol = 1e-10) {
    ValidationReport report;
    const mask_t block = static_cast<mask_t>(std::size_t{1} << ps.ring_size);
    for (int l = 0; l < ps.ring_size && report.passed; ++l) {
        const mask_t flip = ps.ring_mask() & ~(mask_t{1} << l);
        for (mask_t pi = 0; pi < block && report.passed; ++pi) {
            for (mask_t xi = 0; xi < block; ++xi) {
                if (parity(xi) != parity(pi)) continue;
                const mask_t shifted = xi ^ pi;
                cplx prod0 = 1.0, prod1 = 1.0;
                for (int k = 0; k < ps.ring_size; ++k) {
                    if (k == l) continue;
                    cplx v = yz.y.at(k, l);
                    if ((pi >> k) & 1u) v = std::conj(v);
                    if ((shifted >> k) & 1u)
                        prod1 *= v;
                    else
                        prod0 *= v;
                }
                const double sign = ((shifted >> l) & 1u) ? -1.0 : 1.0;
                const cplx residual = prod0 * table.at(pi, xi) + sign * prod1 * table.at(pi, xi ^ flip);
                if (std::abs(residual) > tol) {
                    report.fail("reduced-system", {l, static_cast<int>(pi), static_cast<int>(xi)},
                                std::abs(residual));
                    break;
                }
            }
        }
    }
    return report;
}

inline ValidationReport verify_reduced_system(const PointSet& ps, const ParameterSet& params,
                                              const CoefficientTable& table,
                                              double tol = 1e-10) {
    return verify_reduced_system(ps, derive_yz(ps, params, derive_x(ps, params)), table, tol);
}

// Per parity block, the Gram matrix of coefficient rows must equal
// 2^(N-2) times the identity.
inline ValidationReport check_unitarity(const PointSet& ps, const CoefficientTable& table,
                                        double tol = 1e-9) {
    ValidationReport report;
    const mask_t block = static_cast<mask_t>(std::size_t{1} << ps.ring_size);
    const double target = static_cast<double>(std::size_t{1} << (ps.ring_size - 1));
    for (int p = 0; p < 2; ++p) {
        double worst_off = 0.0, worst_diag = 0.0;
        int worst_pi = 0, worst_pi2 = 0;
        for (mask_t pi = 0; pi < block; ++pi) {
            if (parity(pi) != p) continue;
            for (mask_t pi2 = pi; pi2 < block; ++pi2) {
                if (parity(pi2) != p) continue;
                cplx gram = 0.0;
                for (mask_t xi = 0; xi < block; ++xi) {
                    if (parity(xi) != p) continue;
                    gram += std::conj(table.at(pi, xi)) * table.at(pi2, xi);
                }
                const double dev = std::abs(gram - (pi == pi2 ? cplx{target} : cplx{0.0}));
                double& worst = (pi == pi2) ? worst_diag : worst_off;
                if (dev > worst) {
                    worst = dev;
                    worst_pi = static_cast<int>(pi);
                    worst_pi2 = static_cast<int>(pi2);
                }
            }
        }
        if (worst_off > tol || worst_diag > tol)
            report.fail("unitarity", {p, worst_pi, worst_pi2}, std::max(worst_off, worst_diag));
    }
    return report;
}

// F_pi: sum over xi of A_pi(xi) placing phi[k]_{xi(k)} in slot 2k, scaled to
// unit norm by 2^{-(N-2)/2}.
inline DenseRay build_f(const PointSet& ps, const BasisFamily& bf, const CoefficientTable& table,
                        ParityFunction pi) {
    detail::require_dense(ps);
    if (parity(pi.bits & ps.all_mask()) != 1 || (pi.bits & ~ps.all_mask()) != 0)
        throw LabelMembershipError("F label must have odd total parity");
    const mask_t pi_r = pi.bits & ps.ring_mask();
    const int p = parity(pi_r);
    const mask_t block = static_cast<mask_t>(std::size_t{1} << ps.ring_size);
    std::vector<cplx> amp(ps.dimension(), cplx{0.0});
    std::vector<std::array<cplx, 2>> factors(ps.ring_size);
    for (mask_t xi = 0; xi < block; ++xi) {
        if (parity(xi) != p) continue;
        const cplx coeff = table.at(pi_r, xi);
        for (int k = 0; k < ps.ring_size; ++k) {
            const int slot = ring_mod(ps, 2LL * k);
            const int idx = static_cast<int>((xi >> k) & 1u);
            factors[slot] = {bf.phi[k].vec[idx][0], bf.phi[k].vec[idx][1]};
        }
        const std::vector<cplx> term = detail::product_vector(factors);
        for (std::size_t b = 0; b < amp.size(); ++b) amp[b] += coeff * term[b];
    }
    const double scale = std::pow(2.0, -0.5 * (ps.n_points - 2));
    double norm2 = 0.0;
    for (cplx& v : amp) {
        v *= scale;
        norm2 += std::norm(v);
    }
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw InvalidInput("coefficient table does not yield a unit ray");
    RayLabel label{GroupKind::Full, 0, pi};
    return {label, std::move(amp)};
}

// ---------------------------------------------------------------------------
// Factored inner products: every pairing reduces to u-matrix elements,
// Kronecker deltas, and coefficient-table sums; no 2^(N-1)-dimensional
// vector is ever materialized.

namespace detail {

enum class Family : std::uint8_t { Star, Vertex, Joint };

inline Family family_of(const PointSet& ps, const RayLabel& label) {
    if (label.kind == GroupKind::Full) return Family::Joint;
    return label.vertex == ps.star_index() ? Family::Star : Family::Vertex;
}

inline cplx ip_star_star(const PointSet& ps, const RayLabel& a, const RayLabel& b) {
    return (a.phi.bits & ps.ring_mask()) == (b.phi.bits & ps.ring_mask()) ? 1.0 : 0.0;
}

inline cplx ip_star_vertex(const PointSet& ps, const BasisFamily& bf, const RayLabel& a,
                           const RayLabel& b) {
    const int l = b.vertex;
    if (a.phi.at(l) != b.phi.at(ps.star_index())) return 0.0;
    cplx acc = 1.0;
    for (int k = 0; k < ps.ring_size; ++k) {
        if (k == l) continue;
        const int j = ring_mod(ps, 2LL * k - l);
        acc *= std::conj(bf.u.at(l, j).m[a.phi.at(k)][b.phi.at(j)]);
    }
    return acc;
}

inline cplx ip_vertex_vertex(const PointSet& ps, const BasisFamily& bf, const RayLabel& a,
                             const RayLabel& b) {
    const int l = a.vertex, l2 = b.vertex;
    if (l == l2) return a.phi == b.phi ? 1.0 : 0.0;
    const int star = ps.star_index();
    cplx acc = 1.0;
    // slot 2l: phi[l] against psi[{l2, 2l-l2}]
    {
        const int j = ring_mod(ps, 2LL * l - l2);
        acc *= std::conj(bf.u.at(l2, j).m[a.phi.at(star)][b.phi.at(j)]);
    }
    // slot 2l2: psi[{l, 2l2-l}] against phi[l2]
    {
        const int j = ring_mod(ps, 2LL * l2 - l);
        acc *= bf.u.at(l, j).m[b.phi.at(star)][a.phi.at(j)];
    }
    // remaining slots: two psi factors over edges sharing a midpoint
    for (int k = 0; k < ps.ring_size; ++k) {
        if (k == l || k == l2) continue;
        const int ja = ring_mod(ps, 2LL * k - l);
        const int jb = ring_mod(ps, 2LL * k - l2);
        const UMatrix& ua = bf.u.at(l, ja);
        const UMatrix& ub = bf.u.at(l2, jb);
        cplx overlap = 0.0;
        for (int al = 0; al < 2; ++al)
            overlap += ua.m[al][a.phi.at(ja)] * std::conj(ub.m[al][b.phi.at(jb)]);
        acc *= overlap;
    }
    return acc;
}

inline cplx ip_star_joint(const PointSet& ps, const CoefficientTable& table, const RayLabel& a,
                          const RayLabel& b) {
    const double scale = std::pow(2.0, -0.5 * (ps.n_points - 2));
    return scale * table.at(b.phi.bits & ps.ring_mask(), a.phi.bits & ps.ring_mask());
}

inline cplx ip_vertex_joint(const PointSet& ps, const BasisFamily& bf,
                            const CoefficientTable& table, const RayLabel& a, const RayLabel& b) {
    const int l = a.vertex;
    const mask_t pi = b.phi.bits & ps.ring_mask();
    const int p = parity(pi);
    const int star_bit = a.phi.at(ps.star_index());
    const mask_t block = static_cast<mask_t>(std::size_t{1} << ps.ring_size);
    cplx acc = 0.0;
    for (mask_t xi = 0; xi < block; ++xi) {
        if (parity(xi) != p) continue;
        if (static_cast<int>((xi >> l) & 1u) != star_bit) continue;
        cplx term = table.at(pi, xi);
        for (int k = 0; k < ps.ring_size; ++k) {
            if (k == l) continue;
            const int j = ring_mod(ps, 2LL * k - l);
            term *= bf.u.at(l, j).m[(xi >> k) & 1u][a.phi.at(j)];
        }
        acc += term;
    }
    return acc * std::pow(2.0, -0.5 * (ps.n_points - 2));
}

inline cplx ip_joint_joint(const PointSet& ps, const CoefficientTable& table, const RayLabel& a,
                           const RayLabel& b) {
    const mask_t pa = a.phi.bits & ps.ring_mask();
    const mask_t pb = b.phi.bits & ps.ring_mask();
    const int p = parity(pa);
    if (p != parity(pb)) return 0.0;
    const mask_t block = static_cast<mask_t>(std::size_t{1} << ps.ring_size);
    cplx acc = 0.0;
    for (mask_t xi = 0; xi < block; ++xi)
        if (parity(xi) == p) acc += std::conj(table.at(pa, xi)) * table.at(pb, xi);
    return acc * std::pow(2.0, -(ps.n_points - 2));
}

}  // namespace detail

inline cplx inner_product_factored(const PointSet& ps, const BasisFamily& bf,
                                   const CoefficientTable& table, const RayLabel& a,
                                   const RayLabel& b) {
    using detail::Family;
    const Family fa = detail::family_of(ps, a);
    const Family fb = detail::family_of(ps, b);
    if (static_cast<int>(fa) > static_cast<int>(fb))
        return std::conj(inner_product_factored(ps, bf, table, b, a));
    if (fa == Family::Star && fb == Family::Star) return detail::ip_star_star(ps, a, b);
    if (fa == Family::Star && fb == Family::Vertex) return detail::ip_star_vertex(ps, bf, a, b);
    if (fa == Family::Vertex && fb == Family::Vertex) return detail::ip_vertex_vertex(ps, bf, a, b);
    if (fa == Family::Star && fb == Family::Joint) return detail::ip_star_joint(ps, table, a, b);
    if (fa == Family::Vertex && fb == Family::Joint)
        return detail::ip_vertex_joint(ps, bf, table, a, b);
    return detail::ip_joint_joint(ps, table, a, b);
}

}  // namespace rayconfig
