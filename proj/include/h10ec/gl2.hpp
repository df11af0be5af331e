#pragma once

// Finite Galois-image computations over Z/lZ: full GL2 enumeration, the
// 16-element mod-3 image of the CM curve y^2 = x^3 - x, the eigenvalue
// condition alpha^f(g) != 1 behind the rank-stability prime sets, and the
// exact densities they certify.

#include <array>
#include <map>

#include "arith.hpp"
#include "modpoly.hpp"

namespace h10ec {
namespace gl2 {

struct GL2Elt {
    i64 a, b, c, d;  // row-major entries mod l
    i64 l;

    i64 det() const { return mod_pos(a * d - b * c, l); }
    i64 trace() const { return mod_pos(a + d, l); }

    GL2Elt mul(const GL2Elt& o) const {
        if (l != o.l) throw Error("GL2Elt: modulus mismatch");
        return {mod_pos(a * o.a + b * o.c, l), mod_pos(a * o.b + b * o.d, l),
                mod_pos(c * o.a + d * o.c, l), mod_pos(c * o.b + d * o.d, l), l};
    }

    bool operator==(const GL2Elt& o) const { return a == o.a && b == o.b && c == o.c && d == o.d && l == o.l; }
    bool operator<(const GL2Elt& o) const {
        return std::array<i64, 4>{a, b, c, d} < std::array<i64, 4>{o.a, o.b, o.c, o.d};
    }
};

struct ImageSubgroup {
    i64 l;
    std::vector<GL2Elt> elements;
};

/// All invertible 2x2 matrices mod l; cardinality l(l-1)^2(l+1). l <= 7.
inline ImageSubgroup enumerate_gl2(i64 l) {
    if (l < 2 || l > 7 || !is_prime_u64((u64)l)) throw Error("enumerate_gl2: l must be a prime in [2,7]");
    ImageSubgroup g{l, {}};
    for (i64 a = 0; a < l; ++a)
        for (i64 b = 0; b < l; ++b)
            for (i64 c = 0; c < l; ++c)
                for (i64 d = 0; d < l; ++d)
                    if (mod_pos(a * d - b * c, l) != 0) g.elements.push_back({a, b, c, d, l});
    i64 expect = l * (l - 1) * (l - 1) * (l + 1);
    if ((i64)g.elements.size() != expect) throw Error("enumerate_gl2: cardinality mismatch");
    return g;
}

inline void verify_closed(const ImageSubgroup& g) {
    auto contains = [&](const GL2Elt& x) {
        for (auto& e : g.elements)
            if (e == x) return true;
        return false;
    };
    if (!contains({1, 0, 0, 1, g.l})) throw Error("image: missing identity");
    for (auto& x : g.elements)
        for (auto& y : g.elements)
            if (!contains(x.mul(y))) throw Error("image: not closed under multiplication");
}

/// The mod-3 image of the CM congruent-number curve: 16 explicit matrices.
inline ImageSubgroup cm16_image() {
    static const std::array<std::array<i64, 4>, 16> mats = {{
        {1, 0, 0, 1},
        {2, 2, 0, 1},
        {1, 1, 0, 2},
        {2, 0, 2, 1},
        {1, 0, 1, 2},
        {2, 0, 0, 2},
        {2, 2, 2, 1},
        {1, 1, 1, 2},
        {2, 1, 1, 0},
        {1, 2, 2, 0},
        {0, 2, 2, 2},
        {0, 1, 1, 1},
        {0, 2, 1, 0},
        {0, 1, 2, 0},
        {1, 2, 2, 2},
        {2, 1, 1, 1},
    }};
    ImageSubgroup g{3, {}};
    for (auto& m : mats) g.elements.push_back({m[0], m[1], m[2], m[3], 3});
    verify_closed(g);  // closure under multiplication and inverses (finite => subgroup)
    return g;
}

/// Order of det(g) in (Z/lZ)^x.
inline i64 f_of(const GL2Elt& g) {
    i64 det = g.det();
    if (det == 0) throw Error("f_of: singular matrix");
    return mult_order(det, g.l);
}

/// Eigenvalue condition: true iff alpha^{f(g)} != 1 for an eigenvalue alpha
/// of g over the algebraic closure of F_l (equivalently alpha^f + beta^f != 2).
/// Computed in F_l[x]/(charpoly); a repeated root is tested directly.
inline bool in_H(const GL2Elt& g) {
    if (g.l == 2) throw Error("in_H: l must be odd");
    i64 l = g.l;
    i64 t = g.trace(), det = g.det();
    i64 f = f_of(g);
    i64 discr = mod_pos(t * t - 4 * det, l);
    if (discr == 0) {
        i64 root = mod_pos(t * invmod(2, l), l);
        return powmod_u64((u64)root, (u64)f, (u64)l) != 1;
    }
    PolyModRing R(l, Poly{mod_pos(det, l), mod_pos(-t, l), 1});
    return !R.is_one(R.pow(R.x(), f));
}

/// Exact #{g in image : in_H(g)} / #image.
inline Rational density_H(const ImageSubgroup& image) {
    i64 hits = 0;
    for (auto& g : image.elements)
        if (in_H(g)) ++hits;
    return Rational(hits, (i64)image.elements.size());
}

// -------------------------------------------------------- conjugacy classes

struct ConjClass {
    enum class Kind { Split, Nonsemisimple, Central, Irreducible } kind;
    i64 e1 = 0, e2 = 0;       // eigenvalues for Split / the eigenvalue for the rest
    i64 cp_t = 0, cp_d = 0;   // charpoly x^2 - t x + d for Irreducible
};

inline ConjClass classify_conjugacy(const GL2Elt& g) {
    if (g.l == 2) throw Error("classify_conjugacy: l must be odd");
    i64 l = g.l, t = g.trace(), det = g.det();
    i64 discr = mod_pos(t * t - 4 * det, l);
    if (discr == 0) {
        i64 r = mod_pos(t * invmod(2, l), l);
        bool central = (g.b == 0 && g.c == 0 && g.a == g.d);
        return {central ? ConjClass::Kind::Central : ConjClass::Kind::Nonsemisimple, r, r, t, det};
    }
    if (kronecker(discr, l) == 1) {
        i64 s = 0;
        for (i64 x = 0; x < l; ++x)
            if (mod_pos(x * x - discr, l) == 0) {
                s = x;
                break;
            }
        i64 inv2 = invmod(2, l);
        i64 e1 = mod_pos((t + s) * inv2, l), e2 = mod_pos((t - s) * inv2, l);
        if (e1 > e2) std::swap(e1, e2);
        return {ConjClass::Kind::Split, e1, e2, t, det};
    }
    return {ConjClass::Kind::Irreducible, 0, 0, t, det};
}

/// Expected class size inside full GL2(F_l) for each taxonomy kind.
inline i64 conj_class_size(ConjClass::Kind k, i64 l) {
    switch (k) {
        case ConjClass::Kind::Split: return l * (l + 1);
        case ConjClass::Kind::Nonsemisimple: return l * l - 1;
        case ConjClass::Kind::Central: return 1;
        case ConjClass::Kind::Irreducible: return l * l - l;
    }
    return 0;
}

// ---------------------------------------------------------- joint densities

/// Closed form for the density of n-tuples (matching determinant) with at
/// least one coordinate in H, for l = 3: 1 - (3^n + 4^n) / 2^(3n+1).
inline Rational joint_density_closed_form(int n) {
    if (n < 1 || n > 16) throw Error("joint_density_closed_form: n out of range [1,16]");
    i64 den = 1LL << (3 * n + 1);
    i64 p3 = 1, p4 = 1;
    for (int i = 0; i < n; ++i) {
        p3 *= 3;
        p4 *= 4;
    }
    return Rational(den - p3 - p4, den);
}

struct JointCount {
    i128 tuples_matching_det = 0;  // #G
    i128 tuples_hit = 0;           // #H (at least one coordinate in H)
};

/// Brute-force enumeration over n-tuples of GL2(F_3) with equal determinants,
/// counting tuples with some coordinate satisfying in_H. n <= 3.
inline JointCount joint_count_bruteforce(int n) {
    if (n < 1 || n > 3) throw Error("joint_count_bruteforce: n out of range [1,3]");
    auto g = enumerate_gl2(3);
    std::vector<int> dets, hs;
    for (auto& m : g.elements) {
        dets.push_back((int)m.det());
        hs.push_back(in_H(m) ? 1 : 0);
    }
    size_t N = g.elements.size();
    JointCount out;
    if (n == 1) {
        for (size_t i = 0; i < N; ++i) {
            out.tuples_matching_det++;
            if (hs[i]) out.tuples_hit++;
        }
        return out;
    }
    if (n == 2) {
        for (size_t i = 0; i < N; ++i)
            for (size_t j = 0; j < N; ++j) {
                if (dets[i] != dets[j]) continue;
                out.tuples_matching_det++;
                if (hs[i] || hs[j]) out.tuples_hit++;
            }
        return out;
    }
    for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j) {
            if (dets[i] != dets[j]) continue;
            for (size_t k = 0; k < N; ++k) {
                if (dets[i] != dets[k]) continue;
                out.tuples_matching_det++;
                if (hs[i] || hs[j] || hs[k]) out.tuples_hit++;
            }
        }
    return out;
}

/// density_H for n curves with jointly maximal mod-3 image: enumeration for
/// n <= 3, closed form for n <= 16; the two must agree where both apply.
inline Rational density_H_joint_bruteforce(int n, i64 l = 3) {
    if (l != 3) throw Error("density_H_joint_bruteforce: only l = 3 supported");
    if (n >= 1 && n <= 3) {
        auto c = joint_count_bruteforce(n);
        Rational r = Rational::make(c.tuples_hit, c.tuples_matching_det);
        if (r != joint_density_closed_form(n)) throw Error("joint density: enumeration disagrees with closed form");
        return r;
    }
    return joint_density_closed_form(n);
}

// ----------------------------------------------------- theoretical Q sets

struct QDensitySpec {
    enum class Kind { SingleK, SingleKPlus, SingleKMinus, UnionK, UnionKMinus, TwoCurves } kind;
    int n = 1;  // number of quadratic fields for the union variants
};

inline Rational q_density_theoretical(const QDensitySpec& s) {
    using K = QDensitySpec::Kind;
    switch (s.kind) {
        case K::SingleK: return Rational(1, 6);
        case K::SingleKPlus: return Rational(1, 12);
        case K::SingleKMinus: return Rational(1, 12);
        case K::UnionK: {
            if (s.n < 1 || s.n > 62) throw Error("q_density_theoretical: n out of range");
            i64 den = 1LL << s.n;
            return Rational(1, 3) * Rational(den - 1, den);
        }
        case K::UnionKMinus: {
            if (s.n < 1 || s.n > 62) throw Error("q_density_theoretical: n out of range");
            i64 den = 1LL << s.n;
            return Rational(1, 6) * Rational(den - 1, den);
        }
        case K::TwoCurves: return Rational(1, 36);
    }
    throw Error("q_density_theoretical: invalid spec");
}

}  // namespace gl2
}  // namespace h10ec
