#pragma once

// Integral Weierstrass models over Q: invariants, quadratic twists, naive
// point counting mod p, Frobenius trace extensions, and reduction data.

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>

#include "arith.hpp"
#include "modpoly.hpp"

namespace h10ec {

struct CurveQ {
    i64 a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    i128 b2 = 0, b4 = 0, b6 = 0, b8 = 0;
    i128 c4 = 0, c6 = 0;
    i128 disc = 0;
    i128 j_num = 0, j_den = 1;  // lowest terms, j_den > 0
};

inline CurveQ make_curve(i64 a1, i64 a2, i64 a3, i64 a4, i64 a6) {
    CurveQ e;
    e.a1 = a1;
    e.a2 = a2;
    e.a3 = a3;
    e.a4 = a4;
    e.a6 = a6;
    i128 A1 = a1, A2 = a2, A3 = a3, A4 = a4, A6 = a6;
    e.b2 = A1 * A1 + 4 * A2;
    e.b4 = 2 * A4 + A1 * A3;
    e.b6 = A3 * A3 + 4 * A6;
    e.b8 = A1 * A1 * A6 + 4 * A2 * A6 - A1 * A3 * A4 + A2 * A3 * A3 - A4 * A4;
    e.c4 = checked_mul(e.b2, e.b2) - 24 * e.b4;
    e.c6 = -checked_mul(checked_mul(e.b2, e.b2), e.b2) + 36 * checked_mul(e.b2, e.b4) - 216 * e.b6;
    e.disc = -checked_mul(checked_mul(e.b2, e.b2), e.b8) - 8 * checked_mul(checked_mul(e.b4, e.b4), e.b4) -
             27 * checked_mul(e.b6, e.b6) + 9 * checked_mul(checked_mul(e.b2, e.b4), e.b6);
    if (e.disc == 0) throw Error("make_curve: singular model (discriminant 0)");
    // consistency identities
    if (4 * e.b8 != checked_mul(e.b2, e.b6) - checked_mul(e.b4, e.b4)) throw Error("make_curve: b8 identity failed");
    if (checked_mul(checked_mul(e.c4, e.c4), e.c4) - checked_mul(e.c6, e.c6) != 1728 * e.disc)
        throw Error("make_curve: c-invariant identity failed");
    i128 n = checked_mul(checked_mul(e.c4, e.c4), e.c4);
    i128 d = e.disc;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd_i128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    e.j_num = n;
    e.j_den = d;
    return e;
}

/// Quadratic twist by squarefree d != 0 (model y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3,
/// not minimalized; j is preserved exactly and disc keeps its square class).
inline CurveQ quadratic_twist(const CurveQ& e, i64 d) {
    if (d == 0) throw Error("quadratic_twist: d = 0");
    if (!is_squarefree(d)) throw Error("quadratic_twist: d not squarefree");
    i128 A = -27 * checked_mul(e.c4, (i128)d * d);
    i128 B = -54 * checked_mul(e.c6, checked_mul((i128)d * d, (i128)d));
    constexpr i128 HI = (i128)INT64_MAX;
    if (A > HI || A < -HI || B > HI || B < -HI) throw Error("quadratic_twist: coefficients overflow");
    return make_curve(0, 0, 0, (i64)A, (i64)B);
}

/// Coefficients (4, b2, 2 b4, b6) of the 2-division cubic 4x^3+b2x^2+2b4x+b6.
struct TwoDivisionCubic {
    i128 c3, c2, c1, c0;
};

inline TwoDivisionCubic two_division_cubic(const CurveQ& e) {
    return {4, e.b2, 2 * e.b4, e.b6};
}

/// Rational roots of the 2-division cubic (x-coordinates of rational 2-torsion).
/// Via integer roots u of the monic cubic u^3 + b2 u^2 + 8 b4 u + 16 b6 (u = 4x).
inline std::vector<Rational> two_torsion_x_coords(const CurveQ& e) {
    i128 m2 = e.b2, m1 = 8 * e.b4, m0 = 16 * e.b6;
    std::vector<i64> roots;
    auto is_root = [&](i128 u) { return ((u * u * u) + m2 * u * u + m1 * u + m0) == 0; };
    if (m0 == 0) {
        roots.push_back(0);
        // remaining quadratic u^2 + m2 u + m1
        i128 dq = m2 * m2 - 4 * m1;
        i64 s;
        if (dq >= 0 && is_square_i128(dq, &s)) {
            for (i64 sg : {1, -1}) {
                i128 num = -m2 + sg * (i128)s;
                if (num % 2 == 0) roots.push_back((i64)(num / 2));
            }
        }
    } else {
        if (m0 > (i128)INT64_MAX || m0 < -(i128)INT64_MAX) throw Error("two_torsion_x_coords: cubic too large");
        i64 n = m0 < 0 ? (i64)-m0 : (i64)m0;
        std::vector<i64> divs;
        for (i64 i = 1; i * i <= n; ++i) {
            if (n % i == 0) {
                divs.push_back(i);
                divs.push_back(n / i);
            }
        }
        for (i64 d : divs) {
            if (is_root(d)) roots.push_back(d);
            if (is_root(-d)) roots.push_back(-d);
        }
    }
    std::vector<Rational> out;
    for (i64 u : roots) out.push_back(Rational(u, 4));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ------------------------------------------------------------ point counts

constexpr i64 kPointCountCap = 10000000LL;

/// #E(F_p) including the point at infinity. Requires good reduction at p
/// for this model (p does not divide disc) and p <= 1e7.
inline i64 count_points_fp(const CurveQ& e, i64 p) {
    if (p > kPointCountCap) throw Error("count_points_fp: p exceeds cap 1e7");
    if (!is_prime_u64((u64)p)) throw Error("count_points_fp: p not prime");
    if (e.disc % p == 0) throw Error("count_points_fp: bad reduction at p");
    if (p == 2) {
        i64 cnt = 1;
        for (i64 x = 0; x < 2; ++x)
            for (i64 y = 0; y < 2; ++y) {
                i64 lhs = y * y + e.a1 * x * y + e.a3 * y;
                i64 rhs = x * x * x + e.a2 * x * x + e.a4 * x + e.a6;
                if (mod_pos(lhs - rhs, 2) == 0) ++cnt;
            }
        return cnt;
    }
    // #E = p + 1 + sum_x chi(4x^3 + b2 x^2 + 2b4 x + b6)
    std::vector<uint8_t> qr(p, 0);
    for (i64 t = 0; t <= p / 2; ++t) qr[(i64)((i128)t * t % p)] = 1;
    i64 b2 = (i64)mod_pos((i64)(e.b2 % p), p);
    i64 b4 = (i64)mod_pos((i64)((2 * e.b4) % p), p);
    i64 b6 = (i64)mod_pos((i64)(e.b6 % p), p);
    i64 cnt = p + 1;
    for (i64 x = 0; x < p; ++x) {
        i64 v = (((4 * x + b2) % p * x + b4) % p * x + b6) % p;
        if (v == 0) continue;
        cnt += qr[v] ? 1 : -1;
    }
    return cnt;
}

inline i64 trace_ap(const CurveQ& e, i64 p) { return p + 1 - count_points_fp(e, p); }

/// t_f = alpha^f + beta^f from t_0 = 2, t_1 = a_p, t_k = a_p t_{k-1} - p t_{k-2}.
inline i64 trace_extension(i64 ap, i64 p, i64 f) {
    if (f < 1) throw Error("trace_extension: f < 1");
    if ((i128)ap * ap > 4 * (i128)p) throw Error("trace_extension: Hasse bound violated");
    i128 prev = 2, cur = ap;
    for (i64 k = 2; k <= f; ++k) {
        i128 next = (i128)ap * cur - (i128)p * prev;
        prev = cur;
        cur = next;
        if (cur > (i128)INT64_MAX || cur < -(i128)INT64_MAX) throw Error("trace_extension: overflow");
    }
    return f == 1 ? ap : (i64)cur;
}

/// a_q mod 2 for odd q of good reduction; a_q is odd iff the 2-division
/// cubic has no root mod q.
inline int ap_parity(const CurveQ& e, i64 q) {
    if (q == 2 || !is_prime_u64((u64)q)) throw Error("ap_parity: q must be an odd prime");
    if (e.disc % q == 0) throw Error("ap_parity: bad reduction at q");
    // monic form: x^3 + b2*inv4 x^2 + 2b4*inv4 x + b6*inv4 (scale roots keep existence)
    i64 inv4 = invmod(4, q);
    i64 c2 = (i64)((i128)mod_pos((i64)(e.b2 % q), q) * inv4 % q);
    i64 c1 = (i64)((i128)mod_pos((i64)((2 * e.b4) % q), q) * inv4 % q);
    i64 c0 = (i64)((i128)mod_pos((i64)(e.b6 % q), q) * inv4 % q);
    return cubic_has_root_fp(c2, c1, c0, q) ? 0 : 1;
}

// --------------------------------------------------------------- reduction

enum class ReductionKind { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

struct ReductionInfo {
    i64 p = 0;
    ReductionKind kind = ReductionKind::Good;
    std::optional<i64> tamagawa;  // nullopt = Unknown
    enum class Source { Computed, Database } source = Source::Computed;
};

inline const char* reduction_kind_name(ReductionKind k) {
    switch (k) {
        case ReductionKind::Good: return "good";
        case ReductionKind::SplitMultiplicative: return "split multiplicative";
        case ReductionKind::NonsplitMultiplicative: return "nonsplit multiplicative";
        case ReductionKind::Additive: return "additive";
    }
    return "?";
}

// ------------------------------------------------------------- trace cache

/// Concurrent-read memo of a_p values for one curve. Inserts are idempotent.
class TraceMemo {
  public:
    i64 get_ap(const CurveQ& e, i64 p) const {
        {
            std::shared_lock lk(m_);
            auto it = ap_.find(p);
            if (it != ap_.end()) return it->second;
        }
        i64 v = trace_ap(e, p);
        std::unique_lock lk(m_);
        ap_.emplace(p, v);
        return v;
    }

  private:
    mutable std::shared_mutex m_;
    mutable std::unordered_map<i64, i64> ap_;
};

}  // namespace h10ec
