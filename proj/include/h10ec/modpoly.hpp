#pragma once

// Arithmetic in F_p[x]/(m(x)) for a monic modulus of small degree.
// Backs three things: the eigenvalue-power test on 2x2 matrices (modulus =
// characteristic polynomial), cube tests in F_{r^f} (modulus irreducible of
// degree f), and root detection for cubics via x^q mod m.

#include <vector>

#include "arith.hpp"

namespace h10ec {

using Poly = std::vector<i64>;  // coefficients ascending, reduced mod p

struct PolyModRing {
    i64 p;
    Poly modulus;  // monic, degree >= 1

    PolyModRing(i64 p_, Poly m) : p(p_), modulus(std::move(m)) {
        if (p < 2) throw Error("PolyModRing: p < 2");
        if (modulus.size() < 2 || modulus.back() != 1) throw Error("PolyModRing: modulus must be monic, deg >= 1");
    }

    int deg() const { return (int)modulus.size() - 1; }

    Poly zero() const { return Poly(deg(), 0); }

    Poly constant(i64 c) const {
        Poly r = zero();
        r[0] = mod_pos(c, p);
        return r;
    }

    Poly x() const {
        Poly r = zero();
        if (deg() == 1) {
            // x = -m0 in F_p[x]/(x + m0)
            r[0] = mod_pos(-modulus[0], p);
        } else {
            r[1] = 1;
        }
        return r;
    }

    Poly mul(const Poly& a, const Poly& b) const {
        int d = deg();
        std::vector<i64> prod(2 * d - 1, 0);
        for (int i = 0; i < d; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < d; ++j)
                prod[i + j] = (i64)((prod[i + j] + (i128)a[i] * b[j]) % p);
        }
        // reduce by monic modulus
        for (int i = 2 * d - 2; i >= d; --i) {
            i64 c = prod[i] % p;
            if (c == 0) continue;
            for (int j = 0; j < d; ++j)
                prod[i - deg() + j] = mod_pos((i64)((prod[i - deg() + j] - (i128)c * modulus[j]) % p), p);
            prod[i] = 0;
        }
        Poly r(prod.begin(), prod.begin() + d);
        for (auto& c : r) c = mod_pos(c, p);
        return r;
    }

    Poly pow(Poly base, i128 e) const {
        Poly r = constant(1);
        while (e > 0) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    bool is_one(const Poly& a) const {
        if (mod_pos(a[0], p) != 1 % p) return false;
        for (size_t i = 1; i < a.size(); ++i)
            if (mod_pos(a[i], p) != 0) return false;
        return true;
    }
};

/// Least quadratic non-residue mod odd prime p.
inline i64 quadratic_nonresidue(i64 p) {
    for (i64 c = 2; c < p; ++c)
        if (kronecker(c, p) == -1) return c;
    throw Error("no quadratic non-residue found");
}

/// The field F_{p^f} for f in {1, 2} as a quotient ring (f=2 uses x^2 - c or,
/// in characteristic 2, x^2 + x + 1).
inline PolyModRing make_fq(i64 p, int f) {
    if (f == 1) return PolyModRing(p, Poly{0, 1});
    if (f != 2) throw Error("make_fq: only residue degrees 1 and 2 supported");
    if (p == 2) return PolyModRing(2, Poly{1, 1, 1});
    i64 c = quadratic_nonresidue(p);
    return PolyModRing(p, Poly{mod_pos(-c, p), 0, 1});
}

// --------------------------------------------------- cubic root detection

/// Does the monic cubic x^3 + c2 x^2 + c1 x + c0 have a root in F_p?
/// Uses gcd(x^p - x, f) computed via powering in F_p[x]/(f). p odd prime,
/// and f is assumed separable when it matters (callers pass nonzero disc).
inline bool cubic_has_root_fp(i64 c2, i64 c1, i64 c0, i64 p) {
    c2 = mod_pos(c2, p);
    c1 = mod_pos(c1, p);
    c0 = mod_pos(c0, p);
    if (p <= 3) {
        for (i64 t = 0; t < p; ++t)
            if (mod_pos(((t * t % p) * t % p + c2 * t % p * t % p + c1 * t % p + c0) % p, p) == 0) return true;
        return false;
    }
    // quick constant-root check
    if (c0 == 0) return true;
    PolyModRing R(p, Poly{c0, c1, c2, 1});
    Poly xp = R.pow(R.x(), (i128)p);
    // g = x^p - x mod f; a root exists iff gcd(g, f) != 1
    Poly g = xp;
    g[1] = mod_pos(g[1] - 1, p);
    auto trim = [&](std::vector<i64> v) {
        for (auto& c : v) c = mod_pos(c, p);
        while (!v.empty() && v.back() == 0) v.pop_back();
        return v;
    };
    auto polyrem = [&](std::vector<i64> A, const std::vector<i64>& B) {
        i64 lead_inv = invmod(B.back(), p);
        while (A.size() >= B.size()) {
            i64 q = (i64)((i128)A.back() * lead_inv % p);
            size_t off = A.size() - B.size();
            for (size_t i = 0; i < B.size(); ++i)
                A[off + i] = mod_pos((i64)((A[off + i] - (i128)q * B[i]) % p), p);
            A = trim(A);
        }
        return A;
    };
    std::vector<i64> A = trim({c0, c1, c2, 1});
    std::vector<i64> B = trim({g[0], g[1], g[2]});
    while (!B.empty()) {
        auto r = polyrem(A, B);
        A = B;
        B = r;
    }
    // gcd is A; nontrivial iff deg >= 1
    return A.size() >= 2;
}

}  // namespace h10ec
