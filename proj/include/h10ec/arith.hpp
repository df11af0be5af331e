#pragma once

// Exact integer and rational arithmetic primitives. Everything here is pure
// and works in 64-bit values with 128-bit intermediates; no floating point.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace h10ec {

using i64 = long long;
using u64 = unsigned long long;
using i128 = __int128;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string to_string_i128(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
    std::string s;
    while (u) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow (128-bit)");
    return r;
}

inline i128 gcd_i128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 mod_pos(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline u64 mulmod_u64(u64 a, u64 b, u64 m) {
    return (u64)((unsigned __int128)a * b % m);
}

inline u64 powmod_u64(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline i64 invmod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = mod_pos(a, m);
    while (a1) {
        i64 q = g / a1;
        g -= q * a1;
        std::swap(g, a1);
        x -= q * x1;
        std::swap(x, x1);
    }
    if (g != 1) throw Error("invmod: not invertible");
    return mod_pos(x, m);
}

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    // deterministic witness set for 64-bit inputs
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

inline i64 isqrt_i128(i128 n) {
    if (n < 0) throw Error("isqrt of negative");
    if (n == 0) return 0;
    i128 x = 1;
    while (x < ((i128)1 << 63) && x * x <= n) x <<= 1;
    i128 y = (x + n / x) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return (i64)x;
}

inline bool is_square_i128(i128 n, i64* root = nullptr) {
    if (n < 0) return false;
    i64 r = isqrt_i128(n);
    if ((i128)r * r == n) {
        if (root) *root = r;
        return true;
    }
    return false;
}

// ------------------------------------------------------------------ Rational

/// Exact rational, always in lowest terms with positive denominator.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n) : num(n), den(1) {}
    Rational(i64 n, i64 d) { *this = make((i128)n, (i128)d); }

    static Rational make(i128 n, i128 d) {
        if (d == 0) throw Error("rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd_i128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr i128 LO = -(i128)INT64_MAX, HI = (i128)INT64_MAX;
        if (n < LO || n > HI || d > HI) throw Error("rational: overflow after reduction");
        Rational r;
        r.num = (i64)n;
        r.den = (i64)d;
        return r;
    }

    Rational operator+(const Rational& o) const {
        return make((i128)num * o.den + (i128)o.num * den, (i128)den * o.den);
    }
    Rational operator-(const Rational& o) const {
        return make((i128)num * o.den - (i128)o.num * den, (i128)den * o.den);
    }
    Rational operator*(const Rational& o) const { return make((i128)num * o.num, (i128)den * o.den); }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw Error("rational: division by zero");
        return make((i128)num * o.den, (i128)den * o.num);
    }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return (i128)num * o.den < (i128)o.num * den; }
    bool operator<=(const Rational& o) const { return (i128)num * o.den <= (i128)o.num * den; }

    Rational abs() const {
        Rational r = *this;
        if (r.num < 0) r.num = -r.num;
        return r;
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    /// Decimal expansion to `digits` places; second member is true when exact.
    std::pair<std::string, bool> decimal(int digits) const {
        i64 n = num, d = den;
        std::string out;
        if (n < 0) {
            out += '-';
            n = -n;
        }
        out += std::to_string(n / d);
        n %= d;
        if (n == 0) return {out, true};
        out += '.';
        for (int i = 0; i < digits && n != 0; ++i) {
            n *= 10;
            out += char('0' + n / d);
            n %= d;
        }
        return {out, n == 0};
    }
};

// ------------------------------------------------------------------- primes

struct PrimeList {
    i64 limit = 0;
    std::vector<i64> primes;
};

inline PrimeList sieve_primes(i64 limit) {
    if (limit < 2 || limit > 100000000LL) throw Error("sieve_primes: limit out of range [2, 1e8]");
    std::vector<bool> comp(limit + 1, false);
    PrimeList out;
    out.limit = limit;
    for (i64 i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            out.primes.push_back(i);
            if (i * i <= limit)
                for (i64 j = i * i; j <= limit; j += i) comp[j] = true;
        }
    }
    return out;
}

// --------------------------------------------------------- Kronecker symbol

/// Kronecker symbol (a|n), with the standard extensions at 2 and n < 0.
inline int kronecker(i64 a, i64 n) {
    if (n == 0) throw Error("kronecker: n = 0");
    int k = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v > 0) {
        if (a % 2 == 0) return 0;
        if (v % 2 == 1) {
            int am8 = (int)mod_pos(a, 8);
            if (am8 == 3 || am8 == 5) k = -k;
        }
    }
    a = mod_pos(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) k = -k;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) k = -k;
        a %= n;
    }
    return n == 1 ? k : 0;
}

// --------------------------------------------------- orders, factorization

/// Smallest f >= 1 with a^f = 1 mod n. Requires gcd(a,n) = 1, n >= 2.
inline i64 mult_order(i64 a, i64 n) {
    if (n < 2) throw Error("mult_order: n < 2");
    a = mod_pos(a, n);
    if (std::gcd(a, n) != 1) throw Error("mult_order: gcd(a,n) != 1");
    i64 x = a % n, f = 1;
    while (x != 1 % n) {
        x = (i64)mulmod_u64((u64)x, (u64)a, (u64)n);
        ++f;
        if (f > n) throw Error("mult_order: no order found");
    }
    return f;
}

/// Trial-division factorization, primes ascending. n in [1, 2^63).
inline std::vector<std::pair<i64, int>> factor_trial(i64 n) {
    if (n < 1) throw Error("factor_trial: n < 1");
    std::vector<std::pair<i64, int>> out;
    auto strip = [&](i64 p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    };
    strip(2);
    for (i64 p = 3; p <= 10000000LL && p * p <= n; p += 2) strip(p);
    if (n > 1) {
        // remainder has no factor <= 1e7, so it is prime if < 1e14
        if (n >= 100000000000000LL && !is_prime_u64((u64)n))
            throw Error("factor_trial: cofactor too large for trial division");
        out.emplace_back(n, 1);
    }
    return out;
}

inline bool is_squarefree(i64 n) {
    if (n == 0) return false;
    for (auto& [p, e] : factor_trial(n < 0 ? -n : n))
        if (e >= 2) return false;
    return true;
}

/// Signed squarefree part of n (sign preserved).
inline i64 squarefree_part(i128 n) {
    if (n == 0) throw Error("squarefree_part: n = 0");
    i64 sign = n < 0 ? -1 : 1;
    if (n < 0) n = -n;
    // peel square factors via full factorization (values in scope are small)
    if (n > (i128)INT64_MAX) {
        // strip obvious square factors of 2 first to fit
        while (n % 4 == 0) n /= 4;
        if (n > (i128)INT64_MAX) throw Error("squarefree_part: value too large");
    }
    i64 out = 1;
    for (auto& [p, e] : factor_trial((i64)n))
        if (e % 2) out *= p;
    return sign * out;
}

/// d -> d if d = 1 mod 4 else 4d; requires d squarefree, d != 0, 1.
inline i64 fundamental_discriminant(i64 d) {
    if (d == 0 || d == 1) throw Error("fundamental_discriminant: d must be a squarefree integer != 0, 1");
    if (!is_squarefree(d)) throw Error("fundamental_discriminant: d not squarefree");
    return mod_pos(d, 4) == 1 ? d : 4 * d;
}

/// True iff no prime divides n with exponent >= l.
inline bool is_lpower_free(i64 n, i64 l) {
    if (n < 1) throw Error("is_lpower_free: n < 1");
    if (l < 2) throw Error("is_lpower_free: l < 2");
    for (auto& [p, e] : factor_trial(n))
        if (e >= l) return false;
    return true;
}

}  // namespace h10ec
