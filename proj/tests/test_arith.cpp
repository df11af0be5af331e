#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "h10ec/arith.hpp"
#include "oracles.hpp"

using namespace h10ec;

TEST_CASE("sieve_primes basics") {
    CHECK(sieve_primes(10).primes == std::vector<i64>{2, 3, 5, 7});
    CHECK(sieve_primes(2).primes == std::vector<i64>{2});
    CHECK_THROWS_AS(sieve_primes(1), Error);
    CHECK_THROWS_AS(sieve_primes(200000001LL), Error);
}

TEST_CASE("sieve_primes against independent pi(x) tabulation") {
    auto pl = sieve_primes(100000);
    for (auto& [x, pix] : oracles::pi_reference()) {
        i64 cnt = 0;
        for (i64 p : pl.primes)
            if (p <= x) ++cnt;
        CHECK(cnt == pix);
    }
    // strictly ascending
    for (size_t i = 1; i < pl.primes.size(); ++i) CHECK(pl.primes[i - 1] < pl.primes[i]);
}

TEST_CASE("kronecker examples") {
    CHECK(kronecker(-7, 11) == 1);
    CHECK(kronecker(5, 5) == 0);
    CHECK(kronecker(-7, 3) == -1);
    CHECK_THROWS_AS(kronecker(3, 0), Error);
    // extension at 2: (d|2) = 1 iff d = +-1 mod 8
    CHECK(kronecker(-7, 2) == 1);
    CHECK(kronecker(-11, 2) == -1);
    CHECK(kronecker(17, 2) == 1);
    CHECK(kronecker(12, 2) == 0);
    // negative n
    CHECK(kronecker(-1, -1) == -1);
    CHECK(kronecker(3, -1) == 1);
}

TEST_CASE("kronecker equals Legendre for odd primes (brute force)") {
    for (i64 q : {3, 5, 7, 11, 13, 101, 499, 997}) {
        for (i64 a = -30; a <= 30; ++a) {
            CHECK(kronecker(a, q) == oracles::slow_legendre(a, q));
        }
    }
}

TEST_CASE("kronecker is completely multiplicative in the top argument") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 2000; ++i) {
        i64 a = (i64)(rng() % 2001) - 1000;
        i64 b = (i64)(rng() % 2001) - 1000;
        i64 n = (i64)(rng() % 400) + 1;
        if (rng() & 1) n = -n;
        CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
    }
}

TEST_CASE("mult_order") {
    CHECK(mult_order(1, 3) == 1);
    CHECK(mult_order(2, 3) == 2);
    CHECK(mult_order(2, 7) == 3);
    CHECK_THROWS_AS(mult_order(6, 9), Error);
    CHECK_THROWS_AS(mult_order(2, 1), Error);
}

TEST_CASE("mult_order divides the unit group order") {
    for (i64 n : {3, 4, 5, 7, 9, 12, 35, 101}) {
        i64 phi = 0;
        for (i64 a = 1; a < n; ++a)
            if (std::gcd(a, n) == 1) ++phi;
        for (i64 a = 1; a < n; ++a) {
            if (std::gcd(a, n) != 1) continue;
            CHECK(phi % mult_order(a, n) == 0);
        }
    }
}

TEST_CASE("fundamental_discriminant") {
    CHECK(fundamental_discriminant(-7) == -7);
    CHECK(fundamental_discriminant(-1) == -4);
    CHECK(fundamental_discriminant(-615) == -615);
    CHECK(fundamental_discriminant(5) == 5);
    CHECK(fundamental_discriminant(2) == 8);
    CHECK_THROWS_AS(fundamental_discriminant(1), Error);
    CHECK_THROWS_AS(fundamental_discriminant(12), Error);
    CHECK_THROWS_AS(fundamental_discriminant(0), Error);
}

TEST_CASE("factor_trial") {
    CHECK(factor_trial(704) == std::vector<std::pair<i64, int>>{{2, 6}, {11, 1}});
    CHECK(factor_trial(1).empty());
    CHECK(factor_trial(615) == std::vector<std::pair<i64, int>>{{3, 1}, {5, 1}, {41, 1}});
    CHECK_THROWS_AS(factor_trial(0), Error);
}

TEST_CASE("factor_trial recomposes (sampled)") {
    std::mt19937_64 rng(999);
    for (int i = 0; i < 3000; ++i) {
        i64 n = (i64)(rng() % 1000000) + 1;
        i64 prod = 1;
        i64 last = 0;
        for (auto& [p, e] : factor_trial(n)) {
            CHECK(p > last);
            last = p;
            for (int k = 0; k < e; ++k) prod *= p;
        }
        CHECK(prod == n);
    }
}

TEST_CASE("is_lpower_free") {
    CHECK(is_lpower_free(12, 3));
    CHECK_FALSE(is_lpower_free(8, 3));
    CHECK_FALSE(is_lpower_free(675, 3));
    CHECK(is_lpower_free(1, 3));
    CHECK(is_lpower_free(4, 3));
}

TEST_CASE("Rational exactness") {
    Rational a(1, 6), b(1, 12);
    CHECK((a + b) == Rational(1, 4));
    CHECK((a - b) == Rational(1, 12));
    CHECK((a * b) == Rational(1, 72));
    CHECK((a / b) == Rational(2));
    CHECK(Rational(-4, -8) == Rational(1, 2));
    CHECK(Rational(3, -4).den == 4);
    CHECK(Rational(3, -4).num == -3);
    CHECK_THROWS_AS(Rational(1, 0), Error);
    CHECK(Rational(7, 48) < Rational(9, 16));
    CHECK(Rational(103, 128).str() == "103/128");
}

TEST_CASE("Rational decimal expansion") {
    auto [d1, e1] = Rational(9, 16).decimal(7);
    CHECK(d1 == "0.5625");
    CHECK(e1);
    auto [d2, e2] = Rational(4175733, 4194304).decimal(7);
    CHECK(d2 == "0.9955723");
    CHECK_FALSE(e2);
    auto [d3, e3] = Rational(-1, 8).decimal(7);
    CHECK(d3 == "-0.125");
    CHECK(e3);
}

TEST_CASE("is_prime_u64 spot checks") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(557));
    CHECK(is_prime_u64(1000003));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(561));     // Carmichael
    CHECK_FALSE(is_prime_u64(704));
}

TEST_CASE("squarefree part and integer square root") {
    CHECK(squarefree_part(-704) == -11);
    CHECK(squarefree_part(64) == 1);
    CHECK(squarefree_part(-23552) == -23);
    CHECK(isqrt_i128((i128)12345678901234567LL * 12345678901234567LL) == 12345678901234567LL);
    i64 r;
    CHECK(is_square_i128(900, &r));
    CHECK(r == 30);
    CHECK_FALSE(is_square_i128(901, nullptr));
}
