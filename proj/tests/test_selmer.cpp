#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "h10ec/selmer.hpp"
#include "oracles.hpp"

using namespace h10ec;
using namespace h10ec::selmer;

static CurveDb& db() {
    static CurveDb d = load_db(oracles::db_path());
    return d;
}

TEST_CASE("splitting_in_kummer away from 3a: split/inert partition, never ramified") {
    for (i64 a : {2, 5, 12, 20}) {
        for (i64 r : sieve_primes(200).primes) {
            if (r == 3 || a % r == 0) continue;
            auto s = splitting_in_kummer(r, a);
            CHECK(s != KummerSplitting::Ramified);
            if (mod_pos(r, 3) == 2) {
                // residue field F_{r^2} contains all cube roots of F_r elements
                CHECK(s == KummerSplitting::Split);
            } else {
                // split iff a is a cube mod r
                bool cube = false;
                for (i64 x = 0; x < r; ++x)
                    if (mod_pos(x * x % r * x - a, r) == 0) cube = true;
                CHECK((s == KummerSplitting::Split) == cube);
            }
        }
    }
}

TEST_CASE("splitting_in_kummer at primes dividing a") {
    CHECK(splitting_in_kummer(5, 5) == KummerSplitting::Ramified);
    CHECK(splitting_in_kummer(5, 50) == KummerSplitting::Ramified);  // 5^2 || 50
    CHECK(splitting_in_kummer(2, 2) == KummerSplitting::Ramified);
}

TEST_CASE("splitting_in_kummer at r = 3") {
    CHECK(splitting_in_kummer(3, 3) == KummerSplitting::Ramified);       // 3 | a
    CHECK(splitting_in_kummer(3, 6) == KummerSplitting::Ramified);
    CHECK(splitting_in_kummer(3, 10) == KummerSplitting::Split);         // 10 = 1 mod 9
    CHECK(splitting_in_kummer(3, 17) == KummerSplitting::Split);         // 17 = -1 mod 9
    CHECK(splitting_in_kummer(3, 2) == KummerSplitting::Ramified);       // 2 mod 9 not a cube unit
    CHECK(splitting_in_kummer(3, 5) == KummerSplitting::Ramified);
}

TEST_CASE("splitting_in_kummer rejects bad inputs") {
    CHECK_THROWS_AS(splitting_in_kummer(5, 8), Error);   // 8 = 2^3 not cube-free
    CHECK_THROWS_AS(splitting_in_kummer(5, 1), Error);
    CHECK_THROWS_AS(splitting_in_kummer(4, 5), Error);   // r not prime
    CHECK_THROWS_AS(splitting_in_kummer(5, 10, 5), Error);  // only ell = 3
}

TEST_CASE("u_r_a values") {
    // 557b1 at r = 557: j has a simple pole, so u = a^1 for a coprime to 557
    CurveQ e557 = db().get("557b1").model;
    CHECK(u_r_a(e557, 557, 5) == 5);
    // fixture with split multiplicative reduction at 7 and v_7(j) = -1:
    // u_{7, 7d} = d * (A/B) varies over residues
    CurveQ fix = make_curve(0, -1, 0, -8, -6);
    CHECK(u_r_a(fix, 7, 7 * 1) == 4);
    CHECK(u_r_a(fix, 7, 7 * 2) == 1);
    CHECK(u_r_a(fix, 7, 7 * 3) == 5);
    // the 14a1 curve has v_7(j) = -3, so u is a cube times (A/B)^s
    CurveQ e14 = make_curve(1, 0, 1, 4, -6);
    CHECK(u_r_a(e14, 7, 7) == 6);
    CHECK(u_r_a(e14, 7, 14) == 6);
    CHECK(u_r_a(e14, 7, 21) == 1);
    // good reduction at r: no pole of j
    CHECK_THROWS_AS(u_r_a(e557, 5, 5), Error);
}

static PlaceData synth(i64 r, i64 f, KummerSplitting s, PlaceReduction red, i64 tam = 1, int tors = 0) {
    PlaceData pd;
    pd.r = r;
    pd.f = f;
    i64 q = 1;
    for (i64 i = 0; i < f; ++i) q *= r;
    pd.q_v = q;
    pd.places_above = (r != 3 && mod_pos(r, 3) == 1) ? 2 : 1;
    pd.splitting = s;
    pd.reduction = red;
    pd.tamagawa = tam;
    pd.residual_torsion_dim = tors;
    return pd;
}

TEST_CASE("delta table: every row and column") {
    CurveQ fix = make_curve(0, -1, 0, -8, -6);  // split mult at 7, v7(j) = -1
    using KS = KummerSplitting;
    using PR = PlaceReduction;

    SUBCASE("good ordinary above ell") {
        auto d0 = delta_v(synth(3, 1, KS::Ramified, PR::GoodOrdinaryAboveL, 1, 0), 5, fix);
        CHECK(d0.value == 0);
        CHECK_FALSE(d0.ambiguous);
        auto d1 = delta_v(synth(3, 1, KS::Ramified, PR::GoodOrdinaryAboveL, 1, 1), 5, fix);
        CHECK(d1.ambiguous);  // table value "1 or 2"
        CHECK(delta_v(synth(3, 1, KS::Inert, PR::GoodOrdinaryAboveL, 1, 1), 5, fix).value == 0);
        CHECK(delta_v(synth(3, 1, KS::Split, PR::GoodOrdinaryAboveL, 1, 1), 5, fix).value == 0);
    }
    SUBCASE("good supersingular above ell: ell - 2 = 1 exactly when 3 | a") {
        auto dr = delta_v(synth(3, 1, KS::Ramified, PR::GoodSupersingularAboveL), 6, fix);
        CHECK(dr.value == 1);
        CHECK_FALSE(dr.ambiguous);
        CHECK(delta_v(synth(3, 1, KS::Ramified, PR::GoodSupersingularAboveL), 5, fix).value == 0);
        CHECK(delta_v(synth(3, 1, KS::Inert, PR::GoodSupersingularAboveL), 6, fix).value == 0);
        CHECK(delta_v(synth(3, 1, KS::Split, PR::GoodSupersingularAboveL), 6, fix).value == 0);
    }
    SUBCASE("good away from ell: ramified contributes the torsion dimension") {
        for (int dim : {0, 1, 2}) {
            CHECK(delta_v(synth(7, 1, KS::Ramified, PR::GoodAwayFromL, 1, dim), 14, fix).value == dim);
        }
        CHECK(delta_v(synth(7, 1, KS::Inert, PR::GoodAwayFromL, 1, 2), 5, fix).value == 0);
        CHECK(delta_v(synth(7, 1, KS::Split, PR::GoodAwayFromL, 1, 2), 5, fix).value == 0);
    }
    SUBCASE("split multiplicative: the unit gate at ramified places") {
        // u_{7, 7*1} = 4 is not a cube mod 7 -> 0; u_{7, 7*2} = 1 is -> 1
        CHECK(delta_v(synth(7, 1, KS::Ramified, PR::SplitMult), 7, fix).value == 0);
        CHECK(delta_v(synth(7, 1, KS::Ramified, PR::SplitMult), 14, fix).value == 1);
        CHECK(delta_v(synth(7, 1, KS::Inert, PR::SplitMult, 3), 5, fix).value == 1);  // 3 | c_v
        CHECK(delta_v(synth(7, 1, KS::Inert, PR::SplitMult, 2), 5, fix).value == 0);
        CHECK(delta_v(synth(7, 1, KS::Split, PR::SplitMult, 3), 5, fix).value == 0);
    }
    SUBCASE("nonsplit multiplicative: zero in every column") {
        for (auto s : {KS::Ramified, KS::Inert, KS::Split})
            CHECK(delta_v(synth(11, 2, s, PR::NonsplitMult, 2), 5, fix).value == 0);
    }
    SUBCASE("additive: zero when coprime to ell a and Tam prime to ell") {
        CHECK(delta_v(synth(11, 2, KS::Split, PR::Additive, 2), 5, fix).value == 0);
        CHECK(delta_v(synth(11, 2, KS::Inert, PR::Additive, 4), 5, fix).value == 0);
        CHECK(delta_v(synth(11, 2, KS::Inert, PR::Additive, 3), 5, fix).ambiguous);
        CHECK_THROWS_AS(delta_v(synth(11, 2, KS::Ramified, PR::Additive, 1), 11, fix), Error);
    }
}

TEST_CASE("delta values stay within the table bounds") {
    CurveQ fix = make_curve(0, -1, 0, -8, -6);
    using KS = KummerSplitting;
    using PR = PlaceReduction;
    for (auto red : {PR::GoodOrdinaryAboveL, PR::GoodSupersingularAboveL, PR::GoodAwayFromL, PR::SplitMult,
                     PR::NonsplitMult}) {
        for (auto s : {KS::Ramified, KS::Inert, KS::Split}) {
            for (i64 a : {5, 6, 14}) {
                i64 r = (red == PR::GoodOrdinaryAboveL || red == PR::GoodSupersingularAboveL) ? 3 : 7;
                if (red == PR::SplitMult && s == KS::Ramified && a % 7 != 0) continue;
                auto d = delta_v(synth(r, 1, s, red, 3, 2), a, fix);
                CHECK(d.value >= 0);
                CHECK(d.value <= 2);
            }
        }
    }
}

TEST_CASE("rank stability certificates for the first ten stability primes") {
    for (auto label : {"704g1", "32a2"}) {
        const auto& rec = db().get(label);
        auto firsts = oracles::first_P_primes().at(label);
        int done = 0;
        for (i64 p : firsts) {
            if (done == 10) break;
            ++done;
            auto cert = rank_stability_certificate(rec, p);
            CHECK(cert.selmer_vanishes);
            CHECK(cert.total == 0);
            for (auto& row : cert.places) {
                if (row.place.reduction == PlaceReduction::GoodAwayFromL &&
                    row.place.splitting == KummerSplitting::Ramified)
                    CHECK(row.place.residual_torsion_dim == 0);
            }
        }
    }
}

TEST_CASE("certificate failure paths") {
    const auto& rec = db().get("704g1");
    auto bad1 = rank_stability_certificate(rec, 8);  // 2^3 not cube-free
    CHECK_FALSE(bad1.selmer_vanishes);
    CHECK(bad1.failure.find("ell-power free") != std::string::npos);

    auto bad2 = rank_stability_certificate(rec, 13);  // 13 not in P(704g1,3): a13 = 2 -> t1 = 2
    CHECK_FALSE(bad2.selmer_vanishes);
    CHECK(bad2.failure.find("premise failed") != std::string::npos);

    auto bad3 = rank_stability_certificate(rec, 1);
    CHECK_FALSE(bad3.selmer_vanishes);
}

TEST_CASE("composite Kummer integers supported on the stability set certify too") {
    const auto& rec = db().get("704g1");
    // 5 and 7 are the first two stability primes; a = 35 and a = 175 = 5^2*7
    for (i64 a : {35, 175}) {
        auto cert = rank_stability_certificate(rec, a);
        CHECK(cert.selmer_vanishes);
        CHECK(cert.total == 0);
    }
}

TEST_CASE("certificates re-verify idempotently and serialize deterministically") {
    const auto& rec = db().get("32a2");
    auto cert = rank_stability_certificate(rec, 5);
    CHECK(cert.selmer_vanishes);
    CHECK(reverify(rec, cert));
    auto again = rank_stability_certificate(rec, 5);
    CHECK(cert.to_text() == again.to_text());
    CHECK(cert.to_text().find("SELMER_VANISHES") != std::string::npos);
}

namespace {

// Slow oracle: 3-torsion of E(F_p) via the literal group law (chord-tangent
// addition on the general Weierstrass form), independent of the division
// polynomial route used by the implementation.
struct SlowPoint {
    bool inf = true;
    i64 x = 0, y = 0;
    bool operator==(const SlowPoint& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
};

struct SlowGroup {
    const CurveQ& e;
    i64 p;

    i64 inv(i64 a) const { return invmod(a, p); }

    SlowPoint neg(const SlowPoint& P) const {
        if (P.inf) return P;
        return {false, P.x, mod_pos(-P.y - e.a1 * P.x - e.a3, p)};
    }

    SlowPoint add(const SlowPoint& P, const SlowPoint& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        if (P.x == Q.x && Q == neg(P)) return {};
        i64 lam, nu;
        if (P == Q) {
            i64 den = mod_pos(2 * P.y + e.a1 * P.x + e.a3, p);
            lam = (i64)((i128)mod_pos(3 * P.x % p * P.x + 2 * (i64)(e.a2 % p) * P.x + (i64)(e.a4 % p) -
                                          e.a1 * P.y,
                                      p) *
                        inv(den) % p);
            nu = (i64)((i128)mod_pos((i64)((-(i128)P.x * P.x % p * P.x + (i128)(e.a4 % p) * P.x +
                                            2 * (i128)(e.a6 % p) - (i128)(e.a3 % p) * P.y) %
                                           p),
                                     p) *
                       inv(den) % p);
        } else {
            i64 den = mod_pos(Q.x - P.x, p);
            lam = (i64)((i128)mod_pos(Q.y - P.y, p) * inv(den) % p);
            nu = (i64)((i128)mod_pos((i64)(((i128)P.y * Q.x - (i128)Q.y * P.x) % p), p) * inv(den) % p);
        }
        i64 x3 = mod_pos((i64)(((i128)lam * lam + (i128)e.a1 * lam - (e.a2 % p) - P.x - Q.x) % p), p);
        i64 y3 = mod_pos((i64)((-((i128)lam + e.a1) * x3 - nu - (e.a3 % p)) % p), p);
        return {false, x3, y3};
    }

    i64 count_three_torsion() const {
        i64 cnt = 1;  // the identity
        for (i64 x = 0; x < p; ++x)
            for (i64 y = 0; y < p; ++y) {
                i64 lhs = mod_pos((i64)(((i128)y * y + (i128)e.a1 * x % p * y + (i128)e.a3 * y) % p), p);
                i64 rhs = mod_pos((i64)(((i128)x * x % p * x + (i128)(e.a2 % p) * x % p * x +
                                         (i128)(e.a4 % p) * x + (e.a6 % p)) %
                                        p),
                                  p);
                if (lhs != rhs) continue;
                SlowPoint P{false, x, y};
                if (add(P, add(P, P)).inf) ++cnt;
            }
        return cnt;
    }
};

}  // namespace

TEST_CASE("residual torsion dimension against the group-law oracle") {
    // pairs (curve, r) with r = 1 mod 3 and a_r = 2 mod 3, where the residue
    // field above r is F_r and the 3-part is nontrivial
    const std::pair<const char*, i64> cases[] = {{"557b1", 7},  {"557b1", 13},  {"704g1", 13},
                                                 {"704g1", 19}, {"704g1", 31},  {"1472j1", 13},
                                                 {"1472j1", 43}};
    for (auto& [label, r] : cases) {
        const auto& rec = db().get(label);
        REQUIRE(mod_pos(r, 3) == 1);
        REQUIRE(mod_pos(rec.ap(r), 3) == 2);
        int dim = residual_torsion_dim(rec, r, 1);
        SlowGroup g{rec.model, r};
        i64 slow = g.count_three_torsion();
        CHECK(slow == (dim == 0 ? 1 : dim == 1 ? 3 : 9));
        CHECK(dim >= 1);  // 3 divides the point count in all chosen cases
    }
    // dimension zero whenever 3 does not divide the point count
    const auto& rec = db().get("704g1");
    for (i64 r : {7, 37, 43}) {
        if (mod_pos(rec.ap(r), 3) == 2) continue;
        CHECK(residual_torsion_dim(rec, r, mult_order(r, 3)) == 0);
    }
}

TEST_CASE("certificate enumerates places over 3, the conductor, and a") {
    const auto& rec = db().get("557b1");
    auto cert = rank_stability_certificate(rec, 2);
    CHECK(cert.selmer_vanishes);
    std::vector<i64> rs;
    for (auto& row : cert.places) rs.push_back(row.place.r);
    CHECK(rs == std::vector<i64>{2, 3, 557});
    // 557 is inert in Q(mu3) and multiplicative: becomes split over the
    // quadratic residue field
    CHECK(cert.places[2].place.q_v == (i64)557 * 557);
    CHECK(cert.places[2].place.reduction == PlaceReduction::SplitMult);
}
