#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "h10ec/curvedb.hpp"
#include "oracles.hpp"

using namespace h10ec;

static CurveDb load() { return load_db(oracles::db_path()); }

TEST_CASE("load_db provides the four required records") {
    CurveDb db = load();
    for (const char* lbl : {"557b1", "704g1", "1472j1", "32a2"}) CHECK(db.has(lbl));
    CHECK_THROWS_AS(db.get("9999z9"), Error);
}

TEST_CASE("557b1 record") {
    CurveDb db = load();
    const auto& r = db.get("557b1");
    CHECK(r.rank_Q == 0);
    CHECK(r.disc_sign == 1);
    CHECK(r.model.disc == 557);
    CHECK(r.conductor == 557);
    CHECK(r.mod2_image.kind == Mod2ImageDecl::Kind::Full);
    CHECK(r.mod2_image.quad_disc == 557);
    for (i64 d : {-7, -79, -127}) {
        bool found = false;
        for (i64 s : r.star_discriminants) found |= (s == d);
        CHECK(found);
    }
    CHECK(r.ap(2) == 2);  // exactly one point mod 2
}

TEST_CASE("704g1 record") {
    CurveDb db = load();
    const auto& r = db.get("704g1");
    CHECK(r.disc_sign == -1);
    CHECK(r.conductor == 704);
    CHECK(r.mod2_image.quad_disc == -11);
    CHECK(r.star_discriminants.size() == 20);
    for (size_t i = 0; i < r.star_discriminants.size(); ++i)
        CHECK(r.star_discriminants[i] == -dset_expected()[i]);
    CHECK(r.tamagawa_qmu3.at(2) == 1);
    CHECK(r.tamagawa_qmu3.at(11) == 1);
}

TEST_CASE("1472j1 record") {
    CurveDb db = load();
    const auto& r = db.get("1472j1");
    CHECK(r.disc_sign == -1);
    CHECK(r.mod2_image.quad_disc == -23);
    bool m7 = false, m615 = false;
    for (i64 s : r.star_discriminants) {
        m7 |= s == -7;
        m615 |= s == -615;
    }
    CHECK(m7);
    CHECK(m615);
}

TEST_CASE("32a2 record") {
    CurveDb db = load();
    const auto& r = db.get("32a2");
    CHECK(r.mod3_image == Mod3ImageDecl::CM16);
    CHECK_FALSE(r.anomalous_at_3);
    CHECK_FALSE(r.two_torsion_trivial);
    CHECK(r.model.j_num == 1728);
}

TEST_CASE("dset is the fixed 20-element list") {
    CurveDb db = load();
    CHECK(db.dset.values == dset_expected());
    CHECK(db.dset.values.size() == 20);
    CHECK(db.dset.values.front() == 7);
    CHECK(db.dset.values[4] == 167);
}

TEST_CASE("recomputed invariants match the stored flags") {
    CurveDb db = load();
    for (auto& [lbl, r] : db.curves) {
        CHECK((r.model.disc > 0 ? 1 : -1) == r.disc_sign);
        // bad primes = tamagawa keys
        i64 absd = (i64)(r.model.disc < 0 ? -r.model.disc : r.model.disc);
        for (auto& [p, e] : factor_trial(absd)) CHECK(r.tamagawa.count(p) == 1);
        for (auto& [p, c] : r.tamagawa) CHECK(absd % p == 0);
        // conductor support matches
        for (auto& [p, e] : factor_trial(r.conductor)) CHECK(r.tamagawa.count(p) == 1);
    }
}

static std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::string s, line;
    while (std::getline(in, line)) s += line + "\n";
    return s;
}

static void write_tmp(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

TEST_CASE("unknown fields and invariant violations reject the whole file") {
    std::string base = slurp(oracles::db_path());
    std::string tmp = "/tmp/h10ec_test_db.db";

    SUBCASE("unknown field") {
        write_tmp(tmp, base + "\n[curve 11a3]\nbogus_field = 1\n");
        CHECK_THROWS_AS(load_db(tmp), Error);
    }
    SUBCASE("wrong disc sign") {
        std::string broken = base;
        auto pos = broken.find("disc_sign = +");
        broken.replace(pos, 13, "disc_sign = -");
        write_tmp(tmp, broken);
        CHECK_THROWS_AS(load_db(tmp), Error);
    }
    SUBCASE("wrong dset") {
        std::string broken = base;
        auto pos = broken.find("values = 7 39");
        broken.replace(pos, 13, "values = 7 11");
        write_tmp(tmp, broken);
        CHECK_THROWS_AS(load_db(tmp), Error);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(load_db("/tmp/no_such_db_file.db"), Error); }
    std::remove(tmp.c_str());
}

TEST_CASE("reduction_info classification") {
    CurveDb db = load();
    const auto& r557 = db.get("557b1");
    auto ri = reduction_info(r557.model, 557, &r557);
    CHECK(ri.kind == ReductionKind::SplitMultiplicative);
    CHECK(ri.tamagawa == 1);

    auto good = reduction_info(r557.model, 5, &r557);
    CHECK(good.kind == ReductionKind::Good);

    const auto& r704 = db.get("704g1");
    auto at2 = reduction_info(r704.model, 2, &r704);
    CHECK(at2.kind == ReductionKind::Additive);
    CHECK(at2.tamagawa == 1);
    CHECK(at2.source == ReductionInfo::Source::Database);
    auto at11 = reduction_info(r704.model, 11, &r704);
    CHECK(at11.kind == ReductionKind::NonsplitMultiplicative);
    CHECK(at11.tamagawa == 1);

    // without a record, additive Tamagawa at 2 stays unknown
    auto bare = reduction_info(r704.model, 2, nullptr);
    CHECK(bare.kind == ReductionKind::Additive);
    CHECK_FALSE(bare.tamagawa.has_value());

    // split multiplicative at 7 for the small fixture curve
    CurveQ fixture = make_curve(0, -1, 0, -8, -6);
    auto at7 = reduction_info(fixture, 7, nullptr);
    CHECK(at7.kind == ReductionKind::SplitMultiplicative);
    CHECK(at7.tamagawa == 1);
}
