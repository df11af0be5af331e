#pragma once

// Curated per-curve facts: the Weierstrass model plus the trusted local and
// global data (ranks, Selmer vanishing, Heegner-point hypotheses) that are
// consumed as database facts rather than recomputed. Human-editable text
// format, schema-versioned, unknown fields rejected, invariants revalidated
// on load.

#include <fstream>
#include <map>
#include <sstream>

#include "curve.hpp"

namespace h10ec {

struct Mod2ImageDecl {
    enum class Kind { Full, Trivial, Other } kind = Kind::Other;
    i64 quad_disc = 0;  // fundamental discriminant of the quadratic subfield (Full only)
};

enum class Mod3ImageDecl { FullGL2, CM16 };

struct CurveRecord {
    std::string label;
    CurveQ model;
    i64 conductor = 0;
    i64 rank_Q = 0;
    bool two_torsion_trivial = false;
    bool three_torsion_over_Qmu3_trivial = false;
    int disc_sign = 0;  // +1 or -1
    std::map<i64, i64> tamagawa;        // over Q, per bad prime
    std::map<i64, i64> tamagawa_qmu3;   // over Q(mu3), per place above each bad prime
    bool c2_odd = false;
    Mod2ImageDecl mod2_image;
    Mod3ImageDecl mod3_image = Mod3ImageDecl::FullGL2;
    bool selmer3_over_Qmu3_vanishes = false;
    bool anomalous_at_3 = false;
    std::vector<i64> star_discriminants;
    std::string provenance;

    std::shared_ptr<TraceMemo> traces = std::make_shared<TraceMemo>();

    i64 ap(i64 p) const { return traces->get_ap(model, p); }
};

struct DSet {
    std::vector<i64> values;
};

inline const std::vector<i64>& dset_expected() {
    static const std::vector<i64> v = {7,   39,  95,  127, 167, 255, 263, 271, 303, 359,
                                       391, 447, 479, 527, 535, 615, 623, 655, 679, 695};
    return v;
}

struct CurveDb {
    std::map<std::string, CurveRecord> curves;
    DSet dset;

    const CurveRecord& get(const std::string& label) const {
        auto it = curves.find(label);
        if (it == curves.end()) throw Error("curve database: unknown label '" + label + "'");
        return it->second;
    }
    bool has(const std::string& label) const { return curves.count(label) != 0; }
};

// ----------------------------------------------------------------- parsing

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

inline i64 parse_i64(const std::string& s) {
    size_t pos = 0;
    i64 v = std::stoll(s, &pos);
    if (pos != s.size()) throw Error("curve database: bad integer '" + s + "'");
    return v;
}

inline bool parse_bool(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw Error("curve database: bad boolean '" + s + "'");
}

inline std::map<i64, i64> parse_prime_map(const std::vector<std::string>& toks) {
    std::map<i64, i64> m;
    for (auto& t : toks) {
        auto colon = t.find(':');
        if (colon == std::string::npos) throw Error("curve database: bad prime:value entry '" + t + "'");
        i64 p = parse_i64(t.substr(0, colon));
        i64 v = parse_i64(t.substr(colon + 1));
        if (v <= 0) throw Error("curve database: Tamagawa numbers must be positive");
        if (!m.emplace(p, v).second) throw Error("curve database: duplicate prime in map");
    }
    return m;
}

}  // namespace detail

inline ReductionInfo reduction_info(const CurveQ& e, i64 p, const CurveRecord* rec = nullptr);

inline void validate_record(const CurveRecord& r) {
    const CurveQ& e = r.model;
    // disc sign
    if ((e.disc > 0 ? +1 : -1) != r.disc_sign)
        throw Error("curve database: disc_sign mismatch for " + r.label);
    // bad-prime support of the (minimal) stored model == tamagawa keys == conductor support
    i64 absdisc;
    {
        i128 d = e.disc < 0 ? -e.disc : e.disc;
        if (d > (i128)INT64_MAX) throw Error("curve database: discriminant too large for " + r.label);
        absdisc = (i64)d;
    }
    std::vector<i64> bad;
    for (auto& [p, ex] : factor_trial(absdisc)) bad.push_back(p);
    auto keyset = [](const std::map<i64, i64>& m) {
        std::vector<i64> k;
        for (auto& [p, v] : m) k.push_back(p);
        return k;
    };
    if (keyset(r.tamagawa) != bad || keyset(r.tamagawa_qmu3) != bad)
        throw Error("curve database: Tamagawa map keys must be exactly the bad primes for " + r.label);
    std::vector<i64> nsupp;
    for (auto& [p, ex] : factor_trial(r.conductor)) nsupp.push_back(p);
    if (nsupp != bad) throw Error("curve database: conductor support mismatch for " + r.label);
    for (auto& [p, ex] : factor_trial(r.conductor))
        if (p >= 5 && ex > 1) throw Error("curve database: conductor exponent > 1 at p >= 5 for " + r.label);
    // star discriminants negative and fundamental
    for (i64 d : r.star_discriminants) {
        if (d >= 0) throw Error("curve database: star discriminant must be negative for " + r.label);
        if (fundamental_discriminant(squarefree_part(d)) != d)
            throw Error("curve database: star discriminant not fundamental for " + r.label);
    }
    // mod-2 image declaration vs the model
    bool has_rational_two_torsion = !two_torsion_x_coords(e).empty();
    if (r.two_torsion_trivial == has_rational_two_torsion)
        throw Error("curve database: two_torsion_trivial mismatch for " + r.label);
    if (r.mod2_image.kind == Mod2ImageDecl::Kind::Full) {
        if (has_rational_two_torsion) throw Error("curve database: Full mod-2 image with rational 2-torsion");
        i64 cls = squarefree_part(e.disc);
        if (cls == 1 || fundamental_discriminant(cls) != r.mod2_image.quad_disc)
            throw Error("curve database: mod-2 quadratic subfield discriminant mismatch for " + r.label);
    }
    // anomalous flag (only meaningful at good reduction mod 3)
    if (e.disc % 3 != 0) {
        i64 a3 = trace_ap(e, 3);
        if ((mod_pos(4 - a3, 3) == 0) != r.anomalous_at_3)
            throw Error("curve database: anomalous_at_3 mismatch for " + r.label);
    }
    // c2 parity consistency
    bool two_bad = absdisc % 2 == 0;
    bool c2odd = two_bad ? (r.tamagawa.at(2) % 2 == 1) : true;
    if (c2odd != r.c2_odd) throw Error("curve database: c2_odd mismatch for " + r.label);
    // Tamagawa over Q(mu3) at multiplicative places is derivable: split over
    // the quadratic extension at inert primes with c = v(disc), unchanged at
    // split primes
    for (auto& [p, ck] : r.tamagawa_qmu3) {
        i64 n = r.conductor;
        int vn = 0;
        while (n % p == 0) {
            n /= p;
            ++vn;
        }
        if (vn != 1) continue;  // additive: curated, not derivable
        i128 d = e.disc;
        i64 vd = 0;
        while (d % p == 0) {
            d /= p;
            ++vd;
        }
        i64 expect;
        if (p != 3 && mod_pos(p, 3) == 2) {
            expect = vd;  // inert in Q(mu3): multiplicative becomes split
        } else if (p != 3) {
            expect = reduction_info(e, p, nullptr).tamagawa.value_or(1);
        } else {
            continue;  // multiplicative at 3: ramified place, not validated here
        }
        if (ck != expect)
            throw Error("curve database: tamagawa_qmu3 at multiplicative prime " + std::to_string(p) +
                        " should be " + std::to_string(expect) + " for " + r.label);
    }
}

/// Parse and validate the whole database file. Any violation rejects the file.
inline CurveDb load_db(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("curve database: cannot open '" + path + "'");
    CurveDb db;
    std::string line, section;
    CurveRecord cur;
    bool in_curve = false, have_schema = false, have_dset = false;
    std::map<std::string, bool> seen;

    auto flush = [&]() {
        if (!in_curve) return;
        static const char* required[] = {"a_invariants", "conductor", "rank_Q", "two_torsion_trivial",
                                         "three_torsion_over_Qmu3_trivial", "disc_sign", "tamagawa",
                                         "tamagawa_qmu3", "c2_odd", "mod2_image", "mod3_image",
                                         "selmer3_over_Qmu3_vanishes", "anomalous_at_3",
                                         "star_discriminants", "provenance"};
        for (auto* k : required)
            if (!seen[k]) throw Error("curve database: missing field '" + std::string(k) + "' in " + cur.label);
        validate_record(cur);
        if (!db.curves.emplace(cur.label, cur).second)
            throw Error("curve database: duplicate label " + cur.label);
        cur = CurveRecord{};
        seen.clear();
    };

    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks_all = detail::split_ws(line);
        if (toks_all.empty()) continue;
        if (line.find('[') != std::string::npos) {
            flush();
            in_curve = false;
            std::string body = line.substr(line.find('[') + 1, line.find(']') - line.find('[') - 1);
            auto parts = detail::split_ws(body);
            if (parts.size() == 2 && parts[0] == "curve") {
                in_curve = true;
                cur.label = parts[1];
            } else if (parts.size() == 1 && parts[0] == "dset") {
                section = "dset";
            } else {
                throw Error("curve database: unknown section [" + body + "]");
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("curve database: expected key = value: " + line);
        auto key = detail::split_ws(line.substr(0, eq));
        auto val = detail::split_ws(line.substr(eq + 1));
        if (key.size() != 1) throw Error("curve database: bad key in line: " + line);
        const std::string& k = key[0];
        if (!in_curve && section != "dset" && k == "schema") {
            if (val.size() != 1 || val[0] != "1") throw Error("curve database: unsupported schema version");
            have_schema = true;
            continue;
        }
        if (!in_curve && section == "dset") {
            if (k != "values") throw Error("curve database: unknown dset field '" + k + "'");
            for (auto& t : val) db.dset.values.push_back(detail::parse_i64(t));
            have_dset = true;
            continue;
        }
        if (!in_curve) throw Error("curve database: field outside any section: " + line);
        if (seen[k]) throw Error("curve database: duplicate field '" + k + "' in " + cur.label);
        seen[k] = true;
        if (k == "a_invariants") {
            if (val.size() != 5) throw Error("curve database: a_invariants needs 5 entries");
            cur.model = make_curve(detail::parse_i64(val[0]), detail::parse_i64(val[1]), detail::parse_i64(val[2]),
                                   detail::parse_i64(val[3]), detail::parse_i64(val[4]));
        } else if (k == "conductor") {
            cur.conductor = detail::parse_i64(val.at(0));
        } else if (k == "rank_Q") {
            cur.rank_Q = detail::parse_i64(val.at(0));
            if (cur.rank_Q < 0) throw Error("curve database: negative rank");
        } else if (k == "two_torsion_trivial") {
            cur.two_torsion_trivial = detail::parse_bool(val.at(0));
        } else if (k == "three_torsion_over_Qmu3_trivial") {
            cur.three_torsion_over_Qmu3_trivial = detail::parse_bool(val.at(0));
        } else if (k == "disc_sign") {
            if (val.at(0) == "+") cur.disc_sign = 1;
            else if (val.at(0) == "-") cur.disc_sign = -1;
            else throw Error("curve database: disc_sign must be + or -");
        } else if (k == "tamagawa") {
            cur.tamagawa = detail::parse_prime_map(val);
        } else if (k == "tamagawa_qmu3") {
            cur.tamagawa_qmu3 = detail::parse_prime_map(val);
        } else if (k == "c2_odd") {
            cur.c2_odd = detail::parse_bool(val.at(0));
        } else if (k == "mod2_image") {
            if (val.at(0) == "full") {
                cur.mod2_image.kind = Mod2ImageDecl::Kind::Full;
                cur.mod2_image.quad_disc = detail::parse_i64(val.at(1));
            } else if (val.at(0) == "trivial") {
                cur.mod2_image.kind = Mod2ImageDecl::Kind::Trivial;
            } else if (val.at(0) == "other") {
                cur.mod2_image.kind = Mod2ImageDecl::Kind::Other;
            } else {
                throw Error("curve database: mod2_image must be full/trivial/other");
            }
        } else if (k == "mod3_image") {
            if (val.at(0) == "full_gl2") cur.mod3_image = Mod3ImageDecl::FullGL2;
            else if (val.at(0) == "cm16") cur.mod3_image = Mod3ImageDecl::CM16;
            else throw Error("curve database: mod3_image must be full_gl2 or cm16");
        } else if (k == "selmer3_over_Qmu3_vanishes") {
            cur.selmer3_over_Qmu3_vanishes = detail::parse_bool(val.at(0));
        } else if (k == "anomalous_at_3") {
            cur.anomalous_at_3 = detail::parse_bool(val.at(0));
        } else if (k == "star_discriminants") {
            for (auto& t : val) cur.star_discriminants.push_back(detail::parse_i64(t));
        } else if (k == "provenance") {
            std::string raw = line.substr(eq + 1);
            size_t b = raw.find_first_not_of(" \t");
            cur.provenance = b == std::string::npos ? "" : raw.substr(b);
        } else {
            throw Error("curve database: unknown field '" + k + "' in " + cur.label);
        }
    }
    flush();
    if (!have_schema) throw Error("curve database: missing schema line");
    if (!have_dset || db.dset.values != dset_expected())
        throw Error("curve database: [dset] section must list the twenty certified values");
    for (const char* lbl : {"557b1", "704g1", "1472j1", "32a2"})
        if (!db.has(lbl)) throw Error(std::string("curve database: required label missing: ") + lbl);
    return db;
}

// ------------------------------------------------------------- reduction

/// Reduction data of E at p. For p >= 5 everything is computed from the
/// stored minimal model; p in {2,3} (and additive Tamagawa numbers) fall
/// back to the database record, Unknown without one.
inline ReductionInfo reduction_info(const CurveQ& e, i64 p, const CurveRecord* rec) {
    if (!is_prime_u64((u64)p)) throw Error("reduction_info: p not prime");
    ReductionInfo out;
    out.p = p;
    if (e.disc % p != 0) {
        out.kind = ReductionKind::Good;
        out.tamagawa = 1;
        return out;
    }
    i128 d = e.disc;
    int vdisc = 0;
    while (d % p == 0) {
        d /= p;
        ++vdisc;
    }
    bool c4_divisible = (e.c4 % p == 0);
    if (p >= 5) {
        if (!c4_divisible) {
            // multiplicative; split iff -c6 is a square mod p
            i64 mc6 = mod_pos((i64)((-e.c6) % p), p);
            bool split = kronecker(mc6, p) == 1;
            out.kind = split ? ReductionKind::SplitMultiplicative : ReductionKind::NonsplitMultiplicative;
            out.tamagawa = split ? vdisc : (vdisc % 2 == 0 ? 2 : 1);
        } else {
            out.kind = ReductionKind::Additive;
            if (rec && rec->tamagawa.count(p)) {
                out.tamagawa = rec->tamagawa.at(p);
                out.source = ReductionInfo::Source::Database;
            }
        }
        return out;
    }
    // p in {2,3}: kind from the conductor exponent if a record is present
    if (rec && rec->conductor % p == 0) {
        i64 n = rec->conductor;
        int vn = 0;
        while (n % p == 0) {
            n /= p;
            ++vn;
        }
        if (vn == 1) {
            // multiplicative; split iff -c6 is a square in Z_p
            bool split;
            if (p == 2) split = mod_pos((i64)((-e.c6) % 8), 8) == 1;
            else split = mod_pos((i64)((-e.c6) % 3), 3) == 1;
            out.kind = split ? ReductionKind::SplitMultiplicative : ReductionKind::NonsplitMultiplicative;
        } else {
            out.kind = ReductionKind::Additive;
        }
        out.tamagawa = rec->tamagawa.at(p);
        out.source = ReductionInfo::Source::Database;
        return out;
    }
    out.kind = c4_divisible ? ReductionKind::Additive : (p == 2 ? (mod_pos((i64)((-e.c6) % 8), 8) == 1
                                                                      ? ReductionKind::SplitMultiplicative
                                                                      : ReductionKind::NonsplitMultiplicative)
                                                                : (mod_pos((i64)((-e.c6) % 3), 3) == 1
                                                                      ? ReductionKind::SplitMultiplicative
                                                                      : ReductionKind::NonsplitMultiplicative));
    // Tamagawa stays Unknown without a database record at p in {2,3} unless multiplicative
    if (out.kind == ReductionKind::SplitMultiplicative) out.tamagawa = vdisc;
    else if (out.kind == ReductionKind::NonsplitMultiplicative) out.tamagawa = vdisc % 2 == 0 ? 2 : 1;
    return out;
}

}  // namespace h10ec
