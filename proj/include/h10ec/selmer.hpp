#pragma once

// Local cohomology contributions delta_v over the Kummer layer
// Q(mu3, a^(1/3)) and the rank-stability certificate built from them: when
// every premise holds and the local terms sum to zero, the 3-Selmer group
// over the layer is trivial, so the rank cannot grow.

#include <sstream>

#include "sieve.hpp"

namespace h10ec {
namespace selmer {

enum class KummerSplitting { Ramified, Inert, Split };

inline const char* splitting_name(KummerSplitting s) {
    switch (s) {
        case KummerSplitting::Ramified: return "ramified";
        case KummerSplitting::Inert: return "inert";
        case KummerSplitting::Split: return "split";
    }
    return "?";
}

/// Behavior of the places of Q(mu3) above r in Q(mu3, a^(1/3)).
/// r | a with cube-free valuation: ramified. r = 3: ramified unless the unit
/// a is a local cube (a^2 = 1 mod 9), which makes it split; rational
/// integers can never give the inert (unramified cubic) case at 3.
/// Otherwise: split iff a is a cube in F_{r^f}, inert if not.
inline KummerSplitting splitting_in_kummer(i64 r, i64 a, i64 ell = 3) {
    if (ell != 3) throw Error("splitting_in_kummer: only ell = 3 supported");
    if (a <= 1) throw Error("splitting_in_kummer: a must exceed 1");
    if (!is_lpower_free(a, ell)) throw Error("splitting_in_kummer: a not cube-free");
    if (!is_prime_u64((u64)r)) throw Error("splitting_in_kummer: r not prime");
    if (r == ell) {
        if (a % ell == 0) return KummerSplitting::Ramified;
        return powmod_u64((u64)mod_pos(a, 9), 2, 9) == 1 ? KummerSplitting::Split : KummerSplitting::Ramified;
    }
    if (a % r == 0) return KummerSplitting::Ramified;  // v(a) in {1,2}, not divisible by 3
    i64 f = mult_order(r, ell);
    PolyModRing Fq = make_fq(r, (int)f);
    i128 e = 0;
    {
        i128 q = 1;
        for (i64 i = 0; i < f; ++i) q *= r;
        e = (q - 1) / ell;
    }
    Poly img = Fq.constant(mod_pos(a, r));
    return Fq.is_one(Fq.pow(img, e)) ? KummerSplitting::Split : KummerSplitting::Inert;
}

/// The unit d^n (A/B)^s mod r attached to a split multiplicative prime r:
/// j = r^(-n) A/B with A, B coprime to r, a = r^s d with r coprime to d.
inline i64 u_r_a(const CurveQ& e, i64 r, i64 a) {
    if (a < 1) throw Error("u_r_a: a must be positive");
    i64 n = 0;
    {
        i128 den = e.j_den;
        while (den % r == 0) {
            den /= r;
            ++n;
        }
        if (e.j_num % r == 0 || n == 0) throw Error("u_r_a: j must have a pole at r (multiplicative reduction)");
    }
    i64 s = 0;
    i64 d = a;
    while (d % r == 0) {
        d /= r;
        ++s;
    }
    i128 B = e.j_den;
    for (i64 i = 0; i < n; ++i) B /= r;
    i64 Amod = mod_pos((i64)(e.j_num % r), r);
    i64 Bmod = mod_pos((i64)(B % r), r);
    i64 ab = (i64)((i128)Amod * invmod(Bmod, r) % r);
    i64 u = powmod_u64((u64)mod_pos(d, r), (u64)n, (u64)r);
    u = (i64)((i128)u * powmod_u64((u64)ab, (u64)s, (u64)r) % r);
    return u;
}

// -------------------------------------------------------------- place data

enum class PlaceReduction {
    GoodOrdinaryAboveL,
    GoodSupersingularAboveL,
    GoodAwayFromL,
    SplitMult,
    NonsplitMult,
    Additive,
};

inline const char* place_reduction_name(PlaceReduction r) {
    switch (r) {
        case PlaceReduction::GoodOrdinaryAboveL: return "good ordinary above ell";
        case PlaceReduction::GoodSupersingularAboveL: return "good supersingular above ell";
        case PlaceReduction::GoodAwayFromL: return "good away from ell";
        case PlaceReduction::SplitMult: return "split multiplicative";
        case PlaceReduction::NonsplitMult: return "nonsplit multiplicative";
        case PlaceReduction::Additive: return "additive";
    }
    return "?";
}

struct PlaceData {
    i64 r = 0;                 // rational prime below the place
    i64 f = 1;                 // residue degree of the place of Q(mu3)
    i64 q_v = 0;               // residue field size r^f (r itself when r = 3)
    int places_above = 1;      // 2 when r splits in Q(mu3), else 1
    KummerSplitting splitting = KummerSplitting::Split;
    PlaceReduction reduction = PlaceReduction::GoodAwayFromL;
    i64 tamagawa = 1;          // Tamagawa number of the base change at this place
    int residual_torsion_dim = 0;  // dim_F3 of E~(kappa_v)[3]
};

struct DeltaValue {
    i64 value = 0;
    bool ambiguous = false;  // the "1 or 2" good-ordinary branch
};

/// Brau's local contribution for one place.
inline DeltaValue delta_v(const PlaceData& pd, i64 a, const CurveQ& e, i64 ell = 3) {
    if (ell != 3) throw Error("delta_v: only ell = 3 supported");
    if (pd.q_v <= 1) throw Error("delta_v: malformed place data (q_v)");
    if (pd.r != ell && mod_pos(pd.q_v - 1, ell) != 0) throw Error("delta_v: q_v must be 1 mod ell away from ell");
    switch (pd.reduction) {
        case PlaceReduction::GoodOrdinaryAboveL:
            if (pd.splitting == KummerSplitting::Ramified && pd.residual_torsion_dim != 0)
                return {0, true};  // table says 1 or 2; resolved by the non-anomalous premise instead
            return {0, false};
        case PlaceReduction::GoodSupersingularAboveL:
            if (pd.splitting == KummerSplitting::Ramified && a % ell == 0) return {ell - 2, false};
            return {0, false};
        case PlaceReduction::GoodAwayFromL:
            if (pd.splitting == KummerSplitting::Ramified) return {pd.residual_torsion_dim, false};
            return {0, false};
        case PlaceReduction::SplitMult: {
            if (pd.splitting == KummerSplitting::Split) return {0, false};
            if (pd.splitting == KummerSplitting::Inert) return {(pd.tamagawa % ell == 0) ? 1 : 0, false};
            // ramified: 1 iff u_{r,a} is an ell-th power in the residue field
            i64 u = u_r_a(e, pd.r, a);
            i64 f = pd.r == ell ? 1 : mult_order(pd.r, ell);
            PolyModRing Fq = make_fq(pd.r, (int)f);
            i128 q = 1;
            for (i64 i = 0; i < f; ++i) q *= pd.r;
            if ((q - 1) % ell != 0) throw Error("delta_v: split multiplicative place with q_v != 1 mod ell");
            Poly img = Fq.constant(u);
            bool cube = Fq.is_one(Fq.pow(img, (q - 1) / ell));
            return {cube ? 1 : 0, false};
        }
        case PlaceReduction::NonsplitMult:
            return {0, false};
        case PlaceReduction::Additive:
            if (a % pd.r == 0)
                throw Error("delta_v: additive place dividing the Kummer integer is outside the certified regime");
            if (pd.tamagawa % ell == 0)
                return {0, true};  // cannot conclude triviality of the local term
            return {0, false};
    }
    throw Error("delta_v: bad reduction tag");
}

// ----------------------------------------------------------- certificates

struct Premise {
    std::string name;
    std::string source;  // "computed" or "database"
    bool holds = false;
    std::string detail;
};

struct PlaceRow {
    PlaceData place;
    DeltaValue delta;
    i64 contribution = 0;  // delta * places_above
};

struct StabilityCertificate {
    std::string label;
    i64 a = 0;
    i64 ell = 3;
    std::vector<Premise> premises;
    std::vector<PlaceRow> places;
    i64 total = 0;
    bool selmer_vanishes = false;
    std::string failure;  // first failing premise / ambiguity, empty on success

    std::string to_text() const {
        std::ostringstream os;
        os << "stability-certificate v1\n";
        os << "curve: " << label << "\n";
        os << "kummer-integer: " << a << "\n";
        os << "ell: " << ell << "\n";
        for (const auto& p : premises)
            os << "premise " << p.name << ": " << (p.holds ? "holds" : "FAILS") << " [" << p.source << "]"
               << (p.detail.empty() ? "" : " " + p.detail) << "\n";
        for (const auto& row : places) {
            os << "place r=" << row.place.r << " q_v=" << row.place.q_v << " places=" << row.place.places_above
               << " splitting=" << splitting_name(row.place.splitting)
               << " reduction=" << place_reduction_name(row.place.reduction) << " c_v=" << row.place.tamagawa
               << " torsion_dim=" << row.place.residual_torsion_dim << " delta="
               << (row.delta.ambiguous ? std::string("ambiguous") : std::to_string(row.delta.value))
               << " contribution=" << row.contribution << "\n";
        }
        os << "archimedean places: delta = 0 (odd ell)\n";
        os << "total: " << total << "\n";
        os << "verdict: " << (selmer_vanishes ? "SELMER_VANISHES" : "INCONCLUSIVE") << "\n";
        if (!failure.empty()) os << "reason: " << failure << "\n";
        return os.str();
    }
};

/// dim of E~(kappa_v)[3] at a good place away from 3 with residue field F_{r^f}.
inline int residual_torsion_dim(const CurveRecord& rec, i64 r, i64 f) {
    i64 ap = rec.ap(r);
    i64 tf = trace_extension(ap, r, f);
    i128 qv = 1;
    for (i64 i = 0; i < f; ++i) qv *= r;
    if (mod_pos((i64)((qv + 1 - tf) % 3), 3) != 0) return 0;
    if (f == 2) {
        // distinct eigenvalues mod 3 are automatic when r = 2 mod 3:
        // dim = #{eigenvalues alpha of Frobenius with alpha^2 = 1}
        i64 t = mod_pos(ap, 3), d = mod_pos(r, 3);
        int dim = 0;
        for (i64 x : {1LL, 2LL})
            if (mod_pos(x * x - t * x + d, 3) == 0) ++dim;
        return dim;
    }
    // f = 1: charpoly (x-1)(x-beta); repeated root 1 needs the 3-division
    // polynomial to separate a unipotent action from the identity.
    i64 t = mod_pos(ap, 3), d = mod_pos(r, 3);
    i64 discr = mod_pos(t * t - 4 * d, 3);
    if (discr != 0) return 1;  // exactly one eigenvalue equals 1
    // count affine 3-torsion over F_r: psi3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8
    const CurveQ& e = rec.model;
    i64 b2 = mod_pos((i64)(e.b2 % r), r), b4 = mod_pos((i64)(e.b4 % r), r);
    i64 b6 = mod_pos((i64)(e.b6 % r), r), b8 = mod_pos((i64)(e.b8 % r), r);
    i64 count = 0;
    for (i64 x = 0; x < r; ++x) {
        i64 v = ((((3 * x + b2) % r * x + 3 * b4) % r * x + 3 * b6) % r * x + b8) % r;
        if (v != 0) continue;
        // y-solutions of y^2 + (a1 x + a3) y = x^3 + a2 x^2 + a4 x + a6
        i64 lin = mod_pos(e.a1 * x + e.a3, r);
        i64 rhs = mod_pos((i64)((((i128)x * x % r * x + (i128)e.a2 * x % r * x + (i128)e.a4 * x + e.a6) % r)), r);
        i64 dq = mod_pos((i64)(((i128)lin * lin + 4 * rhs) % r), r);
        count += 1 + kronecker(dq, r);
    }
    if (count >= 8) return 2;
    return count >= 2 ? 1 : 0;
}

/// Assemble PlaceData for the rational prime r in the layer for integer a.
inline PlaceData build_place(const CurveRecord& rec, i64 r, i64 a, i64 ell = 3) {
    if (ell != 3) throw Error("build_place: only ell = 3 supported");
    PlaceData pd;
    pd.r = r;
    if (r == ell) {
        pd.f = 1;
        pd.q_v = ell;
        pd.places_above = 1;
    } else {
        pd.f = mult_order(r, ell);
        pd.q_v = pd.f == 1 ? r : r * r;
        pd.places_above = mod_pos(r, 3) == 1 ? 2 : 1;
    }
    pd.splitting = splitting_in_kummer(r, a, ell);
    bool good = rec.model.disc % r != 0;
    if (good) {
        pd.tamagawa = 1;
        if (r == ell) {
            i64 a3 = rec.ap(3);
            pd.reduction = mod_pos(a3, 3) != 0 ? PlaceReduction::GoodOrdinaryAboveL
                                               : PlaceReduction::GoodSupersingularAboveL;
            pd.residual_torsion_dim = mod_pos(4 - a3, 3) == 0 ? 1 : 0;
        } else {
            pd.reduction = PlaceReduction::GoodAwayFromL;
            pd.residual_torsion_dim = residual_torsion_dim(rec, r, pd.f);
        }
        return pd;
    }
    // bad place: classify over Q, then over the quadratic base change
    ReductionInfo ri = reduction_info(rec.model, r, &rec);
    if (ri.kind == ReductionKind::Additive) {
        // component-group data over the extension cannot be derived from
        // rational local data; it must be curated
        if (!rec.tamagawa_qmu3.count(r))
            throw Error("build_place: no Tamagawa datum over Q(mu3) for additive prime " + std::to_string(r));
        pd.reduction = PlaceReduction::Additive;
        pd.tamagawa = rec.tamagawa_qmu3.at(r);
        return pd;
    }
    i128 d = rec.model.disc;
    i64 vdisc = 0;
    while (d % r == 0) {
        d /= r;
        ++vdisc;
    }
    if (pd.f == 2) {
        // multiplicative reduction becomes split over the residue-quadratic
        // extension at an inert place, with Tamagawa number v(disc)
        pd.reduction = PlaceReduction::SplitMult;
        pd.tamagawa = vdisc;
    } else {
        // r splits in Q(mu3): each place is a copy of Q_r
        pd.reduction = ri.kind == ReductionKind::SplitMultiplicative ? PlaceReduction::SplitMult
                                                                     : PlaceReduction::NonsplitMult;
        pd.tamagawa = ri.tamagawa.value_or(1);
    }
    if (rec.tamagawa_qmu3.count(r) && rec.tamagawa_qmu3.at(r) != pd.tamagawa)
        throw Error("build_place: stored Tamagawa over Q(mu3) disagrees with the computed value at " +
                    std::to_string(r));
    return pd;
}

/// Full rank-stability certificate for (E, a): premises checked and the
/// local terms summed over all places of the layer's critical set.
inline StabilityCertificate rank_stability_certificate(const CurveRecord& rec, i64 a, i64 ell = 3) {
    if (ell != 3) throw Error("rank_stability_certificate: only ell = 3 supported");
    StabilityCertificate cert;
    cert.label = rec.label;
    cert.a = a;
    cert.ell = ell;

    auto add = [&](std::string name, std::string source, bool holds, std::string detail = "") {
        cert.premises.push_back({std::move(name), std::move(source), holds, std::move(detail)});
    };

    add("a > 1", "computed", a > 1, "a = " + std::to_string(a));
    bool cube_free = a >= 1 && is_lpower_free(a, ell);
    add("a is ell-power free", "computed", cube_free);
    bool good_at_ell = rec.conductor % ell != 0;
    add("good reduction at ell", "computed", good_at_ell);
    add("Selmer_3(E/Q(mu3)) = 0", "database", rec.selmer3_over_Qmu3_vanishes);
    add("E(Q(mu3))[3] = 0", "database", rec.three_torsion_over_Qmu3_trivial);
    i64 tam = 1;
    for (auto& [p, c] : rec.tamagawa_qmu3) {
        int mult = (p != 3 && mod_pos(p, 3) == 1) ? 2 : 1;
        for (int i = 0; i < mult; ++i) tam *= c;
    }
    add("ell does not divide Tam(E/Q(mu3))", "database", tam % ell != 0, "Tam = " + std::to_string(tam));
    bool nonanom = true;
    std::string ann;
    if (good_at_ell) {
        i64 pts = ell + 1 - rec.ap(ell);
        nonanom = pts % ell != 0;
        ann = "#E(F_3) = " + std::to_string(pts);
        if (nonanom != !rec.anomalous_at_3) throw Error("rank_stability_certificate: anomalous flag inconsistent");
    }
    add("ell does not divide #E~(F_ell)", "computed", nonanom, ann);

    bool supported = true;
    std::vector<i64> afactors;
    if (a > 1) {
        for (auto& [p, e] : factor_trial(a)) {
            afactors.push_back(p);
            if (!sieve::in_P(rec, p, ell)) {
                supported = false;
                add("prime factor " + std::to_string(p) + " of a lies in P(E,3)", "computed", false);
            }
        }
    }
    if (supported) add("every prime factor of a lies in P(E,3)", "computed", a > 1);

    bool premises_ok = true;
    for (auto& p : cert.premises)
        if (!p.holds) {
            premises_ok = false;
            if (cert.failure.empty()) cert.failure = "premise failed: " + p.name;
        }
    if (!premises_ok) {
        cert.selmer_vanishes = false;
        return cert;
    }

    // critical set: places above primes dividing 3 N a (archimedean terms vanish)
    std::set<i64> support{ell};
    for (auto& [p, e] : factor_trial(rec.conductor)) support.insert(p);
    for (i64 p : afactors) support.insert(p);

    bool ambiguous = false;
    for (i64 r : support) {
        PlaceRow row;
        row.place = build_place(rec, r, a, ell);
        row.delta = delta_v(row.place, a, rec.model, ell);
        row.contribution = row.delta.value * row.place.places_above;
        // cross-check: a supported on P forces trivial residual torsion at
        // ramified good places away from ell
        if (row.place.reduction == PlaceReduction::GoodAwayFromL &&
            row.place.splitting == KummerSplitting::Ramified && row.place.residual_torsion_dim != 0)
            throw Error("rank_stability_certificate: internal inconsistency between P-membership and torsion");
        if (row.delta.ambiguous) ambiguous = true;
        cert.total += row.contribution;
        cert.places.push_back(row);
    }
    if (ambiguous) {
        cert.selmer_vanishes = false;
        cert.failure = "a local term is only bounded, not determined";
        return cert;
    }
    cert.selmer_vanishes = (cert.total == 0);
    if (!cert.selmer_vanishes) cert.failure = "nonzero local contribution";
    return cert;
}

/// Re-run every check backing a certificate; true iff everything still holds.
inline bool reverify(const CurveRecord& rec, const StabilityCertificate& cert) {
    StabilityCertificate again = rank_stability_certificate(rec, cert.a, cert.ell);
    return again.selmer_vanishes == cert.selmer_vanishes && again.total == cert.total &&
           again.to_text() == cert.to_text();
}

}  // namespace selmer
}  // namespace h10ec
