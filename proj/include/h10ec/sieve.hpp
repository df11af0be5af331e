#pragma once

// Membership predicates for the prime sets driving rank stability (traces
// not congruent to 2 mod 3 over the cyclotomic residue field) and rank
// jumps (odd trace, split in a chosen imaginary quadratic field), empirical
// density sweeps against the exact group-theoretic values, the mod-2 image
// of a model, and a Frobenius-statistics consistency check for joint images.

#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <set>
#include <thread>

#include "curvedb.hpp"
#include "gl2.hpp"

namespace h10ec {
namespace sieve {

enum class Sign { Any, Plus, Minus };

inline const char* sign_name(Sign s) {
    switch (s) {
        case Sign::Any: return "any";
        case Sign::Plus: return "plus";
        case Sign::Minus: return "minus";
    }
    return "?";
}

// ------------------------------------------------------------- predicates

/// p in the rank-stability set of (E, 3): p coprime to the conductor, p != 3,
/// and the Frobenius trace over the residue field of Q(mu3) is not 2 mod 3.
inline bool in_P(const CurveRecord& rec, i64 p, i64 ell = 3) {
    if (ell != 3) throw Error("in_P: only ell = 3 supported");
    if (!is_prime_u64((u64)p)) return false;
    if (p == ell || rec.conductor % p == 0) return false;
    i64 f = mult_order(p, ell);
    i64 tf = trace_extension(rec.ap(p), p, f);
    return mod_pos(tf, ell) != 2;
}

/// q in the rank-jump set for (E, K): q coprime to 2N, q splits in K
/// (Kronecker(d_K, q) = 1), a_q odd, and the optional congruence mod 4.
inline bool in_Q_single(const CurveRecord& rec, i64 dK, i64 q, Sign sign = Sign::Any) {
    if (!is_prime_u64((u64)q)) return false;
    if (q == 2 || rec.conductor % q == 0) return false;
    if (sign == Sign::Plus && mod_pos(q, 4) != 1) return false;
    if (sign == Sign::Minus && mod_pos(q, 4) != 3) return false;
    if (kronecker(dK, q) != 1) return false;
    return ap_parity(rec.model, q) == 1;
}

/// Disjunction of in_Q_single over several quadratic fields (shared sign).
inline bool in_Q_union(const CurveRecord& rec, const std::vector<i64>& discs, i64 q, Sign sign = Sign::Minus) {
    if (discs.empty()) throw Error("in_Q_union: empty list of discriminants");
    for (i64 d : discs)
        if (in_Q_single(rec, d, q, sign)) return true;
    return false;
}

/// q = 3 mod 4, coprime to 2 N1 N2, split in K, both traces odd.
inline bool in_Q_two_curves(const CurveRecord& r1, const CurveRecord& r2, i64 dK, i64 q) {
    if (!is_prime_u64((u64)q)) return false;
    if (q == 2 || r1.conductor % q == 0 || r2.conductor % q == 0) return false;
    if (mod_pos(q, 4) != 3) return false;
    if (kronecker(dK, q) != 1) return false;
    return ap_parity(r1.model, q) == 1 && ap_parity(r2.model, q) == 1;
}

// -------------------------------------------------------------- mod-2 image

struct Mod2Image {
    enum class Kind { FullS3, C3, C2, Trivial } kind;
    i64 quad_disc = 0;  // fundamental discriminant of the quadratic subfield (FullS3 / C2)
};

/// Galois group of the 2-division field, from the 2-division cubic: FullS3
/// iff irreducible with non-square discriminant; quadratic subfield =
/// square class of the curve discriminant.
inline Mod2Image mod2_image(const CurveQ& e) {
    auto roots = two_torsion_x_coords(e);
    i64 cls = squarefree_part(e.disc);
    if (roots.size() == 3) return {Mod2Image::Kind::Trivial, 0};
    if (roots.size() == 1) return {Mod2Image::Kind::C2, fundamental_discriminant(cls)};
    if (cls == 1) return {Mod2Image::Kind::C3, 0};
    return {Mod2Image::Kind::FullS3, fundamental_discriminant(cls)};
}

// ---------------------------------------------------------------- sweeps

struct SievePredicate {
    enum class Kind { PSet, QSingle, QUnion, QTwoCurves } kind;
    std::string curve;            // primary curve label
    std::string curve2;           // QTwoCurves only
    std::vector<i64> discs;       // d_K list (QSingle: one entry)
    Sign sign = Sign::Any;
    i64 ell = 3;

    std::string descriptor() const {
        std::string s;
        switch (kind) {
            case Kind::PSet: s = "P(" + curve + ",3)"; break;
            case Kind::QSingle: s = "Q(" + curve + ",dK=" + std::to_string(discs.at(0)) + ",sign=" + sign_name(sign) + ")"; break;
            case Kind::QUnion: {
                s = "Qunion(" + curve + ",dK={";
                for (size_t i = 0; i < discs.size(); ++i) s += (i ? "," : "") + std::to_string(discs[i]);
                s += "},sign=" + std::string(sign_name(sign)) + ")";
                break;
            }
            case Kind::QTwoCurves:
                s = "Qtwo(" + curve + "," + curve2 + ",dK=" + std::to_string(discs.at(0)) + ")";
                break;
        }
        return s;
    }
};

struct DensityEstimate {
    SievePredicate pred;
    i64 X = 0;
    i64 hits = 0;
    i64 primes_scanned = 0;
    Rational empirical;
    Rational theoretical;
    Rational abs_deviation;
    std::vector<std::array<i64, 3>> series;  // (X_i, hits_i, scanned_i) checkpoints
};

/// Theoretical density for a predicate, from the exact image computations.
inline Rational theoretical_density(const CurveDb& db, const SievePredicate& pred) {
    using K = SievePredicate::Kind;
    switch (pred.kind) {
        case K::PSet: {
            const auto& rec = db.get(pred.curve);
            if (rec.mod3_image == Mod3ImageDecl::CM16) return gl2::density_H(gl2::cm16_image());
            return gl2::density_H(gl2::enumerate_gl2(3));
        }
        case K::QSingle:
            return gl2::q_density_theoretical(
                {pred.sign == Sign::Any ? gl2::QDensitySpec::Kind::SingleK
                 : pred.sign == Sign::Plus ? gl2::QDensitySpec::Kind::SingleKPlus
                                           : gl2::QDensitySpec::Kind::SingleKMinus,
                 1});
        case K::QUnion:
            return gl2::q_density_theoretical({pred.sign == Sign::Minus ? gl2::QDensitySpec::Kind::UnionKMinus
                                                                        : gl2::QDensitySpec::Kind::UnionK,
                                               (int)pred.discs.size()});
        case K::QTwoCurves:
            return gl2::q_density_theoretical({gl2::QDensitySpec::Kind::TwoCurves, 1});
    }
    throw Error("theoretical_density: bad predicate");
}

inline bool eval_predicate(const CurveDb& db, const SievePredicate& pred, i64 p) {
    using K = SievePredicate::Kind;
    switch (pred.kind) {
        case K::PSet: return in_P(db.get(pred.curve), p, pred.ell);
        case K::QSingle: return in_Q_single(db.get(pred.curve), pred.discs.at(0), p, pred.sign);
        case K::QUnion: return in_Q_union(db.get(pred.curve), pred.discs, p, pred.sign);
        case K::QTwoCurves: return in_Q_two_curves(db.get(pred.curve), db.get(pred.curve2), pred.discs.at(0), p);
    }
    return false;
}

// ------------------------------------------------------------ sweep cache

/// Advisory on-disk cache of sweep tallies, keyed by (descriptor, X).
/// Correctness never depends on it: a mismatched or corrupt entry is ignored.
class SweepCache {
  public:
    explicit SweepCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::optional<std::pair<i64, i64>> lookup(const SievePredicate& pred, i64 X) const {
        std::ifstream in(file_for(pred, X));
        if (!in) return std::nullopt;
        std::string ver, desc;
        i64 x = 0, hits = -1, scanned = -1;
        if (!std::getline(in, ver) || ver != "h10ec-sweep-cache 1") return std::nullopt;
        if (!std::getline(in, desc) || desc != "predicate " + pred.descriptor()) return std::nullopt;
        std::string k;
        in >> k >> x;
        if (k != "X" || x != X) return std::nullopt;
        in >> k >> hits;
        if (k != "hits" || hits < 0) return std::nullopt;
        in >> k >> scanned;
        if (k != "scanned" || scanned <= 0) return std::nullopt;
        return std::make_pair(hits, scanned);
    }

    void store(const SievePredicate& pred, i64 X, i64 hits, i64 scanned) const {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        std::ofstream out(file_for(pred, X));
        if (!out) return;
        out << "h10ec-sweep-cache 1\n";
        out << "predicate " << pred.descriptor() << "\n";
        out << "X " << X << "\nhits " << hits << "\nscanned " << scanned << "\n";
    }

  private:
    std::filesystem::path file_for(const SievePredicate& pred, i64 X) const {
        std::string name;
        for (char c : pred.descriptor())
            name += (std::isalnum((unsigned char)c) || c == '-' || c == '_') ? c : '_';
        return dir_ / (name + "_" + std::to_string(X) + ".sweep");
    }

    std::filesystem::path dir_;
};

/// Deterministic scan of all primes <= X. Chunked across threads; the merge
/// is an associative sum, so the result is independent of the scheduling.
inline DensityEstimate empirical_density(const CurveDb& db, const SievePredicate& pred, i64 X,
                                         const SweepCache* cache = nullptr, bool with_series = false) {
    if (X < 100) throw Error("empirical_density: X < 100");
    DensityEstimate out;
    out.pred = pred;
    out.X = X;
    out.theoretical = theoretical_density(db, pred);

    PrimeList pl = sieve_primes(X);
    out.primes_scanned = (i64)pl.primes.size();

    bool cached = false;
    if (cache && !with_series) {
        if (auto hit = cache->lookup(pred, X)) {
            if (hit->second == out.primes_scanned) {
                out.hits = hit->first;
                cached = true;
            }
        }
    }
    if (!cached) {
        unsigned nw = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
        size_t n = pl.primes.size();
        std::vector<std::future<i64>> futs;
        size_t chunk = (n + nw - 1) / nw;
        std::vector<uint8_t> flags(with_series ? n : 0, 0);
        for (unsigned w = 0; w < nw; ++w) {
            size_t lo = w * chunk, hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, [&, lo, hi]() {
                i64 h = 0;
                for (size_t i = lo; i < hi; ++i) {
                    bool b = eval_predicate(db, pred, pl.primes[i]);
                    if (with_series) flags[i] = b;
                    h += b;
                }
                return h;
            }));
        }
        out.hits = 0;
        for (auto& f : futs) out.hits += f.get();
        if (with_series) {
            i64 cum = 0;
            size_t step = std::max<size_t>(1, n / 25);
            for (size_t i = 0; i < n; ++i) {
                cum += flags[i];
                if (i + 1 == n || (i + 1) % step == 0)
                    out.series.push_back({pl.primes[i], cum, (i64)(i + 1)});
            }
        }
        if (cache) cache->store(pred, X, out.hits, out.primes_scanned);
    }
    out.empirical = Rational(out.hits, out.primes_scanned);
    out.abs_deviation = (out.empirical - out.theoretical).abs();
    return out;
}

// -------------------------------------------------------- joint image stat

/// Frobenius class invariant used for the joint-image surrogate:
/// (trace mod l, det mod l) per curve. This separates every conjugacy class
/// of GL2(F_3) except the scalar vs. nonsemisimple pairs, so the check is a
/// coarsening of the full joint-image statement.
struct JointImageReport {
    i64 ell = 3;
    i64 X = 0;
    i64 primes_used = 0;
    std::map<std::array<i64, 3>, i64> observed;  // (t1, t2, det) -> count
    std::vector<std::array<i64, 3>> predicted;   // det-compatible pairs of the maximal model
    std::vector<std::array<i64, 3>> missing;     // predicted but not observed
    bool det_incompatible_seen = false;
    bool consistent = false;

    std::string verdict() const { return consistent ? "CONSISTENT" : "INCONSISTENT"; }
};

inline std::vector<std::array<i64, 3>> predicted_invariant_pairs(i64 ell) {
    std::vector<std::array<i64, 3>> out;
    if (ell == 2) {
        for (i64 t1 : {0, 1})
            for (i64 t2 : {0, 1}) out.push_back({t1, t2, 1});
        return out;
    }
    if (ell != 3) throw Error("predicted_invariant_pairs: ell must be 2 or 3");
    // realized traces per determinant in GL2(F_3): every trace occurs for both dets
    for (i64 d : {1, 2})
        for (i64 t1 : {0, 1, 2})
            for (i64 t2 : {0, 1, 2}) out.push_back({t1, t2, d});
    return out;
}

inline JointImageReport joint_image_stat(const CurveRecord& r1, const CurveRecord& r2, i64 ell, i64 X) {
    if (ell != 2 && ell != 3) throw Error("joint_image_stat: ell must be 2 or 3");
    if (X < 10000) throw Error("joint_image_stat: X too small (need >= 1e4)");
    JointImageReport rep;
    rep.ell = ell;
    rep.X = X;
    PrimeList pl = sieve_primes(X);
    for (i64 p : pl.primes) {
        if (p == ell || r1.conductor % p == 0 || r2.conductor % p == 0) continue;
        i64 t1, t2;
        if (ell == 2) {
            t1 = ap_parity(r1.model, p);
            t2 = ap_parity(r2.model, p);
        } else {
            t1 = mod_pos(r1.ap(p), 3);
            t2 = mod_pos(r2.ap(p), 3);
        }
        i64 d1 = mod_pos(p, ell), d2 = mod_pos(p, ell);
        if (d1 != d2) {
            rep.det_incompatible_seen = true;  // cannot happen: same Frobenius determinant
            continue;
        }
        rep.observed[{t1, t2, d1}]++;
        rep.primes_used++;
    }
    rep.predicted = predicted_invariant_pairs(ell);
    for (auto& pr : rep.predicted)
        if (!rep.observed.count(pr)) rep.missing.push_back(pr);
    rep.consistent = rep.missing.empty() && !rep.det_incompatible_seen;
    return rep;
}

}  // namespace sieve
}  // namespace h10ec
