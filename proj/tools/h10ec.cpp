// Command-line front end: insolubility certificates for the four number-field
// families, density sweeps, the exact density table, membership tests,
// database inspection, and the joint-image consistency check.
//
// Exit codes: 0 = certified / consistent, 2 = not certified / inconsistent,
// 1 = error.

#include <CLI11.hpp>
#include <iostream>

#include "h10ec/h10ec.hpp"
#include "h10ec/jsonio.hpp"

using namespace h10ec;

namespace {

std::string default_db_path() {
    if (const char* env = std::getenv("H10EC_DB")) return env;
    for (const char* cand : {"data/curves.db", "../data/curves.db", "../../data/curves.db"}) {
        std::ifstream f(cand);
        if (f) return cand;
    }
    return "data/curves.db";
}

certify::Family parse_family(const std::string& s) {
    if (s == "A" || s == "a") return certify::Family::A;
    if (s == "B" || s == "b") return certify::Family::B;
    if (s == "C" || s == "c") return certify::Family::C;
    if (s == "cong" || s == "Cong") return certify::Family::Cong;
    throw Error("unknown family '" + s + "' (expected A, B, C or cong)");
}

i64 parse_fraction_pair(const std::string& tok, i64& num, i64& den) {
    auto slash = tok.find('/');
    num = std::stoll(tok.substr(0, slash));
    den = slash == std::string::npos ? 1 : std::stoll(tok.substr(slash + 1));
    return 0;
}

certify::WitnessPoint parse_witness(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw Error("--witness expects x,y (each as num or num/den)");
    certify::WitnessPoint w;
    parse_fraction_pair(s.substr(0, comma), w.x_num, w.x_den);
    parse_fraction_pair(s.substr(comma + 1), w.y_num, w.y_den);
    if (w.x_den <= 0 || w.y_den <= 0) throw Error("--witness denominators must be positive");
    return w;
}

/// Smallest prime in the stability set with a vanishing-Selmer certificate.
i64 smallest_stable_prime(const CurveDb& db, const std::vector<std::string>& labels, i64 limit = 1000) {
    PrimeList pl = sieve_primes(limit);
    for (i64 p : pl.primes) {
        for (auto& lbl : labels) {
            const auto& rec = db.get(lbl);
            if (!sieve::in_P(rec, p)) continue;
            if (selmer::rank_stability_certificate(rec, p).selmer_vanishes) return p;
        }
    }
    throw Error("no qualifying p found below " + std::to_string(limit));
}

i64 smallest_q_for(const CurveDb& db, certify::Family fam, i64 D, i64 limit = 10000) {
    PrimeList pl = sieve_primes(limit);
    for (i64 q : pl.primes) {
        switch (fam) {
            case certify::Family::A:
                if (sieve::in_Q_union(db.get("557b1"), {-7, -79, -127}, q, sieve::Sign::Minus)) return q;
                break;
            case certify::Family::B:
                if (sieve::in_Q_single(db.get("704g1"), -D, q, sieve::Sign::Minus)) return q;
                break;
            case certify::Family::C:
                if (sieve::in_Q_two_curves(db.get("704g1"), db.get("1472j1"), -D, q)) return q;
                break;
            case certify::Family::Cong:
                if (certify::find_congruent_witness(q, 2000)) return q;
                break;
        }
    }
    throw Error("no qualifying q found below " + std::to_string(limit));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Insolubility certificates and density experiments for cubic-quadratic number-field families"};
    app.require_subcommand(1);

    std::string db_path = default_db_path();
    app.add_option("--db", db_path, "curve database file")->capture_default_str();

    // ---- certify
    auto* cmd_cert = app.add_subcommand("certify", "assemble an insolubility certificate");
    std::string fam_str;
    i64 opt_p = 0, opt_q = 0, opt_D = 0;
    bool as_json = false, assume_congruent = false;
    std::string witness_str;
    cmd_cert->add_option("--family", fam_str, "family: A, B, C or cong")->required();
    cmd_cert->add_option("--p", opt_p, "prime p for the cubic layer (omit to derive the smallest)");
    cmd_cert->add_option("--q", opt_q, "prime q for the quadratic layer (omit to derive the smallest)");
    cmd_cert->add_option("--D", opt_D, "positive integer D (families B and C)");
    cmd_cert->add_option("--witness", witness_str, "rational point x,y on q y^2 = x^3 - x (family cong)");
    cmd_cert->add_flag("--assume-congruent", assume_congruent, "accept q as congruent without verification (family cong)");
    cmd_cert->add_flag("--json", as_json, "emit JSON");

    // ---- sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "empirical density sweep for a family");
    std::string sw_fam;
    i64 sw_limit = 100000;
    bool sw_csv = false, sw_json = false, sw_series = false, sw_nocache = false;
    std::string cache_dir = ".h10ec-cache";
    cmd_sweep->add_option("--family", sw_fam, "family: A, B, C or cong")->required();
    cmd_sweep->add_option("--limit", sw_limit, "scan primes up to this bound (<= 1e6)")->capture_default_str();
    cmd_sweep->add_option("--D", opt_D, "D parameter for families B/C");
    cmd_sweep->add_flag("--csv", sw_csv, "CSV output");
    cmd_sweep->add_flag("--json", sw_json, "JSON output");
    cmd_sweep->add_flag("--series", sw_series, "append cumulative-density series (plot-ready CSV)");
    cmd_sweep->add_option("--cache-dir", cache_dir, "sweep cache directory")->capture_default_str();
    cmd_sweep->add_flag("--no-cache", sw_nocache, "disable the sweep cache");

    // ---- densities
    auto* cmd_dens = app.add_subcommand("densities", "exact density table for 1..7 auxiliary curves");
    bool d_json = false, d_csv = false;
    cmd_dens->add_flag("--json", d_json, "JSON output");
    cmd_dens->add_flag("--csv", d_csv, "CSV output");

    // ---- member
    auto* cmd_mem = app.add_subcommand("member", "membership test for the sieve prime sets");
    std::string mem_curve;
    i64 mem_p = 0, mem_q = 0, mem_D = 0;
    cmd_mem->add_option("--curve", mem_curve, "curve label")->required();
    cmd_mem->add_option("--p", mem_p, "test p against the rank-stability set");
    cmd_mem->add_option("--q", mem_q, "test q against the rank-jump set (needs --D)");
    cmd_mem->add_option("--D", mem_D, "positive D with K = Q(sqrt(-D)) for the --q test");

    // ---- curvedb
    auto* cmd_db = app.add_subcommand("curvedb", "inspect the curve database");
    auto* cmd_db_show = cmd_db->add_subcommand("show", "print one record or all labels");
    std::string show_curve;
    bool db_json = false;
    cmd_db_show->add_option("--curve", show_curve, "curve label (omit for all labels)");
    cmd_db_show->add_flag("--json", db_json, "JSON output");

    // ---- joint-image
    auto* cmd_ji = app.add_subcommand("joint-image", "Frobenius-statistics check for a pair of curves");
    std::string ji_c1 = "704g1", ji_c2 = "1472j1";
    i64 ji_ell = 3, ji_limit = 10000;
    bool ji_json = false;
    cmd_ji->add_option("--curve", ji_c1, "first curve")->capture_default_str();
    cmd_ji->add_option("--curve2", ji_c2, "second curve")->capture_default_str();
    cmd_ji->add_option("--ell", ji_ell, "residual prime: 2 or 3")->capture_default_str();
    cmd_ji->add_option("--limit", ji_limit, "scan primes up to this bound")->capture_default_str();
    cmd_ji->add_flag("--json", ji_json, "JSON output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_cert->parsed()) {
            CurveDb db = load_db(db_path);
            certify::Family fam = parse_family(fam_str);
            if (opt_p == 0) {
                std::vector<std::string> labels;
                if (fam == certify::Family::A) labels = {"557b1"};
                else if (fam == certify::Family::B) labels = {"704g1"};
                else if (fam == certify::Family::C) labels = {"1472j1", "704g1"};
                else labels = {"32a2"};
                opt_p = smallest_stable_prime(db, labels);
            }
            if (opt_q == 0) {
                i64 D = opt_D;
                if (fam == certify::Family::B && D == 0) throw Error("--D required for family B");
                if (fam == certify::Family::C && D == 0) D = 7;
                opt_q = smallest_q_for(db, fam, D);
            }
            certify::H10Certificate cert;
            switch (fam) {
                case certify::Family::A: cert = certify::certify_family_A(db, opt_p, opt_q); break;
                case certify::Family::B:
                    if (opt_D == 0) throw Error("--D required for family B");
                    cert = certify::certify_family_B(db, opt_p, opt_q, opt_D);
                    break;
                case certify::Family::C:
                    cert = certify::certify_family_C(db, opt_p, opt_q, opt_D ? opt_D : 7);
                    break;
                case certify::Family::Cong: {
                    std::optional<certify::WitnessPoint> w;
                    if (!witness_str.empty()) w = parse_witness(witness_str);
                    cert = certify::certify_family_cong(db, opt_p, opt_q, w, assume_congruent);
                    break;
                }
            }
            if (as_json) std::cout << to_json(cert).dump(2) << "\n";
            else std::cout << cert.to_text();
            return cert.insoluble ? 0 : 2;
        }

        if (cmd_sweep->parsed()) {
            CurveDb db = load_db(db_path);
            certify::Family fam = parse_family(sw_fam);
            std::optional<sieve::SweepCache> cache;
            if (!sw_nocache) cache.emplace(cache_dir);
            auto rep = certify::sweep_report(db, fam, sw_limit, opt_D, cache ? &*cache : nullptr, sw_series);
            if (sw_json) {
                ordered_json j = ordered_json::array();
                for (auto& r : rep.rows) j.push_back(to_json(r));
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << sweep_csv(rep.rows);
                if (sw_series)
                    for (auto& r : rep.rows) std::cout << "\n" << series_csv(r);
            }
            if (!sw_csv && !sw_json) {
                for (auto& r : rep.rows) {
                    auto [emp, exact1] = r.empirical.decimal(6);
                    auto [theo, exact2] = r.theoretical.decimal(6);
                    std::cerr << r.pred.descriptor() << ": empirical " << emp << (exact1 ? "" : "...")
                              << " vs theoretical " << r.theoretical.str() << " = " << theo << (exact2 ? "" : "...")
                              << "\n";
                }
            }
            return 0;
        }

        if (cmd_dens->parsed()) {
            auto rows = certify::emit_density_table();
            if (d_json) {
                ordered_json j = ordered_json::array();
                for (auto& r : rows)
                    j.push_back({{"n", r.n},
                                 {"density", to_json(r.density)},
                                 {"decimal", r.decimal + (r.exact ? "" : "...")}});
                std::cout << j.dump(2) << "\n";
            } else if (d_csv) {
                std::cout << "n,density,decimal\n";
                for (auto& r : rows)
                    std::cout << r.n << "," << r.density.str() << "," << r.decimal << (r.exact ? "" : "...") << "\n";
            } else {
                std::cout << "n   density              decimal\n";
                for (auto& r : rows) {
                    std::string frac = r.density.str();
                    frac.resize(20, ' ');
                    std::cout << r.n << "   " << frac << " " << r.decimal << (r.exact ? "" : "...") << "\n";
                }
            }
            return 0;
        }

        if (cmd_mem->parsed()) {
            CurveDb db = load_db(db_path);
            const auto& rec = db.get(mem_curve);
            if (mem_p != 0) {
                bool in = sieve::in_P(rec, mem_p);
                std::cout << mem_p << (in ? " in " : " not in ") << "P(" << mem_curve << ",3)\n";
                return in ? 0 : 2;
            }
            if (mem_q != 0) {
                if (mem_D == 0) throw Error("member --q needs --D (K = Q(sqrt(-D)))");
                bool in = sieve::in_Q_single(rec, -mem_D, mem_q, sieve::Sign::Minus);
                std::cout << mem_q << (in ? " in " : " not in ") << "Q-(" << mem_curve << ", K=Q(sqrt(-"
                          << mem_D << ")))\n";
                return in ? 0 : 2;
            }
            throw Error("member: pass --p or --q");
        }

        if (cmd_db_show->parsed() || cmd_db->parsed()) {
            CurveDb db = load_db(db_path);
            if (show_curve.empty()) {
                for (auto& [lbl, rec] : db.curves) std::cout << lbl << "\n";
                return 0;
            }
            const auto& rec = db.get(show_curve);
            if (db_json) {
                ordered_json j;
                j["label"] = rec.label;
                j["a_invariants"] = {rec.model.a1, rec.model.a2, rec.model.a3, rec.model.a4, rec.model.a6};
                j["conductor"] = rec.conductor;
                j["discriminant"] = to_string_i128(rec.model.disc);
                j["j_invariant"] = to_string_i128(rec.model.j_num) + "/" + to_string_i128(rec.model.j_den);
                j["rank_Q"] = rec.rank_Q;
                j["two_torsion_trivial"] = rec.two_torsion_trivial;
                j["mod3_image"] = rec.mod3_image == Mod3ImageDecl::CM16 ? "cm16" : "full_gl2";
                j["star_discriminants"] = rec.star_discriminants;
                j["provenance"] = rec.provenance;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "label: " << rec.label << "\n";
                std::cout << "a-invariants: [" << rec.model.a1 << "," << rec.model.a2 << "," << rec.model.a3 << ","
                          << rec.model.a4 << "," << rec.model.a6 << "]\n";
                std::cout << "conductor: " << rec.conductor << "\n";
                std::cout << "discriminant: " << to_string_i128(rec.model.disc) << "\n";
                std::cout << "j-invariant: " << to_string_i128(rec.model.j_num) << "/" << to_string_i128(rec.model.j_den)
                          << "\n";
                std::cout << "rank over Q: " << rec.rank_Q << "\n";
                std::cout << "star discriminants:";
                for (auto d : rec.star_discriminants) std::cout << " " << d;
                std::cout << "\nprovenance: " << rec.provenance << "\n";
            }
            return 0;
        }

        if (cmd_ji->parsed()) {
            CurveDb db = load_db(db_path);
            auto rep = sieve::joint_image_stat(db.get(ji_c1), db.get(ji_c2), ji_ell, ji_limit);
            if (ji_json) {
                std::cout << to_json(rep).dump(2) << "\n";
            } else {
                std::cout << "joint image statistics for (" << ji_c1 << ", " << ji_c2 << ") at ell = " << ji_ell
                          << ", X = " << ji_limit << "\n";
                std::cout << "primes used: " << rep.primes_used << "\n";
                for (auto& [key, cnt] : rep.observed)
                    std::cout << "  (t1=" << key[0] << ", t2=" << key[1] << ", det=" << key[2] << "): " << cnt << "\n";
                std::cout << "predicted pairs: " << rep.predicted.size() << ", missing: " << rep.missing.size()
                          << "\n";
                std::cout << "verdict: " << rep.verdict() << "\n";
                std::cout << "(invariant (trace, det) does not separate scalar from nonsemisimple classes)\n";
            }
            return rep.consistent ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
