#pragma once

// JSON views of certificates and reports. Key order is fixed (insertion
// order) so that identical inputs serialize byte-identically.

#include <json.hpp>

#include "certify.hpp"

namespace h10ec {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const Rational& r) {
    return ordered_json{{"num", r.num}, {"den", r.den}, {"str", r.str()}};
}

inline ordered_json to_json(const selmer::Premise& p) {
    ordered_json j;
    j["name"] = p.name;
    j["source"] = p.source;
    j["holds"] = p.holds;
    if (!p.detail.empty()) j["detail"] = p.detail;
    return j;
}

inline ordered_json to_json(const selmer::StabilityCertificate& c) {
    ordered_json j;
    j["schema"] = "h10ec.stability-certificate/1";
    j["curve"] = c.label;
    j["kummer_integer"] = c.a;
    j["ell"] = c.ell;
    j["premises"] = ordered_json::array();
    for (auto& p : c.premises) j["premises"].push_back(to_json(p));
    j["places"] = ordered_json::array();
    for (auto& row : c.places) {
        ordered_json pj;
        pj["r"] = row.place.r;
        pj["q_v"] = row.place.q_v;
        pj["places_above"] = row.place.places_above;
        pj["splitting"] = selmer::splitting_name(row.place.splitting);
        pj["reduction"] = selmer::place_reduction_name(row.place.reduction);
        pj["tamagawa"] = row.place.tamagawa;
        pj["residual_torsion_dim"] = row.place.residual_torsion_dim;
        if (row.delta.ambiguous) pj["delta"] = "ambiguous";
        else pj["delta"] = row.delta.value;
        pj["contribution"] = row.contribution;
        j["places"].push_back(pj);
    }
    j["total"] = c.total;
    j["verdict"] = c.selmer_vanishes ? "SELMER_VANISHES" : "INCONCLUSIVE";
    if (!c.failure.empty()) j["reason"] = c.failure;
    return j;
}

inline ordered_json to_json(const certify::H10Certificate& c) {
    ordered_json j;
    j["schema"] = "h10ec.certificate/1";
    j["family"] = certify::family_name(c.family);
    j["field"] = c.field_description;
    ordered_json inputs;
    inputs["p"] = c.p;
    inputs["q"] = c.q;
    if (c.D) inputs["D"] = c.D;
    j["inputs"] = inputs;
    j["curves"] = c.curve_labels;
    if (!c.certifying_curve.empty()) j["certifying_curve"] = c.certifying_curve;
    j["premises"] = ordered_json::array();
    for (auto& p : c.ledger) j["premises"].push_back(to_json(p));
    j["stability_certificates"] = ordered_json::array();
    for (auto& sc : c.stability) j["stability_certificates"].push_back(to_json(sc));
    j["theorem_chain"] = c.theorem_chain;
    j["verdict"] = c.insoluble ? "INSOLUBLE" : "NOT_CERTIFIED";
    if (!c.reason.empty()) j["reason"] = c.reason;
    return j;
}

inline ordered_json to_json(const sieve::DensityEstimate& d) {
    ordered_json j;
    j["predicate"] = d.pred.descriptor();
    j["X"] = d.X;
    j["hits"] = d.hits;
    j["scanned"] = d.primes_scanned;
    j["empirical"] = to_json(d.empirical);
    j["theoretical"] = to_json(d.theoretical);
    j["deviation"] = to_json(d.abs_deviation);
    if (!d.series.empty()) {
        j["series"] = ordered_json::array();
        for (auto& s : d.series) j["series"].push_back({{"X", s[0]}, {"hits", s[1]}, {"scanned", s[2]}});
    }
    return j;
}

inline ordered_json to_json(const sieve::JointImageReport& r) {
    ordered_json j;
    j["ell"] = r.ell;
    j["X"] = r.X;
    j["primes_used"] = r.primes_used;
    j["observed"] = ordered_json::array();
    for (auto& [key, cnt] : r.observed)
        j["observed"].push_back({{"t1", key[0]}, {"t2", key[1]}, {"det", key[2]}, {"count", cnt}});
    j["predicted_pairs"] = r.predicted.size();
    j["missing"] = ordered_json::array();
    for (auto& m : r.missing) j["missing"].push_back({{"t1", m[0]}, {"t2", m[1]}, {"det", m[2]}});
    j["det_incompatible_seen"] = r.det_incompatible_seen;
    j["verdict"] = r.verdict();
    j["note"] = "class invariant is (trace, det) mod ell; scalar and nonsemisimple classes are not separated";
    return j;
}

/// CSV row set for sweep output: fixed header, exact rationals as fractions.
inline std::string sweep_csv(const std::vector<sieve::DensityEstimate>& rows) {
    std::ostringstream os;
    os << "predicate,X,hits,scanned,empirical,theoretical,deviation\n";
    for (auto& d : rows)
        os << d.pred.descriptor() << "," << d.X << "," << d.hits << "," << d.primes_scanned << ","
           << d.empirical.str() << "," << d.theoretical.str() << "," << d.abs_deviation.str() << "\n";
    return os.str();
}

inline std::string series_csv(const sieve::DensityEstimate& d) {
    std::ostringstream os;
    os << "predicate,X,hits,scanned\n";
    for (auto& s : d.series) os << d.pred.descriptor() << "," << s[0] << "," << s[1] << "," << s[2] << "\n";
    return os.str();
}

}  // namespace h10ec
