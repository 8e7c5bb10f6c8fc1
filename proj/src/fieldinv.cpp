#include "certify/fieldinv.hpp"

#include <json.hpp>

#include <algorithm>

namespace certify::fieldinv {

long k_degree(ff::u64 ell) { return static_cast<long>(ell) + 1; }
long K_degree(ff::u64 ell) {
    long l = static_cast<long>(ell);
    return l * l - 1;
}

Signature k_signature(ff::u64 ell) {
    if (ell == 2) throw PreconditionFailed("no signature prediction at ell = 2");
    return {2, (static_cast<long>(ell) - 1) / 2};
}

Signature K_signature(ff::u64 ell) {
    if (ell == 2) throw PreconditionFailed("no signature prediction at ell = 2");
    long l = static_cast<long>(ell);
    return {l - 1, l * (l - 1) / 2};
}

long k_p_exponent(ff::u64 ell) { return static_cast<long>(ell) - 1; }
long K_p_exponent(ff::u64 ell) {
    long l = static_cast<long>(ell) - 1;
    return l * l;
}

namespace {

std::vector<long> prime_divisors_of_ellN(ff::u64 ell, long N) {
    std::vector<long> out;
    long n = N * static_cast<long>(ell);
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::pair<FieldPrediction, FieldPrediction> predict_fields(const store::NewformRecord& f,
                                                           const nf::ResiduePrime& lambda, long p,
                                                           const image::ImageDescription& image) {
    const ff::u64 ell = lambda.ell;
    if (p < 2 || f.level % p != 0 || (f.level / p) % p == 0)
        throw PreconditionFailed("predict_fields: p must exactly divide the level");
    if (f.level % static_cast<long>(ell) == 0)
        throw PreconditionFailed("predict_fields: ell divides the level");

    auto ramified = prime_divisors_of_ellN(ell, f.level);
    const std::string wild_note =
        "ramification at ell is probably wild; the exponent of ell in the discriminant "
        "is not predicted";
    const std::string tame_note = "ramification at p is tame; the p-exponent assumes tameness";

    FieldPrediction k;
    k.degree = k_degree(ell);
    if (ell != 2) k.signature = k_signature(ell);
    k.ramified_within = ramified;
    k.p_exponent = k_p_exponent(ell);
    k.tame_at_p = true;
    k.galois_closure_group = image.projective;
    k.notes = {wild_note, tame_note};

    FieldPrediction K;
    K.degree = K_degree(ell);
    if (ell != 2) K.signature = K_signature(ell);
    K.ramified_within = ramified;
    K.p_exponent = K_p_exponent(ell);
    K.tame_at_p = true;
    K.galois_closure_group = image.projective;
    K.notes = {wild_note, tame_note, "the primes above p do not ramify in the extension K/k"};

    return {k, K};
}

FrobFilter frob_filter(const store::NewformRecord& f, const nf::ResiduePrime& lambda, long r) {
    if (r < 2 || !ff::is_prime_u64(static_cast<ff::u64>(r)))
        throw PreconditionFailed("frob_filter: r must be prime");
    if (static_cast<ff::u64>(r) == lambda.ell || f.level % r == 0)
        throw PreconditionFailed("frob_filter: r must be coprime to ell * N");
    FrobFilter out;
    out.r = r;
    out.a_r_zero = (nf::reduce(f.a(r), lambda) == 0);
    out.pattern_active = out.a_r_zero;
    return out;
}

PolyCheck check_candidate_poly(const std::vector<ff::i64>& t_k, const store::NewformRecord& f,
                               const nf::ResiduePrime& lambda, long prime_bound) {
    const ff::u64 ell = lambda.ell;
    if (static_cast<long>(t_k.size()) != k_degree(ell) + 1)
        throw PreconditionFailed("check_candidate_poly: degree must be ell + 1");
    PolyCheck out;
    for (long r = 2; r <= prime_bound; ++r) {
        if (!ff::is_prime_u64(static_cast<ff::u64>(r))) continue;
        if (static_cast<ff::u64>(r) == ell || f.level % r == 0) continue;
        if (nf::reduce(f.a(r), lambda) != 0) continue;
        std::map<int, int> pattern;
        try {
            pattern = ff::factor_degree_pattern(t_k, static_cast<ff::u64>(r));
        } catch (const NotSquarefree&) {
            continue;  // r | disc(T_k): the pattern argument does not apply
        }
        bool has_two = pattern.count(2) > 0;
        bool only_small = true;
        for (const auto& [deg, mult] : pattern) {
            (void)mult;
            if (deg > 2) only_small = false;
        }
        if (!only_small || !has_two) {
            out.compatible = false;
            out.witness = r;
            return out;
        }
    }
    return out;
}

std::string search_filter_document(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                                   const FieldPrediction& pred, long prime_bound) {
    nlohmann::ordered_json doc;
    doc["schema"] = "field-search-filter/1";
    doc["label"] = f.label;
    doc["ell"] = std::to_string(lambda.ell);
    doc["degree"] = std::to_string(pred.degree);
    if (pred.signature) {
        doc["signature"] = {std::to_string(pred.signature->real_embeddings),
                            std::to_string(pred.signature->complex_pairs)};
    }
    nlohmann::ordered_json ram = nlohmann::ordered_json::array();
    for (long q : pred.ramified_within) ram.push_back(std::to_string(q));
    doc["ramified_within"] = ram;
    doc["p_exponent"] = std::to_string(pred.p_exponent);
    doc["group"] = std::string(image::projective_name(pred.galois_closure_group)) + "2(F_" +
                   std::to_string(lambda.ell) + ")";
    nlohmann::ordered_json cons = nlohmann::ordered_json::array();
    for (long r = 2; r <= prime_bound; ++r) {
        if (!ff::is_prime_u64(static_cast<ff::u64>(r))) continue;
        if (static_cast<ff::u64>(r) == lambda.ell || f.level % r == 0) continue;
        if (!f.has(r)) break;
        FrobFilter filt = frob_filter(f, lambda, r);
        if (!filt.pattern_active) continue;
        nlohmann::ordered_json c;
        c["r"] = std::to_string(r);
        c["pattern"] = "degrees in {1,2}, at least one 2";
        cons.push_back(c);
    }
    doc["frob_constraints"] = cons;
    for (const auto& n : pred.notes) doc["notes"].push_back(n);
    return doc.dump(1) + "\n";
}

}  // namespace certify::fieldinv
