#pragma once

// Predicted invariants of the fields cut out by the residual representation:
// k of degree ell+1 (fixed field of a Borel ... point stabilizer) and its
// Galois-closure companion K of degree ell^2-1, together with the
// Frobenius-trace search filters they induce on candidate polynomials.

#include <optional>
#include <string>
#include <utility>

#include "certify/image.hpp"

namespace certify::fieldinv {

struct Signature {
    long real_embeddings = 0;
    long complex_pairs = 0;
};

struct FieldPrediction {
    long degree = 0;
    std::optional<Signature> signature;  // absent for ell = 2
    std::vector<long> ramified_within;   // primes dividing ell * N, ascending
    long p_exponent = 0;                 // exponent of p in the discriminant
    bool tame_at_p = true;
    image::Projective galois_closure_group = image::Projective::PGL;
    std::vector<std::string> notes;
};

struct FrobFilter {
    long r = 0;
    bool a_r_zero = false;
    // active iff a_r_zero: T_k mod r factors only in degrees 1 and 2 with
    // at least one degree-2 factor (Frob_r has order exactly 2 in the
    // projective image)
    bool pattern_active = false;
};

struct PolyCheck {
    bool compatible = true;
    long witness = 0;  // first prime violating the pattern, when incompatible
};

// closed-form shapes (degree, signature, p-exponent); ell odd for signatures
long k_degree(ff::u64 ell);
long K_degree(ff::u64 ell);
Signature k_signature(ff::u64 ell);
Signature K_signature(ff::u64 ell);
long k_p_exponent(ff::u64 ell);
long K_p_exponent(ff::u64 ell);

// predictions for (k, K); requires the image of a certified run
std::pair<FieldPrediction, FieldPrediction> predict_fields(const store::NewformRecord& f,
                                                           const nf::ResiduePrime& lambda, long p,
                                                           const image::ImageDescription& image);

// the trace-zero filter at one prime r coprime to ell * N
FrobFilter frob_filter(const store::NewformRecord& f, const nf::ResiduePrime& lambda, long r);

// screen a candidate minimal polynomial for k (degree ell+1, constant
// first) against every zero-trace prime r <= prime_bound, skipping primes
// dividing ell * N * disc
PolyCheck check_candidate_poly(const std::vector<ff::i64>& t_k, const store::NewformRecord& f,
                               const nf::ResiduePrime& lambda, long prime_bound);

// search-filter document for number-field databases (structured text, same
// conventions as certificates: canonical order, integers as decimal strings)
std::string search_filter_document(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                                   const FieldPrediction& pred, long prime_bound);

}  // namespace certify::fieldinv
