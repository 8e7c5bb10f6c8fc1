#pragma once

// The end-to-end decision procedure and its machine-checkable output: a
// certificate records every witness (irreducibility attempts, elimination
// residues, kernel dimensions, the determinant value group) so the verdict
// can be re-derived offline from the certificate plus the newform records.

#include <optional>
#include <string>

#include "certify/fieldinv.hpp"
#include "certify/image.hpp"
#include "certify/oldness.hpp"
#include "certify/witness.hpp"

namespace certify::certificate {

enum class Verdict {
    LARGE_IMAGE,
    POSSIBLY_OLD,
    INCONCLUSIVE_REDUCIBLE_SUSPECTED,
    PRECONDITION_FAILED,
};

const char* verdict_name(Verdict v);
int verdict_exit_code(Verdict v);  // 0 / 2 / 3 / 4

struct CertifyOptions {
    long p = 0;  // 0 = auto: smallest prime exactly dividing N with trivial p-part
    long budget_bits = witness::kDefaultConfidenceBits;
    long test_prime_bound = 200;
    bool force_p_part = false;
};

struct Certificate {
    std::string label;
    ff::u64 ell = 0;
    ff::u64 root = 0;
    long p = 0;  // resolved value
    CertifyOptions options;
    std::string record_digest;  // SHA-256 of the canonical record serialization

    bool p_part_trivial = true;
    std::optional<witness::WitnessOutcome> witness;
    std::optional<oldness::OldnessVerdict> oldness;
    std::optional<image::ImageDescription> image;
    std::optional<std::pair<fieldinv::FieldPrediction, fieldinv::FieldPrediction>> fields;

    Verdict verdict = Verdict::PRECONDITION_FAILED;
    std::string diagnostic;  // populated for PRECONDITION_FAILED
    std::string timestamp;   // excluded from the canonical digest
};

// full pipeline: fetch, preconditions, witness, oldness, image, fields
Certificate certify(const std::string& label, ff::u64 ell, ff::u64 root, store::Store& source,
                    const CertifyOptions& options = {});

// versioned structured text; canonical field order, integers as decimal
// strings; embeds a SHA-256 digest over everything except the timestamp
std::string serialize(const Certificate& cert);

struct VerifyResult {
    bool ok = true;
    std::string first_failure;  // named check, empty when ok
};

// re-derives every recorded check from the certificate + the store; never
// trusts recorded residues without recomputation
VerifyResult verify(const std::string& certificate_text, store::Store& source);

// a level can be skipped in a large-image survey (trivial nebentypus) iff
// some prime divides it exactly once
bool level_skippable(long level, const dirichlet::CharacterDesc& eps);

// SHA-256 of a byte string, lowercase hex
std::string sha256_hex(const std::string& data);

}  // namespace certify::certificate
