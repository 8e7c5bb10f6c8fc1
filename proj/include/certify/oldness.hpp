#pragma once

// Rigorous elimination of oldness at p.  A congruent lower-level form f'
// would satisfy a_n(f) = n^i b_n(f') mod lambda' for some prime lambda'
// above ell in f''s field and all n coprime to ell*N; then
// ell | Norm(n^i b_n - c_n) for the integer lift c_n of a_n(f) mod lambda.
// One prime n with nonzero norm residue therefore kills (f', i) for every
// possible lambda' at once.

#include <optional>

#include "certify/level1.hpp"
#include "certify/store.hpp"

namespace certify::oldness {

struct TwistKill {
    long twist = 0;         // i in [0, ell-2]
    long n = 0;             // eliminating prime, coprime to ell*N
    ff::u64 residue = 0;    // Res_x(m' mod ell, n^i g_b - c_n) != 0
};

struct CandidateResult {
    std::string candidate_label;
    bool eliminated = false;
    std::vector<TwistKill> kills;          // one per twist when eliminated
    std::vector<long> surviving_twists;    // nonempty when not eliminated
    std::vector<long> primes_checked;
};

struct OldnessVerdict {
    bool not_old = false;
    std::vector<CandidateResult> candidates;  // sorted by label
    // labels passing the cheap norm prefilter (reporting only; the verdict
    // never depends on it)
    std::vector<std::string> prefilter_survivors;
    std::vector<long> prefilter_primes;
    std::optional<level1::Level1Report> level1;  // present when 1 | N/p route ran
    long test_prime_bound = 0;
};

// Sweep all twists i for one candidate over the given test primes.
CandidateResult eliminate_candidate(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                                    const store::NewformRecord& cand,
                                    const std::vector<long>& test_primes);

struct OldnessOptions {
    long test_prime_bound = 200;
    bool force_p_part = false;  // proceed although eps has nontrivial p-part
};

// Full verdict: candidates of every level dividing N/p and weight in
// [2, ell+2] (parity permitting) from the store, plus the level-1
// eigensystem route.  NotOld iff everything is eliminated.
OldnessVerdict oldness_verdict(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                               long p, store::Store& source, const OldnessOptions& opts = {});

// admissible test primes: coprime to ell*N, within `bound`
std::vector<long> default_test_primes(const store::NewformRecord& f, ff::u64 ell, long bound);

}  // namespace certify::oldness
