#include "certify/oldness.hpp"

#include <algorithm>

namespace certify::oldness {

std::vector<long> default_test_primes(const store::NewformRecord& f, ff::u64 ell, long bound) {
    std::vector<long> out;
    for (long n = 2; n <= bound; ++n) {
        if (!ff::is_prime_u64(static_cast<ff::u64>(n))) continue;
        if (static_cast<ff::u64>(n) == ell || f.level % n == 0) continue;
        out.push_back(n);
    }
    return out;
}

CandidateResult eliminate_candidate(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                                    const store::NewformRecord& cand,
                                    const std::vector<long>& test_primes) {
    const ff::u64 ell = lambda.ell;
    ff::PrimeField F(ell);
    CandidateResult res;
    res.candidate_label = cand.label;
    res.primes_checked = test_primes;
    for (long n : test_primes) {
        if (static_cast<ff::u64>(n) == ell || f.level % n == 0)
            throw PreconditionFailed("test prime not coprime to ell*N");
        if (!f.has(n)) throw InsufficientCoefficients("record of f lacks a_n", n);
        if (!cand.has(n)) throw InsufficientCoefficients("candidate record lacks b_n", n);
    }

    // c_n and n^i mod ell are all that matter; i runs over [0, ell-2]
    long period = static_cast<long>(ell) - 1;
    for (long i = 0; i < std::max<long>(period, 1); ++i) {
        bool killed = false;
        for (long n : test_primes) {
            ff::u64 c_n = nf::reduce(f.a(n), lambda);
            ff::u64 scale = F.pow(F.reduce(n), static_cast<ff::u64>(i));
            ff::u64 residue = nf::norm_residue(cand.a(n), scale, c_n, ell, cand.field);
            if (residue != 0) {
                res.kills.push_back({i, n, residue});
                killed = true;
                break;
            }
        }
        if (!killed) res.surviving_twists.push_back(i);
    }
    res.eliminated = res.surviving_twists.empty();
    return res;
}

OldnessVerdict oldness_verdict(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                               long p, store::Store& source, const OldnessOptions& opts) {
    const ff::u64 ell = lambda.ell;
    if (p < 2 || f.level % p != 0)
        throw PreconditionFailed("oldness: p must divide the level");
    if ((f.level / p) % p == 0)
        throw PreconditionFailed("oldness: p^2 divides the level");
    if (!dirichlet::p_part_trivial(f.character, p) && !opts.force_p_part)
        throw PreconditionFailed(
            "oldness: nebentypus has nontrivial p-part (use the override to proceed)");
    if (f.level % static_cast<long>(ell) == 0)
        throw PreconditionFailed("oldness: ell divides the level");

    const long M = f.level / p;
    OldnessVerdict verdict;
    verdict.test_prime_bound = opts.test_prime_bound;
    std::vector<long> primes = default_test_primes(f, ell, opts.test_prime_bound);

    // prefilter primes: those with a_r(f) = 0 mod lambda; a surviving
    // candidate must have ell | Norm(b_r) there (twist-independent)
    std::vector<long> zero_primes;
    for (long r : primes)
        if (nf::reduce(f.a(r), lambda) == 0) zero_primes.push_back(r);
    verdict.prefilter_primes = zero_primes;

    // enumerate divisors of M greater than 1, ascending
    std::vector<long> divisors;
    for (long d = 2; d <= M; ++d)
        if (M % d == 0) divisors.push_back(d);

    bool all_eliminated = true;
    for (long d : divisors) {
        if (d % static_cast<long>(ell) == 0) continue;  // ell | level is impossible for f'
        dirichlet::CharacterDesc chi_d;
        try {
            chi_d = dirichlet::descend(f.character, d);
        } catch (const NoDescent&) {
            // eps does not even descend to this level; no candidate can
            // carry a matching nebentypus
            continue;
        }
        int par = dirichlet::parity(chi_d);
        for (long w = 2; w <= static_cast<long>(ell) + 2; ++w) {
            if ((w % 2 == 0 && par != 1) || (w % 2 == 1 && par != -1)) continue;
            for (auto& cand : source.candidates(d, w, chi_d)) {
                // prefilter (reporting only)
                bool passes = true;
                for (long r : zero_primes)
                    if (cand.has(r) && nf::norm_residue(cand.a(r), 1, 0, ell, cand.field) != 0) {
                        passes = false;
                        break;
                    }
                if (passes) verdict.prefilter_survivors.push_back(cand.label);

                CandidateResult res = eliminate_candidate(f, lambda, cand, primes);
                if (!res.eliminated) {
                    // extend the prime bound by doubling, capped at what
                    // both records can supply
                    long cap = std::min(f.an_bound, cand.an_bound);
                    long bound = opts.test_prime_bound;
                    while (!res.eliminated && bound < cap) {
                        bound = std::min(bound * 2, cap);
                        res = eliminate_candidate(f, lambda, cand,
                                                  default_test_primes(f, ell, bound));
                    }
                }
                if (!res.eliminated) all_eliminated = false;
                verdict.candidates.push_back(std::move(res));
            }
        }
    }
    std::sort(verdict.candidates.begin(), verdict.candidates.end(),
              [](const CandidateResult& a, const CandidateResult& b) {
                  return a.candidate_label < b.candidate_label;
              });
    std::sort(verdict.prefilter_survivors.begin(), verdict.prefilter_survivors.end());

    // the level-1 route (1 always divides M)
    verdict.level1 = level1::eigensystem_occurs(f, lambda, primes);
    if (!verdict.level1->survivors.empty()) all_eliminated = false;

    verdict.not_old = all_eliminated;
    return verdict;
}

}  // namespace certify::oldness
