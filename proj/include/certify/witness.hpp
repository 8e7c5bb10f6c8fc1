#pragma once

// Search for a prime r coprime to ell*N whose Frobenius characteristic
// polynomial x^2 - a_r x + r^{k-1} eps(r) is irreducible mod lambda.  Such
// an r rules out reducible image; failure across the whole budget is only
// grounds for suspicion, never a proof.

#include <vector>

#include "certify/store.hpp"

namespace certify::witness {

struct Attempt {
    long r = 0;
    ff::u64 trace = 0;  // a_r mod lambda
    ff::u64 det = 0;    // r^{k-1} eps(r) mod lambda
    bool irreducible = false;
};

struct WitnessOutcome {
    bool found = false;
    std::vector<Attempt> attempts;  // in increasing r, skipping r | ell N

    // valid only when found; the witness is the last attempt
    const Attempt& witness() const;
};

// Scan primes r coprime to ell*N in increasing order, up to `budget`
// attempts.  Throws InsufficientCoefficients (with the first unavailable r)
// if the record runs out of eigenvalues first.
WitnessOutcome find_witness(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                            long budget);

// Smallest B with (1-q)^B <= 2^{-confidence_bits}, where q is the
// irreducible-charpoly proportion: 1/3 for ell = 2, (ell-1)/(2(ell+1))
// otherwise.  Exact rational arithmetic throughout.
long default_budget(ff::u64 ell, long confidence_bits);

constexpr long kDefaultConfidenceBits = 40;

}  // namespace certify::witness
