#include "certify/witness.hpp"

namespace certify::witness {

const Attempt& WitnessOutcome::witness() const {
    if (!found || attempts.empty()) throw Error("no witness in this outcome");
    return attempts.back();
}

WitnessOutcome find_witness(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                            long budget) {
    if (budget < 1) throw PreconditionFailed("witness budget must be >= 1");
    if (f.level % static_cast<long>(lambda.ell) == 0)
        throw PreconditionFailed("ell divides the level; the method assumes ell coprime to N");
    ff::PrimeField F(lambda.ell);
    WitnessOutcome out;
    for (long r = 2; static_cast<long>(out.attempts.size()) < budget; ++r) {
        if (!ff::is_prime_u64(static_cast<ff::u64>(r))) continue;
        if (f.level % r == 0 || static_cast<ff::u64>(r) == lambda.ell) continue;
        if (!f.has(r))
            throw InsufficientCoefficients(
                "witness search needs a_" + std::to_string(r) + " (record stores " +
                    std::to_string(f.an_bound) + ")",
                r);
        Attempt at;
        at.r = r;
        at.trace = nf::reduce(f.a(r), lambda);
        ff::u64 rk1 = F.pow(F.reduce(r), static_cast<ff::u64>(f.weight - 1));
        at.det = F.mul(rk1, dirichlet::eval_mod_lambda(f.character, r, lambda));
        at.irreducible = ff::quad_irreducible(at.trace, at.det, F);
        out.attempts.push_back(at);
        if (at.irreducible) {
            out.found = true;
            return out;
        }
    }
    out.found = false;
    return out;
}

long default_budget(ff::u64 ell, long confidence_bits) {
    if (!ff::is_prime_u64(ell)) throw PreconditionFailed("ell must be prime");
    if (confidence_bits < 1) throw PreconditionFailed("confidence_bits must be >= 1");
    mpq_class miss;  // 1 - q
    if (ell == 2)
        miss = mpq_class(2, 3);
    else
        miss = mpq_class(ell + 3, 2 * (ell + 1));
    miss.canonicalize();
    mpq_class target(1);
    mpz_class two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(confidence_bits));
    target /= mpq_class(two_pow);
    mpq_class pw(1);
    long B = 0;
    while (pw > target) {
        pw *= miss;
        ++B;
    }
    return B;
}

}  // namespace certify::witness
