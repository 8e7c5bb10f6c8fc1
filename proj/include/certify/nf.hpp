#pragma once

// Exact arithmetic in the coefficient field K_f = Q[x]/(m), degree-one
// primes above ell, reduction of eigenvalues, and the resultant-based norm
// divisibility sieve.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "certify/errors.hpp"
#include "certify/ff.hpp"

namespace certify::nf {

using Int = mpz_class;
using Rat = mpq_class;

struct NumberFieldDesc {
    // monic integer polynomial, constant coefficient first
    std::vector<Int> min_poly;

    NumberFieldDesc() = default;
    explicit NumberFieldDesc(std::vector<Int> poly);

    int degree() const { return static_cast<int>(min_poly.size()) - 1; }
    bool operator==(const NumberFieldDesc& o) const { return min_poly == o.min_poly; }
};

// numerator polynomial in beta (constant first, length <= degree) over a
// single positive denominator
struct NFElement {
    std::vector<Int> num;
    Int den = 1;

    static NFElement from_int(long v);
    static NFElement from_int(const Int& v);
    void canonicalize();  // strip trailing zeros, normalize sign/gcd
    bool is_zero() const;
    bool is_rational() const;
    bool operator==(const NFElement& o) const;
};

NFElement nf_add(const NFElement& a, const NFElement& b, const NumberFieldDesc& K);
NFElement nf_sub(const NFElement& a, const NFElement& b, const NumberFieldDesc& K);
NFElement nf_mul(const NFElement& a, const NFElement& b, const NumberFieldDesc& K);
NFElement nf_scale(const NFElement& a, const Int& c);
NFElement nf_pow(const NFElement& a, unsigned long e, const NumberFieldDesc& K);

struct ResiduePrime {
    ff::u64 ell = 0;
    ff::u64 root = 0;
    NumberFieldDesc field;

    std::string str() const;
};

// All degree-one primes (ell, beta - c), one per simple root of min_poly
// mod ell, roots increasing.  Throws IndexObstruction when min_poly is not
// squarefree mod ell (i.e. ell | disc).
std::vector<ResiduePrime> degree_one_primes(const NumberFieldDesc& field, ff::u64 ell);

// numerator(root) / denominator mod ell; DenominatorAtEll when ell | den
ff::u64 reduce(const NFElement& elem, const ResiduePrime& lambda);

// true iff ell | Norm(elem - shift), evaluated as Res_x(m, g - shift) in
// F_ell[x] (m monic, so reduction commutes with the resultant)
bool norm_shifted(const NFElement& elem, const ff::i64 shift, ff::u64 ell,
                  const NumberFieldDesc& field);

// the resultant Res_x(m mod ell, scale * g - shift) itself; zero iff
// ell | Norm(scale * elem - shift).  `scale` and `shift` are taken mod ell.
ff::u64 norm_residue(const NFElement& elem, ff::u64 scale, ff::u64 shift, ff::u64 ell,
                     const NumberFieldDesc& field);

// exact integer norm of (elem * den) ... for tests and the prefilter:
// Norm(elem) as a rational number, via the exact resultant over Q
Rat norm_exact(const NFElement& elem, const NumberFieldDesc& field);

}  // namespace certify::nf
