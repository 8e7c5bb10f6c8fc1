#pragma once

// Exact arithmetic in prime fields F_ell for word-sized ell, plus the small
// amount of polynomial machinery the pipeline needs: quadratic
// irreducibility, square detection, and distinct-degree factor patterns.

#include <cstdint>
#include <map>
#include <vector>

#include "certify/errors.hpp"

namespace certify::ff {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime_u64(u64 n);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
u64 invmod(u64 a, u64 m);  // m prime, a != 0 mod m

class PrimeField {
   public:
    explicit PrimeField(u64 modulus);

    u64 modulus() const { return p_; }
    u64 reduce(i64 x) const {
        i64 r = x % static_cast<i64>(p_);
        return r < 0 ? r + p_ : r;
    }
    u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p_ ? s - p_ : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
    u64 mul(u64 a, u64 b) const { return mulmod(a, b, p_); }
    u64 neg(u64 a) const { return a == 0 ? 0 : p_ - a; }
    u64 inv(u64 a) const;
    u64 pow(u64 a, u64 e) const { return powmod(a, e, p_); }

   private:
    u64 p_;
};

// Polynomials over F_ell, coefficients lowest-degree first, no trailing
// zeros (the zero polynomial is the empty vector).
struct FFPoly {
    std::vector<u64> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c.empty(); }
    void normalize();
};

FFPoly poly_from(const std::vector<i64>& coeffs, const PrimeField& F);
FFPoly poly_add(const FFPoly& a, const FFPoly& b, const PrimeField& F);
FFPoly poly_sub(const FFPoly& a, const FFPoly& b, const PrimeField& F);
FFPoly poly_mul(const FFPoly& a, const FFPoly& b, const PrimeField& F);
FFPoly poly_rem(const FFPoly& a, const FFPoly& b, const PrimeField& F);
FFPoly poly_gcd(FFPoly a, FFPoly b, const PrimeField& F);  // monic output
FFPoly poly_derivative(const FFPoly& a, const PrimeField& F);
// x^(r^e) mod f computed by repeated frobenius powering
FFPoly poly_powmod_x(const FFPoly& f, u64 exponent_base, unsigned exponent_steps,
                     const PrimeField& F);
u64 poly_eval(const FFPoly& a, u64 x, const PrimeField& F);
// resultant Res(a, b) over F_ell (used by the norm sieve)
u64 poly_resultant(FFPoly a, FFPoly b, const PrimeField& F);

// true iff a is a square in F_ell (0 counts as a square; ell = 2 trivial)
bool is_square(u64 a, const PrimeField& F);

// true iff x^2 - t x + d has no root in F_ell
bool quad_irreducible(u64 t, u64 d, const PrimeField& F);

// Degrees of the irreducible factors of poly mod r as a multiset
// (degree -> multiplicity), by distinct-degree splitting.  Throws
// NotSquarefree if poly mod r is not squarefree.
std::map<int, int> factor_degree_pattern(const std::vector<i64>& poly, u64 r);
std::map<int, int> factor_degree_pattern(const FFPoly& poly, const PrimeField& F);

}  // namespace certify::ff
