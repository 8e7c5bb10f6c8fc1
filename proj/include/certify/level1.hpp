#pragma once

// Level-1 modular forms mod ell: Victor Miller bases built from E_4, E_6
// and Delta, Hecke operator matrices, and the eigensystem occurrence test
// that settles oldness rigorously when the lower level is 1.

#include <optional>
#include <vector>

#include "certify/store.hpp"

namespace certify::level1 {

using ff::u64;

// dim S_k(SL_2(Z)) for even k >= 0; throws OddWeight otherwise
long dim_cusp_level1(long k);

// exact Bernoulli number B_n (B_1 = -1/2 convention)
nf::Rat bernoulli(unsigned n);

// normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n,
// exact rational coefficients, length `prec`
std::vector<nf::Rat> eisenstein_series(long k, long prec);

struct VMBasis {
    long k = 0;       // weight
    u64 ell = 0;
    long dim = 0;     // = dim_cusp_level1(k)
    long prec = 0;
    // forms[j][i] = a_i(g_j) in F_ell; a_i(g_j) = delta_{ij} for 1<=i,j<=dim
    std::vector<std::vector<u64>> forms;
};

// Echelonized basis of S_k(SL_2(Z)) mod ell.  Exact integral construction
// from monomials E_4^a E_6^b Delta^c, reduced mod ell; requires ell >= 5
// (for ell in {2, 3} the weight range of interest has no cusp forms).
VMBasis vm_basis(long k, u64 ell, long prec);

// the same construction over Q, echelonized exactly (integrality checked);
// used as a cross-check oracle for the mod-ell pipeline
std::vector<std::vector<nf::Rat>> vm_basis_exact(long k, long prec);

struct HeckeMatrix {
    long n = 0;  // prime index of T_n
    long k = 0;
    std::vector<std::vector<u64>> m;  // dim x dim, row-major, m[i][j] = a_{i+1}(T_n g_{j+1})
};

// matrix of T_n on the VM coordinate system; needs prec >= n*dim + 1
HeckeMatrix hecke_matrix(const VMBasis& basis, long n);

struct SurvivingSystem {
    long weight = 0;  // k'
    long twist = 0;   // j, the exponent with T_r v = r^j c_r v
    long kernel_dim = 0;
};

struct Level1Report {
    std::vector<SurvivingSystem> survivors;  // empty = rigorous elimination
    // primes r in test_primes that alone eliminate every (k', j) pair
    std::vector<long> uniform_eliminators;
    std::vector<long> test_primes;
    long weight_lo = 0, weight_hi = 0;
};

// For every even weight k' in [12, ell+2] with cusp forms and every twist
// j in [0, ell-2], intersect ker(T_r - r^j c_r Id) over F_ell across the
// test primes, where c_r = a_r(f) mod lambda.  Empty survivors certify
// that no level-1 eigensystem is congruent to f mod lambda (up to twist).
Level1Report eigensystem_occurs(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                                const std::vector<long>& test_primes);

}  // namespace certify::level1
