#pragma once

// Exact image description once large image is certified: the determinant
// value group Delta = { x^{k-1} eps(x) mod lambda } over (Z/MZ)^x with
// M = lcm(ell, N/p), and G = det^{-1}(Delta) in GL_2(F_ell).

#include <vector>

#include "certify/store.hpp"

namespace certify::image {

using ff::u64;

enum class Projective { PSL, PGL };

struct ImageDescription {
    long M = 0;
    std::vector<u64> delta;  // sorted elements of F_ell^x
    long delta_order = 0;
    nf::Int group_order;     // ell (ell-1)(ell+1) |Delta|
    bool is_full = false;    // G = GL_2(F_ell), i.e. Delta = F_ell^x
    Projective projective = Projective::PGL;
    bool forced_mode = false;
};

// Standard mode (p-part of eps trivial): Delta is the image of
// x -> x^{k-1} eps~(x) over (Z/MZ)^x with eps~ the descent to N/p.
// Forced mode (nontrivial p-part): Delta is generated by the (k-1)-st
// powers of F_ell^x together with the reduced values of eps.
// `large_image_certified` is the caller's assertion that the Theorem's
// conclusion holds; without it the description would be vacuous.
ImageDescription compute_image(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                               long p, bool large_image_certified);

// |G| = ell (ell-1)(ell+1) delta_order; requires delta_order | ell-1
nf::Int group_order(u64 ell, long delta_order);

// exhaustive closure check; throws ValidationFailed when not a subgroup
void verify_subgroup(const std::vector<u64>& delta, u64 ell);

const char* projective_name(Projective p);

}  // namespace certify::image
