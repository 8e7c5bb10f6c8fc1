#pragma once

// Dirichlet characters eps: (Z/NZ)^x -> K_f^x, carried inside the
// coefficient field of the newform that owns them (the databases serialize
// them this way, which pins the root-of-unity embedding).

#include <map>
#include <vector>

#include "certify/nf.hpp"

namespace certify::dirichlet {

struct CharacterDesc {
    long modulus = 1;
    long conductor = 1;  // re-verified at construction
    long order = 1;
    std::vector<long> gens;                // generating set of (Z/NZ)^x
    std::vector<nf::NFElement> gen_values;
    nf::NumberFieldDesc field;             // field carrying the values

    // full value table on (Z/NZ)^x, built at construction by closure
    std::map<long, nf::NFElement> table;

    bool is_trivial() const { return order == 1; }
};

// Builds the table, re-verifies the conductor by divisor descent, verifies
// the order (every value^order = 1, witnessed exactly in K_f) and that the
// gens generate the full unit group.  `claimed_conductor` is a hint only.
CharacterDesc make_character(long modulus, long claimed_conductor, long order,
                             std::vector<long> gens, std::vector<nf::NFElement> values,
                             const nf::NumberFieldDesc& field);

// eps(x) in K_f; NotCoprime when gcd(x, N) > 1
const nf::NFElement& eval(const CharacterDesc& chi, long x);

// eps(x) mod lambda; OrderCollision when order does not divide ell - 1
ff::u64 eval_mod_lambda(const CharacterDesc& chi, long x, const nf::ResiduePrime& lambda);

// true iff p does not divide the (re-verified) conductor; requires p | N
bool p_part_trivial(const CharacterDesc& chi, long p);

// the character mod new_modulus inducing eps; NoDescent if cond does not
// divide new_modulus
CharacterDesc descend(const CharacterDesc& chi, long new_modulus);

// eps(-1), as +1 / -1
int parity(const CharacterDesc& chi);

// same character orbit data (modulus, conductor, order) and, for order <= 2
// where no embedding ambiguity exists, identical values
bool same_character(const CharacterDesc& a, const CharacterDesc& b);

// generators of (Z/nZ)^x (one per prime power factor; n = 1 or 2 -> empty)
std::vector<long> unit_group_gens(long n);

}  // namespace certify::dirichlet
