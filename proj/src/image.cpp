#include "certify/image.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace certify::image {

nf::Int group_order(u64 ell, long delta_order) {
    if (delta_order < 1 || (static_cast<long>(ell) - 1) % delta_order != 0)
        throw PreconditionFailed("group_order: delta_order must divide ell - 1");
    nf::Int o = nf::Int(static_cast<unsigned long>(ell));
    o *= static_cast<unsigned long>(ell - 1);
    o *= static_cast<unsigned long>(ell + 1);
    o *= static_cast<unsigned long>(delta_order);
    return o;
}

void verify_subgroup(const std::vector<u64>& delta, u64 ell) {
    ff::PrimeField F(ell);
    std::set<u64> s(delta.begin(), delta.end());
    if (s.size() != delta.size()) throw ValidationFailed("Delta has repeated elements");
    if (!s.count(1)) throw ValidationFailed("Delta does not contain 1");
    for (u64 a : delta) {
        if (a == 0 || a >= ell) throw ValidationFailed("Delta element outside F_ell^x");
        if (!s.count(F.inv(a))) throw ValidationFailed("Delta not closed under inverse");
        for (u64 b : delta)
            if (!s.count(F.mul(a, b))) throw ValidationFailed("Delta not closed under product");
    }
    if ((static_cast<long>(ell) - 1) % static_cast<long>(delta.size()) != 0)
        throw ValidationFailed("|Delta| does not divide ell - 1");
}

namespace {

// subgroup of F_ell^x generated by the given elements
std::vector<u64> generated_subgroup(const std::vector<u64>& gens, const ff::PrimeField& F) {
    std::set<u64> s{1};
    bool grew = true;
    while (grew) {
        grew = false;
        for (u64 g : gens) {
            std::vector<u64> add;
            for (u64 x : s) {
                u64 y = F.mul(x, g);
                if (!s.count(y)) add.push_back(y);
            }
            if (!add.empty()) grew = true;
            s.insert(add.begin(), add.end());
        }
    }
    return {s.begin(), s.end()};
}

constexpr long kEnumerationCap = 10000000;  // direct unit sweep above this is refused

}  // namespace

ImageDescription compute_image(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                               long p, bool large_image_certified) {
    if (!large_image_certified)
        throw PreconditionFailed("compute_image: large image has not been certified");
    const u64 ell = lambda.ell;
    if (p < 2 || f.level % p != 0 || (f.level / p) % p == 0)
        throw PreconditionFailed("compute_image: p must exactly divide the level");
    ff::PrimeField F(ell);

    ImageDescription out;
    out.forced_mode = !dirichlet::p_part_trivial(f.character, p);
    const long Mp = f.level / p;
    out.M = std::lcm(static_cast<long>(ell), Mp);

    if (ell == 2) {
        out.delta = {1};
        out.delta_order = 1;
        out.group_order = group_order(2, 1);
        out.is_full = true;      // GL_2(F_2) = SL_2(F_2)
        out.projective = Projective::PSL;
        verify_subgroup(out.delta, ell);
        return out;
    }

    std::set<u64> delta;
    if (!out.forced_mode) {
        dirichlet::CharacterDesc eps = dirichlet::descend(f.character, Mp);
        if (out.M > kEnumerationCap) {
            // generator fast path: Delta is generated by the images of the
            // unit-group generators of Z/MZ
            std::vector<u64> gens;
            for (long g : dirichlet::unit_group_gens(out.M)) {
                u64 v = F.pow(F.reduce(g), static_cast<u64>(f.weight - 1));
                v = F.mul(v, dirichlet::eval_mod_lambda(eps, g, lambda));
                gens.push_back(v);
            }
            auto sub = generated_subgroup(gens, F);
            delta.insert(sub.begin(), sub.end());
        } else {
            for (long x = 1; x < out.M; ++x) {
                if (std::gcd(x, out.M) != 1) continue;
                u64 v = F.pow(F.reduce(x), static_cast<u64>(f.weight - 1));
                v = F.mul(v, dirichlet::eval_mod_lambda(eps, x, lambda));
                delta.insert(v);
            }
        }
    } else {
        // det rho = chi_ell^{k-1} eps: the value group is generated by the
        // (k-1)-st powers of F_ell^x and the reduced values of eps
        std::vector<u64> gens;
        for (u64 x = 2; x < ell; ++x) gens.push_back(F.pow(x, static_cast<u64>(f.weight - 1)));
        for (const auto& v : f.character.gen_values) gens.push_back(nf::reduce(v, lambda));
        auto sub = generated_subgroup(gens, F);
        delta.insert(sub.begin(), sub.end());
    }

    out.delta.assign(delta.begin(), delta.end());
    std::sort(out.delta.begin(), out.delta.end());
    verify_subgroup(out.delta, ell);
    out.delta_order = static_cast<long>(out.delta.size());
    out.group_order = group_order(ell, out.delta_order);
    out.is_full = (out.delta_order == static_cast<long>(ell) - 1);
    bool all_squares = true;
    for (u64 d : out.delta) all_squares &= ff::is_square(d, F);
    out.projective = all_squares ? Projective::PSL : Projective::PGL;
    return out;
}

const char* projective_name(Projective p) { return p == Projective::PSL ? "PSL" : "PGL"; }

}  // namespace certify::image
