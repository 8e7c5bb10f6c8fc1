#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "certify/image.hpp"

using namespace certify;
using namespace certify::image;

static store::Store fixtures() { return store::Store(FIXTURES_DIR, "", ""); }

TEST_CASE("level 9099 at (7, sqrt2-3), p = 337: full image") {
    auto st = fixtures();
    auto f = st.get("9099.2.a.g");
    nf::ResiduePrime lam{7, 3, f.field};
    CHECK_THROWS_AS(compute_image(f, lam, 337, false), PreconditionFailed);
    auto im = compute_image(f, lam, 337, true);
    CHECK(im.M == 189);  // lcm(7, 27)
    CHECK_FALSE(im.forced_mode);
    CHECK(im.delta == std::vector<ff::u64>{1, 2, 3, 4, 5, 6});
    CHECK(im.delta_order == 6);
    CHECK(im.is_full);
    CHECK(im.projective == Projective::PGL);
    CHECK(im.group_order == nf::Int(2016));  // |GL_2(F_7)|
}

TEST_CASE("level 71 at (41, beta-11), p = 71: index-2 image, PSL") {
    auto st = fixtures();
    auto f = st.get("71.3.b.a");
    nf::ResiduePrime lam{41, 11, f.field};
    auto im = compute_image(f, lam, 71, true);
    CHECK(im.forced_mode);  // quadratic nebentypus of conductor 71
    // Delta = squares: (k-1)-st = 2nd powers of F_41^x, and eps takes
    // values +-1 with -1 = 40 a square mod 41
    ff::PrimeField F(41);
    std::vector<ff::u64> squares;
    for (ff::u64 x = 1; x < 41; ++x)
        if (ff::is_square(x, F)) squares.push_back(x);
    CHECK(im.delta == squares);
    CHECK(im.delta_order == 20);
    CHECK_FALSE(im.is_full);
    CHECK(im.projective == Projective::PSL);
    CHECK(im.group_order == nf::Int(1377600));
}

TEST_CASE("group order oracles") {
    CHECK(group_order(7, 6) == nf::Int(2016));
    CHECK(group_order(41, 20) == nf::Int(1377600));
    CHECK(group_order(2, 1) == nf::Int(6));  // GL_2(F_2) = S_3

    // brute-force count of invertible 2x2 matrices over F_3
    long count = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                    if ((a * d - b * c) % 3 != 0) ++count;
    CHECK(count == 48);
    CHECK(group_order(3, 2) == nf::Int(count));

    CHECK_THROWS_AS(group_order(7, 4), PreconditionFailed);  // 4 does not divide 6
}

TEST_CASE("projective names") {
    CHECK(std::string(projective_name(Projective::PSL)) == "PSL");
    CHECK(std::string(projective_name(Projective::PGL)) == "PGL");
}

TEST_CASE("property: cyclic subgroups verify, punctured sets do not") {
    std::mt19937_64 rng(20240817);
    const std::vector<ff::u64> ells = {3, 5, 7, 11, 13, 41, 101, 257, 1009};
    int cases = 0;
    while (cases < 1200) {
        ff::u64 ell = ells[rng() % ells.size()];
        ff::PrimeField F(ell);
        ff::u64 g = 1 + rng() % (ell - 1);
        std::set<ff::u64> sub;
        ff::u64 x = 1;
        do {
            sub.insert(x);
            x = F.mul(x, g);
        } while (x != 1);
        std::vector<ff::u64> delta(sub.begin(), sub.end());
        CHECK_NOTHROW(verify_subgroup(delta, ell));
        // (dropping the sole non-identity element of a 2-element group
        // leaves {1}, still a subgroup, so puncture only larger groups)
        if (delta.size() > 2) {
            // drop one non-identity element: closure must now fail
            std::vector<ff::u64> bad;
            size_t victim = 1 + rng() % (delta.size() - 1);
            for (size_t i = 0; i < delta.size(); ++i)
                if (i != victim) bad.push_back(delta[i]);
            CHECK_THROWS_AS(verify_subgroup(bad, ell), ValidationFailed);
        }
        ++cases;
    }
    CHECK(cases >= 1000);
}

TEST_CASE("property: Delta order divides ell - 1 and contains det of Frobenius") {
    // for the certified example, every r^{k-1} eps(r) mod lambda with
    // r coprime to ell N must land inside the computed Delta
    auto st = fixtures();
    auto f = st.get("9099.2.a.g");
    nf::ResiduePrime lam{7, 3, f.field};
    auto im = compute_image(f, lam, 337, true);
    std::set<ff::u64> delta(im.delta.begin(), im.delta.end());
    ff::PrimeField F(7);
    for (long r = 2; r < 300; ++r) {
        if (!ff::is_prime_u64(static_cast<ff::u64>(r))) continue;
        if (r == 7 || f.level % r == 0) continue;
        ff::u64 det = F.mul(F.pow(F.reduce(r), static_cast<ff::u64>(f.weight - 1)),
                            dirichlet::eval_mod_lambda(f.character, r, lam));
        CHECK(delta.count(det) == 1);
    }
    CHECK((7 - 1) % im.delta_order == 0);
}
