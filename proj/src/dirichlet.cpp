#include "certify/dirichlet.hpp"

#include <numeric>

namespace certify::dirichlet {

using nf::NFElement;

static long gcd_l(long a, long b) { return std::gcd(a, b); }

static long powmod_l(long b, long e, long m) {
    if (m == 1) return 0;
    long r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = static_cast<long>(static_cast<__int128>(r) * b % m);
        b = static_cast<long>(static_cast<__int128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

std::vector<long> unit_group_gens(long n) {
    if (n <= 2) return {};
    // factor n
    std::vector<std::pair<long, int>> fac;
    long m = n;
    for (long p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            fac.emplace_back(p, e);
        }
    if (m > 1) fac.emplace_back(m, 1);

    // one generating set per prime power, lifted by CRT
    std::vector<long> gens;
    auto crt_lift = [&](long r, long q) {
        // x = r mod q, x = 1 mod n/q
        long rest = n / q;
        for (long x = 1; x <= n; ++x)
            if (x % q == r % q && x % rest == 1 % rest) return x;
        throw Error("unit_group_gens: CRT lift failed");
    };
    for (auto [p, e] : fac) {
        long q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        if (p == 2) {
            if (e >= 2) gens.push_back(crt_lift(q - 1, q));  // -1
            if (e >= 3) gens.push_back(crt_lift(5, q));
        } else {
            // smallest primitive root mod p^e
            long phi = q / p * (p - 1);
            std::vector<long> prime_divs;
            long t = phi;
            for (long d = 2; d * d <= t; ++d)
                if (t % d == 0) {
                    prime_divs.push_back(d);
                    while (t % d == 0) t /= d;
                }
            if (t > 1) prime_divs.push_back(t);
            long g = 0;
            for (long c = 2; c < q; ++c) {
                if (c % p == 0) continue;
                bool ok = true;
                for (long d : prime_divs)
                    if (powmod_l(c, phi / d, q) == 1) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    g = c;
                    break;
                }
            }
            if (g == 0) throw Error("unit_group_gens: no primitive root found");
            gens.push_back(crt_lift(g, q));
        }
    }
    return gens;
}

static long euler_phi(long n) {
    long r = n, m = n;
    for (long p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            r -= r / p;
            while (m % p == 0) m /= p;
        }
    if (m > 1) r -= r / m;
    return r;
}

CharacterDesc make_character(long modulus, long claimed_conductor, long order,
                             std::vector<long> gens, std::vector<nf::NFElement> values,
                             const nf::NumberFieldDesc& field) {
    if (modulus < 1) throw ValidationFailed("character: modulus must be positive");
    if (gens.size() != values.size())
        throw ValidationFailed("character: gens/values length mismatch");
    CharacterDesc chi;
    chi.modulus = modulus;
    chi.order = order;
    chi.gens = gens;
    chi.field = field;
    for (auto& v : values) v.canonicalize();
    chi.gen_values = values;

    const NFElement one = NFElement::from_int(1);
    for (size_t i = 0; i < gens.size(); ++i) {
        long g = ((gens[i] % modulus) + modulus) % modulus;
        if (gcd_l(g, modulus) != 1)
            throw ValidationFailed("character: generator not coprime to modulus");
        if (!(nf_pow(values[i], static_cast<unsigned long>(order), field) == one))
            throw ValidationFailed("character: value^order != 1");
    }

    // value table by closure under the generators
    chi.table[1 % modulus] = one;
    bool grew = true;
    while (grew) {
        grew = false;
        for (size_t i = 0; i < gens.size(); ++i) {
            long g = ((gens[i] % modulus) + modulus) % modulus;
            std::vector<std::pair<long, NFElement>> add;
            for (const auto& [x, v] : chi.table) {
                long y = modulus == 1 ? 0 : static_cast<long>(
                         static_cast<__int128>(x) * g % modulus);
                if (!chi.table.count(y)) add.emplace_back(y, nf_mul(v, values[i], field));
            }
            if (!add.empty()) grew = true;
            for (auto& [y, v] : add) chi.table.emplace(y, std::move(v));
        }
    }
    long phi = modulus == 1 ? 1 : euler_phi(modulus);
    if (static_cast<long>(chi.table.size()) != phi)
        throw ValidationFailed("character: generators do not generate (Z/NZ)^x");

    // the order must be exact: lcm of the orders of the values
    long ord = 1;
    for (const auto& [x, v] : chi.table) {
        (void)x;
        long o = 1;
        NFElement t = v;
        while (!(t == one)) {
            t = nf_mul(t, v, field);
            if (++o > order) throw ValidationFailed("character: value order exceeds claimed order");
        }
        ord = std::lcm(ord, o);
    }
    if (ord != order) throw ValidationFailed("character: claimed order is not the exact order");

    // conductor by divisor descent: smallest c | N with eps = 1 on the
    // kernel of reduction mod c
    long cond = modulus;
    for (long c = 1; c <= modulus; ++c) {
        if (modulus % c != 0) continue;
        bool ok = true;
        for (const auto& [x, v] : chi.table) {
            if (x % c == 1 % c && !(v == one)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            cond = c;
            break;
        }
    }
    chi.conductor = cond;
    if (claimed_conductor != 0 && claimed_conductor != cond)
        throw ValidationFailed("character: claimed conductor " + std::to_string(claimed_conductor) +
                               " != computed " + std::to_string(cond));
    return chi;
}

const NFElement& eval(const CharacterDesc& chi, long x) {
    long N = chi.modulus;
    long r = ((x % N) + N) % N;
    if (N == 1) r = 0;
    if (gcd_l(x % N == 0 && N == 1 ? 1 : r, N) != 1 && N != 1)
        throw NotCoprime("character argument " + std::to_string(x) +
                         " not coprime to modulus " + std::to_string(N));
    auto it = chi.table.find(r);
    if (it == chi.table.end())
        throw NotCoprime("character argument " + std::to_string(x) +
                         " not coprime to modulus " + std::to_string(N));
    return it->second;
}

ff::u64 eval_mod_lambda(const CharacterDesc& chi, long x, const nf::ResiduePrime& lambda) {
    if (chi.order > 1 && (lambda.ell - 1) % static_cast<ff::u64>(chi.order) != 0)
        throw OrderCollision("character order " + std::to_string(chi.order) +
                             " does not divide ell - 1 = " + std::to_string(lambda.ell - 1));
    return nf::reduce(eval(chi, x), lambda);
}

bool p_part_trivial(const CharacterDesc& chi, long p) {
    if (chi.modulus % p != 0)
        throw PreconditionFailed("p_part_trivial: p does not divide the modulus");
    return chi.conductor % p != 0;
}

CharacterDesc descend(const CharacterDesc& chi, long new_modulus) {
    if (new_modulus < 1 || chi.modulus % new_modulus != 0)
        throw NoDescent("descend: new modulus does not divide the old one");
    if (new_modulus % chi.conductor != 0)
        throw NoDescent("descend: conductor " + std::to_string(chi.conductor) +
                        " does not divide " + std::to_string(new_modulus));
    std::vector<long> gens = unit_group_gens(new_modulus);
    std::vector<NFElement> values;
    for (long g : gens) {
        // lift g to a unit mod the old modulus
        long y = g;
        while (gcd_l(y, chi.modulus) != 1) y += new_modulus;
        values.push_back(eval(chi, y));
    }
    long ord = 1;
    const NFElement one = NFElement::from_int(1);
    for (const auto& v : values) {
        long o = 1;
        NFElement t = v;
        while (!(t == one)) {
            t = nf_mul(t, v, chi.field);
            ++o;
        }
        ord = std::lcm(ord, o);
    }
    return make_character(new_modulus, chi.conductor, ord, gens, values, chi.field);
}

int parity(const CharacterDesc& chi) {
    if (chi.modulus <= 2) return 1;
    const NFElement& v = eval(chi, chi.modulus - 1);
    if (v == NFElement::from_int(1)) return 1;
    if (v == NFElement::from_int(-1)) return -1;
    throw ValidationFailed("character: eps(-1) is not +-1");
}

bool same_character(const CharacterDesc& a, const CharacterDesc& b) {
    if (a.modulus != b.modulus || a.conductor != b.conductor || a.order != b.order)
        return false;
    if (a.order <= 2) {
        for (const auto& [x, v] : a.table) {
            auto it = b.table.find(x);
            if (it == b.table.end() || !(v == it->second)) return false;
        }
    }
    return true;
}

}  // namespace certify::dirichlet
