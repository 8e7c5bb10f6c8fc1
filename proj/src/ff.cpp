#include "certify/ff.hpp"

#include <algorithm>

namespace certify::ff {

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 m) {
    // m prime
    if (a % m == 0) throw Error("invmod: zero element");
    return powmod(a % m, m - 2, m);
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // deterministic bases for n < 2^64
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(u64 modulus) : p_(modulus) {
    if (!is_prime_u64(modulus))
        throw PreconditionFailed("PrimeField: modulus " + std::to_string(modulus) + " is not prime");
    if (modulus >> 31)
        throw PreconditionFailed("PrimeField: modulus exceeds the word-sized regime");
}

u64 PrimeField::inv(u64 a) const {
    if (a % p_ == 0) throw Error("PrimeField::inv of zero");
    return powmod(a, p_ - 2, p_);
}

void FFPoly::normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

FFPoly poly_from(const std::vector<i64>& coeffs, const PrimeField& F) {
    FFPoly out;
    out.c.reserve(coeffs.size());
    for (i64 v : coeffs) out.c.push_back(F.reduce(v));
    out.normalize();
    return out;
}

FFPoly poly_add(const FFPoly& a, const FFPoly& b, const PrimeField& F) {
    FFPoly out;
    out.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < out.c.size(); ++i) {
        u64 x = i < a.c.size() ? a.c[i] : 0;
        u64 y = i < b.c.size() ? b.c[i] : 0;
        out.c[i] = F.add(x, y);
    }
    out.normalize();
    return out;
}

FFPoly poly_sub(const FFPoly& a, const FFPoly& b, const PrimeField& F) {
    FFPoly out;
    out.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < out.c.size(); ++i) {
        u64 x = i < a.c.size() ? a.c[i] : 0;
        u64 y = i < b.c.size() ? b.c[i] : 0;
        out.c[i] = F.sub(x, y);
    }
    out.normalize();
    return out;
}

FFPoly poly_mul(const FFPoly& a, const FFPoly& b, const PrimeField& F) {
    if (a.is_zero() || b.is_zero()) return {};
    FFPoly out;
    out.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            out.c[i + j] = F.add(out.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    out.normalize();
    return out;
}

FFPoly poly_rem(const FFPoly& a, const FFPoly& b, const PrimeField& F) {
    if (b.is_zero()) throw Error("poly_rem: division by zero polynomial");
    FFPoly r = a;
    u64 lead_inv = F.inv(b.c.back());
    while (!r.is_zero() && r.degree() >= b.degree()) {
        u64 q = F.mul(r.c.back(), lead_inv);
        size_t shift = r.c.size() - b.c.size();
        for (size_t i = 0; i < b.c.size(); ++i)
            r.c[shift + i] = F.sub(r.c[shift + i], F.mul(q, b.c[i]));
        r.normalize();
    }
    return r;
}

FFPoly poly_gcd(FFPoly a, FFPoly b, const PrimeField& F) {
    while (!b.is_zero()) {
        FFPoly r = poly_rem(a, b, F);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) {
        u64 inv = F.inv(a.c.back());
        for (u64& v : a.c) v = F.mul(v, inv);
    }
    return a;
}

FFPoly poly_derivative(const FFPoly& a, const PrimeField& F) {
    FFPoly out;
    for (size_t i = 1; i < a.c.size(); ++i)
        out.c.push_back(F.mul(a.c[i], i % F.modulus()));
    out.normalize();
    return out;
}

u64 poly_eval(const FFPoly& a, u64 x, const PrimeField& F) {
    u64 acc = 0;
    for (size_t i = a.c.size(); i-- > 0;) acc = F.add(F.mul(acc, x), a.c[i]);
    return acc;
}

static FFPoly poly_powmod(FFPoly base, u64 e, const FFPoly& mod, const PrimeField& F) {
    FFPoly r;
    r.c = {1};
    base = poly_rem(base, mod, F);
    while (e) {
        if (e & 1) r = poly_rem(poly_mul(r, base, F), mod, F);
        base = poly_rem(poly_mul(base, base, F), mod, F);
        e >>= 1;
    }
    return r;
}

FFPoly poly_powmod_x(const FFPoly& f, u64 exponent_base, unsigned exponent_steps,
                     const PrimeField& F) {
    FFPoly x;
    x.c = {0, 1};
    FFPoly acc = poly_rem(x, f, F);
    for (unsigned i = 0; i < exponent_steps; ++i) acc = poly_powmod(acc, exponent_base, f, F);
    return acc;
}

u64 poly_resultant(FFPoly a, FFPoly b, const PrimeField& F) {
    // Euclidean resultant; Res(a,b) with standard sign/leading bookkeeping.
    if (a.is_zero() || b.is_zero()) return 0;
    u64 res = 1;
    while (true) {
        if (b.degree() == 0) {
            res = F.mul(res, F.pow(b.c[0], a.degree()));
            return res;
        }
        FFPoly r = poly_rem(a, b, F);
        if (r.is_zero()) return 0;
        // Res(a,b) = (-1)^(deg a * deg b) * lc(b)^(deg a - deg r) * Res(b, r)
        u64 sign = (static_cast<u64>(a.degree()) * b.degree()) % 2;
        u64 factor = F.pow(b.c.back(), a.degree() - r.degree());
        res = F.mul(res, factor);
        if (sign && F.modulus() != 2) res = F.mul(res, F.modulus() - 1);
        a = std::move(b);
        b = std::move(r);
    }
}

bool is_square(u64 a, const PrimeField& F) {
    u64 p = F.modulus();
    if (p == 2) return true;
    a %= p;
    if (a == 0) return true;
    return F.pow(a, (p - 1) / 2) == 1;
}

bool quad_irreducible(u64 t, u64 d, const PrimeField& F) {
    u64 p = F.modulus();
    t %= p;
    d %= p;
    if (p == 2) {
        // brute force: x^2 - t x + d = x^2 + t x + d over F_2
        for (u64 x = 0; x < 2; ++x)
            if ((x * x + t * x + d) % 2 == 0) return false;
        return true;
    }
    u64 disc = F.sub(F.mul(t, t), F.mul(4 % p, d));
    if (disc == 0) return false;  // double root
    return !is_square(disc, F);
}

std::map<int, int> factor_degree_pattern(const std::vector<i64>& poly, u64 r) {
    PrimeField F(r);
    return factor_degree_pattern(poly_from(poly, F), F);
}

std::map<int, int> factor_degree_pattern(const FFPoly& poly, const PrimeField& F) {
    const u64 r = F.modulus();
    FFPoly f = poly;
    if (f.degree() < 1) throw Error("factor_degree_pattern: constant polynomial");
    {
        u64 inv = F.inv(f.c.back());
        for (u64& v : f.c) v = F.mul(v, inv);
    }
    FFPoly fp = poly_derivative(f, F);
    FFPoly g = poly_gcd(f, fp, F);
    if (g.degree() != 0)
        throw NotSquarefree("polynomial is not squarefree mod " + std::to_string(r));

    std::map<int, int> pattern;
    FFPoly x;
    x.c = {0, 1};
    FFPoly h = poly_rem(x, f, F);  // x^(r^d) mod f, iterated
    FFPoly rest = f;
    for (int d = 1; rest.degree() > 0; ++d) {
        if (2 * d > rest.degree()) {
            // the remainder is irreducible
            pattern[rest.degree()] += 1;
            break;
        }
        // advance h = h^r mod f  (Frobenius step)
        FFPoly hf = h;
        FFPoly acc;
        acc.c = {1};
        u64 e = r;
        while (e) {
            if (e & 1) acc = poly_rem(poly_mul(acc, hf, F), f, F);
            hf = poly_rem(poly_mul(hf, hf, F), f, F);
            e >>= 1;
        }
        h = acc;
        FFPoly hx = poly_sub(h, x, F);
        FFPoly d_part = poly_gcd(rest, poly_rem(hx, rest, F), F);
        if (d_part.degree() > 0) {
            if (d_part.degree() % d != 0)
                throw Error("distinct-degree splitting produced an impossible degree");
            pattern[d] += d_part.degree() / d;
            // rest /= d_part via repeated remainder-free division
            FFPoly q;
            {
                // exact division: rest = q * d_part
                FFPoly num = rest;
                q.c.assign(num.c.size() - d_part.c.size() + 1, 0);
                u64 lead_inv = F.inv(d_part.c.back());
                while (!num.is_zero() && num.degree() >= d_part.degree()) {
                    u64 qc = F.mul(num.c.back(), lead_inv);
                    size_t shift = num.c.size() - d_part.c.size();
                    q.c[shift] = qc;
                    for (size_t i = 0; i < d_part.c.size(); ++i)
                        num.c[shift + i] = F.sub(num.c[shift + i], F.mul(qc, d_part.c[i]));
                    num.normalize();
                }
                if (!num.is_zero()) throw Error("exact division failed in degree splitting");
            }
            rest = q;
            rest.normalize();
        }
    }
    return pattern;
}

}  // namespace certify::ff
