#include "certify/nf.hpp"

#include <algorithm>
#include <sstream>

namespace certify::nf {

NumberFieldDesc::NumberFieldDesc(std::vector<Int> poly) : min_poly(std::move(poly)) {
    if (min_poly.size() < 2)
        throw ValidationFailed("number field: min_poly must have degree >= 1");
    if (min_poly.back() != 1)
        throw ValidationFailed("number field: min_poly must be monic");
}

NFElement NFElement::from_int(long v) { return from_int(Int(v)); }

NFElement NFElement::from_int(const Int& v) {
    NFElement e;
    if (v != 0) e.num.push_back(v);
    e.den = 1;
    return e;
}

void NFElement::canonicalize() {
    while (!num.empty() && num.back() == 0) num.pop_back();
    if (num.empty()) {
        den = 1;
        return;
    }
    if (den < 0) {
        den = -den;
        for (Int& c : num) c = -c;
    }
    Int g = den;
    for (const Int& c : num) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    if (g > 1) {
        den /= g;
        for (Int& c : num) c /= g;
    }
}

bool NFElement::is_zero() const {
    for (const Int& c : num)
        if (c != 0) return false;
    return true;
}

bool NFElement::is_rational() const {
    for (size_t i = 1; i < num.size(); ++i)
        if (num[i] != 0) return false;
    return true;
}

bool NFElement::operator==(const NFElement& o) const {
    NFElement a = *this, b = o;
    a.canonicalize();
    b.canonicalize();
    return a.num == b.num && a.den == b.den;
}

NFElement nf_add(const NFElement& a, const NFElement& b, const NumberFieldDesc& K) {
    (void)K;
    NFElement out;
    out.den = a.den * b.den;
    out.num.assign(std::max(a.num.size(), b.num.size()), 0);
    for (size_t i = 0; i < out.num.size(); ++i) {
        if (i < a.num.size()) out.num[i] += a.num[i] * b.den;
        if (i < b.num.size()) out.num[i] += b.num[i] * a.den;
    }
    out.canonicalize();
    return out;
}

NFElement nf_sub(const NFElement& a, const NFElement& b, const NumberFieldDesc& K) {
    NFElement nb = b;
    for (Int& c : nb.num) c = -c;
    return nf_add(a, nb, K);
}

NFElement nf_scale(const NFElement& a, const Int& c) {
    NFElement out = a;
    for (Int& v : out.num) v *= c;
    out.canonicalize();
    return out;
}

NFElement nf_mul(const NFElement& a, const NFElement& b, const NumberFieldDesc& K) {
    const int d = K.degree();
    if (a.is_zero() || b.is_zero()) return NFElement{};
    std::vector<Int> prod(a.num.size() + b.num.size() - 1, 0);
    for (size_t i = 0; i < a.num.size(); ++i) {
        if (a.num[i] == 0) continue;
        for (size_t j = 0; j < b.num.size(); ++j) prod[i + j] += a.num[i] * b.num[j];
    }
    // reduce mod the monic min_poly
    for (int i = static_cast<int>(prod.size()) - 1; i >= d; --i) {
        Int c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (int j = 0; j < d; ++j) prod[i - d + j] -= c * K.min_poly[j];
    }
    prod.resize(std::min<size_t>(prod.size(), d));
    NFElement out;
    out.num = std::move(prod);
    out.den = a.den * b.den;
    out.canonicalize();
    return out;
}

NFElement nf_pow(const NFElement& a, unsigned long e, const NumberFieldDesc& K) {
    NFElement r = NFElement::from_int(1);
    NFElement base = a;
    while (e) {
        if (e & 1) r = nf_mul(r, base, K);
        base = nf_mul(base, base, K);
        e >>= 1;
    }
    return r;
}

std::string ResiduePrime::str() const {
    std::ostringstream os;
    os << "(" << ell << ", beta - " << root << ")";
    return os.str();
}

static ff::FFPoly min_poly_mod(const NumberFieldDesc& field, const ff::PrimeField& F) {
    ff::FFPoly m;
    for (const Int& c : field.min_poly) {
        Int r = c % Int(static_cast<unsigned long>(F.modulus()));
        if (r < 0) r += static_cast<unsigned long>(F.modulus());
        m.c.push_back(r.get_ui());
    }
    m.normalize();
    return m;
}

std::vector<ResiduePrime> degree_one_primes(const NumberFieldDesc& field, ff::u64 ell) {
    ff::PrimeField F(ell);
    ff::FFPoly m = min_poly_mod(field, F);
    if (m.degree() != field.degree())
        throw Error("degree_one_primes: leading coefficient vanished (non-monic?)");
    ff::FFPoly g = ff::poly_gcd(m, ff::poly_derivative(m, F), F);
    if (g.degree() != 0)
        throw IndexObstruction("min_poly is not squarefree mod " + std::to_string(ell) +
                               " (ell divides disc); refusing to enumerate primes");

    // product of the linear factors: gcd(x^ell - x, m)
    ff::FFPoly xl = ff::poly_powmod_x(m, ell, 1, F);
    ff::FFPoly x;
    x.c = {0, 1};
    ff::FFPoly lin = ff::poly_gcd(m, ff::poly_sub(xl, x, F), F);

    std::vector<ff::u64> roots;
    // split the product of linear factors; for small ell brute force is
    // cheapest, otherwise equal-degree splitting with shifts
    if (ell <= 100000) {
        for (ff::u64 c = 0; c < ell && roots.size() < static_cast<size_t>(lin.degree()); ++c)
            if (ff::poly_eval(lin, c, F) == 0) roots.push_back(c);
    } else {
        std::vector<ff::FFPoly> stack = {lin};
        ff::u64 shift = 1;
        while (!stack.empty()) {
            ff::FFPoly f = stack.back();
            stack.pop_back();
            if (f.degree() == 0) continue;
            if (f.degree() == 1) {
                // root of c0 + c1 x
                roots.push_back(F.mul(F.neg(f.c[0]), F.inv(f.c[1])));
                continue;
            }
            // gcd(f, (x+shift)^((ell-1)/2) - 1)
            ff::FFPoly base;
            base.c = {shift % ell, 1};
            ff::FFPoly acc;
            acc.c = {1};
            ff::u64 e = (ell - 1) / 2;
            ff::FFPoly b = ff::poly_rem(base, f, F);
            while (e) {
                if (e & 1) acc = ff::poly_rem(ff::poly_mul(acc, b, F), f, F);
                b = ff::poly_rem(ff::poly_mul(b, b, F), f, F);
                e >>= 1;
            }
            ff::FFPoly one;
            one.c = {1};
            ff::FFPoly h = ff::poly_gcd(f, ff::poly_sub(acc, one, F), F);
            ++shift;
            if (h.degree() == 0 || h.degree() == f.degree()) {
                stack.push_back(f);  // retry with the next shift
                continue;
            }
            // f / h
            ff::FFPoly q;
            {
                ff::FFPoly num = f;
                q.c.assign(num.c.size() - h.c.size() + 1, 0);
                ff::u64 li = F.inv(h.c.back());
                while (!num.is_zero() && num.degree() >= h.degree()) {
                    ff::u64 qc = F.mul(num.c.back(), li);
                    size_t sh = num.c.size() - h.c.size();
                    q.c[sh] = qc;
                    for (size_t i = 0; i < h.c.size(); ++i)
                        num.c[sh + i] = F.sub(num.c[sh + i], F.mul(qc, h.c[i]));
                    num.normalize();
                }
            }
            stack.push_back(h);
            stack.push_back(q);
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<ResiduePrime> out;
    for (ff::u64 c : roots) out.push_back(ResiduePrime{ell, c, field});
    return out;
}

ff::u64 reduce(const NFElement& elem, const ResiduePrime& lambda) {
    ff::PrimeField F(lambda.ell);
    Int dmod = elem.den % Int(static_cast<unsigned long>(lambda.ell));
    if (dmod == 0)
        throw DenominatorAtEll("eigenvalue denominator divisible by ell = " +
                               std::to_string(lambda.ell));
    ff::u64 acc = 0;
    ff::u64 pw = 1;
    for (const Int& c : elem.num) {
        Int r = c % Int(static_cast<unsigned long>(lambda.ell));
        if (r < 0) r += static_cast<unsigned long>(lambda.ell);
        acc = F.add(acc, F.mul(r.get_ui(), pw));
        pw = F.mul(pw, lambda.root % lambda.ell);
    }
    return F.mul(acc, F.inv(dmod.get_ui()));
}

bool norm_shifted(const NFElement& elem, const ff::i64 shift, ff::u64 ell,
                  const NumberFieldDesc& field) {
    ff::PrimeField F(ell);
    return norm_residue(elem, 1, F.reduce(shift), ell, field) == 0;
}

ff::u64 norm_residue(const NFElement& elem, ff::u64 scale, ff::u64 shift, ff::u64 ell,
                     const NumberFieldDesc& field) {
    ff::PrimeField F(ell);
    Int dmod = elem.den % Int(static_cast<unsigned long>(ell));
    if (dmod == 0)
        throw DenominatorAtEll("norm sieve: denominator divisible by ell");
    ff::u64 dinv = F.inv(dmod.get_ui());
    ff::u64 s = F.mul(scale % ell, dinv);
    ff::FFPoly g;
    for (const Int& c : elem.num) {
        Int r = c % Int(static_cast<unsigned long>(ell));
        if (r < 0) r += static_cast<unsigned long>(ell);
        g.c.push_back(F.mul(r.get_ui(), s));
    }
    g.normalize();
    ff::FFPoly sh;
    sh.c = {shift % ell};
    sh.normalize();
    g = ff::poly_sub(g, sh, F);
    if (g.is_zero()) return 0;
    ff::FFPoly m = min_poly_mod(field, F);
    return ff::poly_resultant(m, g, F);
}

Rat norm_exact(const NFElement& elem, const NumberFieldDesc& field) {
    // Res_x(m, num(x)) / den^deg, via the Euclidean algorithm over Q
    const int d = field.degree();
    std::vector<Rat> a, b;
    for (const Int& c : field.min_poly) a.emplace_back(c);
    for (const Int& c : elem.num) b.emplace_back(Rat(c) / Rat(elem.den));
    while (!b.empty() && b.back() == 0) b.pop_back();
    if (b.empty()) return Rat(0);

    auto deg = [](const std::vector<Rat>& p) { return static_cast<int>(p.size()) - 1; };
    Rat res = 1;
    while (true) {
        if (deg(b) == 0) {
            Rat lead = b[0];
            Rat p = 1;
            for (int i = 0; i < deg(a); ++i) p *= lead;
            res *= p;
            return res;
        }
        // a mod b
        std::vector<Rat> r = a;
        while (static_cast<int>(r.size()) - 1 >= deg(b) && !r.empty()) {
            if (r.back() == 0) {
                r.pop_back();
                continue;
            }
            Rat q = r.back() / b.back();
            size_t sh = r.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) r[sh + i] -= q * b[i];
            while (!r.empty() && r.back() == 0) r.pop_back();
        }
        if (r.empty()) return Rat(0);
        int da = deg(a), db = deg(b), dr = deg(r);
        Rat lead = b.back();
        Rat p = 1;
        for (int i = 0; i < da - dr; ++i) p *= lead;
        res *= p;
        if ((static_cast<long>(da) * db) % 2 == 1) res = -res;
        a = b;
        b = r;
    }
    (void)d;
}

}  // namespace certify::nf
