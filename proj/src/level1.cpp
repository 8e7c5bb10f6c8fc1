#include "certify/level1.hpp"

#include <algorithm>

namespace certify::level1 {

using nf::Int;
using nf::Rat;

long dim_cusp_level1(long k) {
    if (k % 2 != 0) throw OddWeight("level-1 spaces of odd weight are zero");
    if (k < 12) return 0;
    long base = k / 12;
    if (k % 12 == 2) --base;
    return base;
}

nf::Rat bernoulli(unsigned n) {
    // B_m via the recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0, B_0 = 1
    static std::vector<Rat> cache{Rat(1)};
    while (cache.size() <= n) {
        unsigned m = cache.size();
        Rat acc(0);
        Int binom = 1;  // C(m+1, 0)
        for (unsigned j = 0; j < m; ++j) {
            acc += Rat(binom) * cache[j];
            // C(m+1, j+1) = C(m+1, j) * (m+1-j) / (j+1)
            binom = binom * (m + 1 - j) / (j + 1);
        }
        cache.push_back(-acc / Rat(binom));
    }
    return cache[n];
}

std::vector<nf::Rat> eisenstein_series(long k, long prec) {
    if (k < 2 || k % 2 != 0) throw PreconditionFailed("Eisenstein weight must be even, >= 2");
    Rat factor = Rat(-2 * k) / bernoulli(static_cast<unsigned>(k));
    std::vector<Rat> e(static_cast<size_t>(prec), Rat(0));
    e[0] = 1;
    // sigma_{k-1} by divisor sweep
    for (long d = 1; d < prec; ++d) {
        Int dk = 1;
        for (long i = 0; i + 1 < k; ++i) dk *= d;
        for (long m = d; m < prec; m += d) e[static_cast<size_t>(m)] += Rat(dk);
    }
    for (long m = 1; m < prec; ++m) e[static_cast<size_t>(m)] *= factor;
    return e;
}

namespace {

std::vector<Rat> mul_series(const std::vector<Rat>& a, const std::vector<Rat>& b, long prec) {
    std::vector<Rat> out(static_cast<size_t>(prec), Rat(0));
    for (size_t i = 0; i < a.size() && i < static_cast<size_t>(prec); ++i) {
        if (a[i] == 0) continue;
        size_t lim = std::min(b.size(), static_cast<size_t>(prec) - i);
        for (size_t j = 0; j < lim; ++j)
            if (b[j] != 0) out[i + j] += a[i] * b[j];
    }
    return out;
}

// all monomials E4^a E6^b Delta^c of weight k (they span M_k)
std::vector<std::vector<Rat>> weight_monomials(long k, long prec) {
    auto e4 = eisenstein_series(4, prec);
    auto e6 = eisenstein_series(6, prec);
    // Delta = (E4^3 - E6^2)/1728
    auto e43 = mul_series(mul_series(e4, e4, prec), e4, prec);
    auto e62 = mul_series(e6, e6, prec);
    std::vector<Rat> delta(static_cast<size_t>(prec));
    for (long i = 0; i < prec; ++i)
        delta[static_cast<size_t>(i)] =
            (e43[static_cast<size_t>(i)] - e62[static_cast<size_t>(i)]) / 1728;

    std::vector<std::vector<Rat>> out;
    std::vector<Rat> dpow(static_cast<size_t>(prec), Rat(0));
    dpow[0] = 1;
    for (long c = 0; 12 * c <= k; ++c) {
        long rem = k - 12 * c;
        std::vector<Rat> base = dpow;
        for (long b = 0; 6 * b <= rem; ++b) {
            if ((rem - 6 * b) % 4 == 0) {
                long a = (rem - 6 * b) / 4;
                std::vector<Rat> m = base;
                for (long i = 0; i < a; ++i) m = mul_series(m, e4, prec);
                out.push_back(std::move(m));
            }
            base = mul_series(base, e6, prec);
        }
        dpow = mul_series(dpow, delta, prec);
    }
    return out;
}

}  // namespace

std::vector<std::vector<nf::Rat>> vm_basis_exact(long k, long prec) {
    long d = dim_cusp_level1(k);
    if (k < 4 || k % 2 != 0) throw PreconditionFailed("vm_basis: weight must be even, >= 4");
    if (prec < d + 1) throw InsufficientPrecision("vm_basis: precision below dim+1", d + 1);
    auto rows = weight_monomials(k, prec);
    // exact rref
    long rank = 0;
    for (long col = 0; col < prec && rank < static_cast<long>(rows.size()); ++col) {
        long piv = -1;
        for (long r = rank; r < static_cast<long>(rows.size()); ++r)
            if (rows[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(piv)]);
        Rat lead = rows[static_cast<size_t>(rank)][static_cast<size_t>(col)];
        for (long i = 0; i < prec; ++i) rows[static_cast<size_t>(rank)][static_cast<size_t>(i)] /= lead;
        for (long r = 0; r < static_cast<long>(rows.size()); ++r) {
            if (r == rank) continue;
            Rat f = rows[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (long i = col; i < prec; ++i)
                rows[static_cast<size_t>(r)][static_cast<size_t>(i)] -=
                    f * rows[static_cast<size_t>(rank)][static_cast<size_t>(i)];
        }
        ++rank;
    }
    rows.resize(static_cast<size_t>(rank));
    if (rank != d + 1)
        throw Error("vm_basis: span of Eisenstein monomials has unexpected rank");
    // row 0 is the Eisenstein echelon vector (pivot q^0); rows 1..d are the
    // cusp basis with pivots q^1..q^d
    for (long j = 1; j <= d; ++j)
        for (long i = 0; i <= d; ++i)
            if (rows[static_cast<size_t>(j)][static_cast<size_t>(i)] != Rat(i == j ? 1 : 0))
                throw Error("vm_basis: echelon pivots are not consecutive");
    return {rows.begin() + 1, rows.end()};
}

namespace {

std::vector<u64> mul_series_mod(const std::vector<u64>& a, const std::vector<u64>& b, long prec,
                                const ff::PrimeField& F) {
    std::vector<u64> out(static_cast<size_t>(prec), 0);
    for (size_t i = 0; i < a.size() && i < static_cast<size_t>(prec); ++i) {
        if (a[i] == 0) continue;
        size_t lim = std::min(b.size(), static_cast<size_t>(prec) - i);
        for (size_t j = 0; j < lim; ++j)
            if (b[j] != 0) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    }
    return out;
}

// E_4, E_6 and Delta mod ell (all integral series; the Eisenstein
// normalizing factors -2k/B_k are the integers 240 and -504, and 1728 is a
// unit mod any ell >= 5)
std::vector<u64> e4_mod(long prec, const ff::PrimeField& F) {
    std::vector<u64> e(static_cast<size_t>(prec), 0);
    e[0] = 1;
    for (long d = 1; d < prec; ++d) {
        u64 d3 = F.mul(F.mul(F.reduce(d), F.reduce(d)), F.reduce(d));
        u64 c = F.mul(240 % F.modulus(), d3);
        for (long m = d; m < prec; m += d)
            e[static_cast<size_t>(m)] = F.add(e[static_cast<size_t>(m)], c);
    }
    return e;
}

std::vector<u64> e6_mod(long prec, const ff::PrimeField& F) {
    std::vector<u64> e(static_cast<size_t>(prec), 0);
    e[0] = 1;
    for (long d = 1; d < prec; ++d) {
        u64 d5 = F.pow(F.reduce(d), 5);
        u64 c = F.mul(504 % F.modulus(), d5);
        for (long m = d; m < prec; m += d)
            e[static_cast<size_t>(m)] = F.sub(e[static_cast<size_t>(m)], c);
    }
    return e;
}

}  // namespace

VMBasis vm_basis(long k, u64 ell, long prec) {
    if (ell < 5) throw PreconditionFailed("vm_basis: ell must be >= 5");
    long d = dim_cusp_level1(k);
    if (k < 4 || k % 2 != 0) throw PreconditionFailed("vm_basis: weight must be even, >= 4");
    if (prec < d + 1) throw InsufficientPrecision("vm_basis: precision below dim+1", d + 1);
    ff::PrimeField F(ell);
    auto e4 = e4_mod(prec, F);
    auto e6 = e6_mod(prec, F);
    auto e43 = mul_series_mod(mul_series_mod(e4, e4, prec, F), e4, prec, F);
    auto e62 = mul_series_mod(e6, e6, prec, F);
    u64 inv1728 = F.inv(1728 % ell);
    std::vector<u64> delta(static_cast<size_t>(prec));
    for (long i = 0; i < prec; ++i)
        delta[static_cast<size_t>(i)] =
            F.mul(F.sub(e43[static_cast<size_t>(i)], e62[static_cast<size_t>(i)]), inv1728);

    // monomials E4^a E6^b Delta^c of weight k: a Z-basis of M_k(Z), so
    // their reduction spans the full d+1 dimensional space mod ell
    std::vector<std::vector<u64>> rows;
    std::vector<u64> dpow(static_cast<size_t>(prec), 0);
    dpow[0] = 1;
    for (long c = 0; 12 * c <= k; ++c) {
        long rem = k - 12 * c;
        std::vector<u64> base = dpow;
        for (long b = 0; 6 * b <= rem; ++b) {
            if ((rem - 6 * b) % 4 == 0) {
                long a = (rem - 6 * b) / 4;
                std::vector<u64> m = base;
                for (long i = 0; i < a; ++i) m = mul_series_mod(m, e4, prec, F);
                rows.push_back(std::move(m));
            }
            base = mul_series_mod(base, e6, prec, F);
        }
        dpow = mul_series_mod(dpow, delta, prec, F);
    }

    // rref mod ell
    long rank = 0;
    for (long col = 0; col < prec && rank < static_cast<long>(rows.size()); ++col) {
        long piv = -1;
        for (long r = rank; r < static_cast<long>(rows.size()); ++r)
            if (rows[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(piv)]);
        u64 inv = F.inv(rows[static_cast<size_t>(rank)][static_cast<size_t>(col)]);
        for (long i = 0; i < prec; ++i)
            rows[static_cast<size_t>(rank)][static_cast<size_t>(i)] =
                F.mul(rows[static_cast<size_t>(rank)][static_cast<size_t>(i)], inv);
        for (long r = 0; r < static_cast<long>(rows.size()); ++r) {
            if (r == rank) continue;
            u64 f = rows[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (long i = col; i < prec; ++i)
                rows[static_cast<size_t>(r)][static_cast<size_t>(i)] =
                    F.sub(rows[static_cast<size_t>(r)][static_cast<size_t>(i)],
                          F.mul(f, rows[static_cast<size_t>(rank)][static_cast<size_t>(i)]));
        }
        ++rank;
    }
    if (rank != d + 1) throw Error("vm_basis: monomial span has unexpected rank mod ell");
    rows.resize(static_cast<size_t>(rank));
    for (long j = 1; j <= d; ++j)
        for (long i = 0; i <= d; ++i)
            if (rows[static_cast<size_t>(j)][static_cast<size_t>(i)] !=
                static_cast<u64>(i == j ? 1 : 0))
                throw Error("vm_basis: echelon pivots are not consecutive mod ell");

    VMBasis out;
    out.k = k;
    out.ell = ell;
    out.dim = d;
    out.prec = prec;
    out.forms.assign(rows.begin() + 1, rows.end());
    return out;
}

HeckeMatrix hecke_matrix(const VMBasis& basis, long n) {
    const long d = basis.dim;
    if (basis.prec < n * d + 1)
        throw InsufficientPrecision("hecke_matrix: need precision n*dim + 1", n * d + 1);
    ff::PrimeField F(basis.ell);
    u64 nk1 = F.pow(F.reduce(n), static_cast<u64>(basis.k - 1));
    HeckeMatrix H;
    H.n = n;
    H.k = basis.k;
    H.m.assign(static_cast<size_t>(d), std::vector<u64>(static_cast<size_t>(d), 0));
    for (long j = 0; j < d; ++j)
        for (long i = 1; i <= d; ++i) {
            // a_i(T_n g) = a_{in}(g) + n^{k-1} a_{i/n}(g)
            u64 v = basis.forms[static_cast<size_t>(j)][static_cast<size_t>(i * n)];
            if (i % n == 0)
                v = F.add(v, F.mul(nk1, basis.forms[static_cast<size_t>(j)][static_cast<size_t>(i / n)]));
            H.m[static_cast<size_t>(i - 1)][static_cast<size_t>(j)] = v;
        }
    return H;
}

namespace {

// columns spanning the nullspace of the r x c matrix M over F_ell
std::vector<std::vector<u64>> nullspace(std::vector<std::vector<u64>> M, long cols,
                                        const ff::PrimeField& F) {
    long rows = static_cast<long>(M.size());
    std::vector<long> pivot_col;
    long rank = 0;
    for (long col = 0; col < cols && rank < rows; ++col) {
        long piv = -1;
        for (long r = rank; r < rows; ++r)
            if (M[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[static_cast<size_t>(rank)], M[static_cast<size_t>(piv)]);
        u64 inv = F.inv(M[static_cast<size_t>(rank)][static_cast<size_t>(col)]);
        for (long i = 0; i < cols; ++i)
            M[static_cast<size_t>(rank)][static_cast<size_t>(i)] =
                F.mul(M[static_cast<size_t>(rank)][static_cast<size_t>(i)], inv);
        for (long r = 0; r < rows; ++r) {
            if (r == rank) continue;
            u64 f = M[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (long i = 0; i < cols; ++i)
                M[static_cast<size_t>(r)][static_cast<size_t>(i)] =
                    F.sub(M[static_cast<size_t>(r)][static_cast<size_t>(i)],
                          F.mul(f, M[static_cast<size_t>(rank)][static_cast<size_t>(i)]));
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
    for (long c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<u64>> basis;
    for (long free = 0; free < cols; ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        std::vector<u64> v(static_cast<size_t>(cols), 0);
        v[static_cast<size_t>(free)] = 1;
        for (long r = 0; r < rank; ++r)
            v[static_cast<size_t>(pivot_col[static_cast<size_t>(r)])] =
                F.neg(M[static_cast<size_t>(r)][static_cast<size_t>(free)]);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

Level1Report eigensystem_occurs(const store::NewformRecord& f, const nf::ResiduePrime& lambda,
                                const std::vector<long>& test_primes) {
    const u64 ell = lambda.ell;
    Level1Report rep;
    rep.test_primes = test_primes;
    rep.weight_lo = 12;
    rep.weight_hi = static_cast<long>(ell) + 2;
    if (ell <= 3) {
        // [2, ell+2] <= 5 < 12: no level-1 cusp forms at all
        return rep;
    }
    ff::PrimeField F(ell);

    long d_max = 0;
    for (long k = rep.weight_lo; k <= rep.weight_hi; k += 2)
        d_max = std::max(d_max, dim_cusp_level1(k));
    if (d_max == 0) return rep;
    long r_max = 2;
    for (long r : test_primes) {
        if (r % static_cast<long>(ell) == 0 || f.level % r == 0)
            throw PreconditionFailed("eigensystem_occurs: test prime not coprime to ell*N");
        if (!f.has(r))
            throw InsufficientCoefficients("eigensystem_occurs: record lacks a_r", r);
        r_max = std::max(r_max, r);
    }
    long prec = d_max * r_max + 1;

    std::vector<std::pair<long, u64>> c_r;  // (r, a_r(f) mod lambda)
    for (long r : test_primes) c_r.emplace_back(r, nf::reduce(f.a(r), lambda));

    std::vector<bool> uniform(test_primes.size(), !test_primes.empty());
    for (long k = rep.weight_lo; k <= rep.weight_hi; k += 2) {
        long d = dim_cusp_level1(k);
        if (d == 0) continue;
        VMBasis basis = vm_basis(k, ell, prec);
        std::vector<HeckeMatrix> T;
        for (long r : test_primes) T.push_back(hecke_matrix(basis, r));

        for (long j = 0; j + 1 < static_cast<long>(ell); ++j) {
            // W starts as the full space; intersect kernels prime by prime
            std::vector<std::vector<u64>> W(static_cast<size_t>(d),
                                            std::vector<u64>(static_cast<size_t>(d), 0));
            for (long i = 0; i < d; ++i) W[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
            long w = d;
            for (size_t ti = 0; ti < test_primes.size() && w > 0; ++ti) {
                u64 target = F.mul(F.pow(F.reduce(test_primes[ti]), static_cast<u64>(j)),
                                   c_r[ti].second);
                // M = (T - target) * W  (d x w)
                std::vector<std::vector<u64>> M(static_cast<size_t>(d),
                                                std::vector<u64>(static_cast<size_t>(w), 0));
                for (long a = 0; a < d; ++a)
                    for (long b = 0; b < w; ++b) {
                        u64 acc = 0;
                        for (long t = 0; t < d; ++t) {
                            u64 coef = T[ti].m[static_cast<size_t>(a)][static_cast<size_t>(t)];
                            if (t == a) coef = F.sub(coef, target);
                            acc = F.add(acc, F.mul(coef, W[static_cast<size_t>(t)][static_cast<size_t>(b)]));
                        }
                        M[static_cast<size_t>(a)][static_cast<size_t>(b)] = acc;
                    }
                auto N = nullspace(std::move(M), w, F);
                // W = W * N
                std::vector<std::vector<u64>> W2(static_cast<size_t>(d),
                                                 std::vector<u64>(N.size(), 0));
                for (long a = 0; a < d; ++a)
                    for (size_t b = 0; b < N.size(); ++b) {
                        u64 acc = 0;
                        for (long t = 0; t < w; ++t)
                            acc = F.add(acc, F.mul(W[static_cast<size_t>(a)][static_cast<size_t>(t)],
                                                   N[b][static_cast<size_t>(t)]));
                        W2[static_cast<size_t>(a)][b] = acc;
                    }
                W = std::move(W2);
                w = static_cast<long>(N.size());
            }
            if (w > 0) rep.survivors.push_back({k, j, w});

            // which single primes kill this (k, j) on their own?
            for (size_t ti = 0; ti < test_primes.size(); ++ti) {
                if (!uniform[ti]) continue;
                u64 target = F.mul(F.pow(F.reduce(test_primes[ti]), static_cast<u64>(j)),
                                   c_r[ti].second);
                std::vector<std::vector<u64>> M = T[ti].m;
                for (long a = 0; a < d; ++a)
                    M[static_cast<size_t>(a)][static_cast<size_t>(a)] =
                        F.sub(M[static_cast<size_t>(a)][static_cast<size_t>(a)], target);
                if (!nullspace(std::move(M), d, F).empty()) uniform[ti] = false;
            }
        }
    }
    for (size_t ti = 0; ti < test_primes.size(); ++ti)
        if (uniform[ti]) rep.uniform_eliminators.push_back(test_primes[ti]);
    return rep;
}

}  // namespace certify::level1
