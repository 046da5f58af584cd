#pragma once

// Independent reference evaluations used only by tests. They share nothing with
// the library's evaluators beyond psi and the cyclotomic value type.

#include "padicwf/char_sums.hpp"
#include "padicwf/prng.hpp"

#include <functional>
#include <vector>

namespace oracle {

using padicwf::CyclotomicValue;
using padicwf::Integer;
using padicwf::PrimeContext;
using padicwf::Rational;

inline Rational pw(long p, int k)
{
    Rational r = 1;
    for (int i = 0; i < (k < 0 ? -k : k); ++i)
        r *= p;
    return k < 0 ? Rational(1 / r) : r;
}

inline int val(const Integer& x, long p)
{
    if (x == 0)
        return 1 << 20;
    Integer y = abs(x);
    int v = 0;
    while (y % p == 0) {
        y /= p;
        ++v;
    }
    return v;
}

inline int val(const Rational& x, long p)
{
    if (x == 0)
        return 1 << 20;
    return val(x.get_num(), p) - val(x.get_den(), p);
}

// Integral of |y|^r over p^k Z_p by the geometric series over shells.
inline Rational weight_tail(long p, int k, int r)
{
    Rational shell_unit(p - 1, p);
    return pw(p, -k * (r + 1)) * shell_unit / (Rational(1) - pw(p, -(r + 1)));
}

// Integral over the units of Z_p of psi(c u), as an explicit sum at level max(1, -v(c)).
inline CyclotomicValue unit_sum(const Rational& c, const PrimeContext& ctx)
{
    const long p = ctx.prime();
    const int L = std::max(1, -val(c, p));
    CyclotomicValue s(p);
    const std::int64_t N = ctx.power(L);
    for (std::int64_t u = 1; u < N; ++u)
        if (u % p != 0)
            s += padicwf::psi(Rational(c * Rational(Integer(static_cast<long>(u)))), ctx);
    return s * pw(p, -L);
}

// Integral over Z_p of |y|^r psi(xi y): shells v < depth summed explicitly,
// remainder p^{depth} Z_p on which the phase is trivial (depth >= -v(xi)).
inline CyclotomicValue tate(const Rational& xi, int r, int depth, const PrimeContext& ctx)
{
    const long p = ctx.prime();
    CyclotomicValue total(p);
    for (int v = 0; v < depth; ++v)
        total += unit_sum(Rational(xi * pw(p, v)), ctx) * pw(p, -v * (r + 1));
    if (depth < -val(xi, p))
        throw std::logic_error("tate oracle: depth too small");
    total += CyclotomicValue::rational(p, weight_tail(p, depth, r));
    return total;
}

struct Piece {
    std::int64_t base;
    int level;
    int v;  // valuation of every point of the piece
};

// Riemann sum of psi(xi / prod y_i^{l_i}) prod |y_i|^{r_i} over a product of
// pieces, each refined to a level where the integrand is constant.
inline CyclotomicValue riemann(const std::vector<int>& l, const std::vector<int>& r, const Rational& xi,
                               const std::vector<Piece>& pieces, const PrimeContext& ctx)
{
    const long p = ctx.prime();
    const std::size_t n = pieces.size();
    int s = 0;
    for (std::size_t i = 0; i < n; ++i)
        s += l[i] * pieces[i].v;
    const int M = std::max(0, s - val(xi, p));
    std::vector<int> K(n);
    std::vector<std::int64_t> count(n);
    for (std::size_t i = 0; i < n; ++i) {
        K[i] = std::max(pieces[i].level, pieces[i].v + M);
        count[i] = ctx.power(K[i] - pieces[i].level);
    }
    Rational cell = 1;
    for (std::size_t i = 0; i < n; ++i)
        cell *= pw(p, -K[i] - pieces[i].v * r[i]);
    CyclotomicValue total(p);
    std::vector<std::int64_t> t(n, 0);
    while (true) {
        Rational mono = 1;
        for (std::size_t i = 0; i < n; ++i) {
            Integer y = Integer(static_cast<long>(pieces[i].base)) +
                        Integer(static_cast<long>(ctx.power(pieces[i].level))) * Integer(static_cast<long>(t[i]));
            Integer yl;
            mpz_pow_ui(yl.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(l[i]));
            mono *= yl;
        }
        total += padicwf::psi(Rational(xi / mono), ctx);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++t[i] < count[i])
                goto next;
            t[i] = 0;
        }
        break;
    next:;
    }
    return total * cell;
}

// Shell decomposition of inverse_ft: zero-slice coordinates with l_i > 0 are
// split into shells p^v u (u a unit mod p) down to a depth past which every
// stratum has phase level at least v_p(l_i) + 3; coordinates with l_i = 0
// factor out through the closed-form weight tail.
inline CyclotomicValue inverse_shells(const padicwf::MonomialScene& scene, const padicwf::ResidueCube& cube,
                                      const Rational& xi, const PrimeContext& ctx)
{
    const long p = ctx.prime();
    const int n = scene.n();
    const int k = cube.level();
    Rational factor = 1;
    std::vector<int> l, r;
    std::vector<std::vector<Piece>> options;
    for (int i = 0; i < n; ++i) {
        const std::int64_t b = cube.base()[static_cast<std::size_t>(i)];
        const int vb = b == 0 ? (1 << 20) : val(Integer(static_cast<long>(b)), p);
        const int li = scene.l[static_cast<std::size_t>(i)];
        const int ri = scene.r[static_cast<std::size_t>(i)];
        if (li == 0 && xi != 0) {
            factor *= vb < k ? pw(p, -k - vb * ri) : weight_tail(p, k, ri);
            continue;
        }
        l.push_back(li);
        r.push_back(ri);
        std::vector<Piece> opts;
        if (vb < k) {
            opts.push_back({b, k, vb});
        } else {
            int depth = k;
            while (li * depth - val(xi, p) < val(Integer(li), p) + 3)
                ++depth;
            for (int v = k; v <= depth; ++v)
                for (long u = 1; u < p; ++u)
                    opts.push_back({static_cast<std::int64_t>(u) * ctx.power(v), v + 1, v});
        }
        options.push_back(std::move(opts));
    }
    CyclotomicValue total(p);
    if (options.empty())
        return padicwf::psi(xi, ctx) * factor;
    std::vector<std::size_t> idx(options.size(), 0);
    while (true) {
        std::vector<Piece> chosen;
        for (std::size_t i = 0; i < options.size(); ++i)
            chosen.push_back(options[i][idx[i]]);
        total += riemann(l, r, xi, chosen, ctx);
        std::size_t i = options.size();
        bool done = true;
        while (i > 0) {
            --i;
            if (++idx[i] < options[i].size()) {
                done = false;
                break;
            }
            idx[i] = 0;
        }
        if (done)
            break;
    }
    return total * factor;
}

inline Rational random_unit(padicwf::SplitMix64& rng, long p, int bound)
{
    while (true) {
        const std::int64_t a = rng.range(-bound, bound);
        if (a != 0 && a % p != 0)
            return Rational(Integer(static_cast<long>(a)));
    }
}

}  // namespace oracle
