#include "padicwf/char_sums.hpp"

#include <algorithm>
#include <functional>
#include <thread>

namespace padicwf {

namespace {

constexpr std::int64_t kEnumerationBudget = std::int64_t{1} << 32;
constexpr std::int64_t kCountTableBudget = std::int64_t{1} << 24;

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t n)
{
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n);
}

std::int64_t powmod(std::int64_t a, int e, std::int64_t n)
{
    std::int64_t r = 1 % n;
    a %= n;
    while (e > 0) {
        if (e & 1)
            r = mulmod(r, a, n);
        a = mulmod(a, a, n);
        e >>= 1;
    }
    return r;
}

// Integral of |y|^r over p^k Z_p.
Rational zero_slice_tail(int k, int r, const PrimeContext& ctx)
{
    if (r <= -1)
        throw Error(ErrorKind::Divergent, "weight exponent " + std::to_string(r) + " is not integrable at 0");
    const long p = ctx.prime();
    Rational unit_mass(p - 1, p);
    Rational ratio = Rational(1) - ctx.rational_power(-(r + 1));
    return ctx.rational_power(-k * (r + 1)) * unit_mass / ratio;
}

Polynomial combined_phase(const PolynomialScene& scene, const FrequencyPoint& freq)
{
    if (static_cast<int>(freq.xi.size()) != scene.d)
        throw Error(ErrorKind::DimensionMismatch, "frequency has " + std::to_string(freq.xi.size()) +
                                                      " coordinates, scene expects " + std::to_string(scene.d));
    Polynomial phase(scene.n);
    for (int k = 0; k < scene.d; ++k)
        phase += scene.phi[static_cast<std::size_t>(k)] * freq.xi[static_cast<std::size_t>(k)].value();
    if (scene.twist && freq.twist_scale)
        phase += *scene.twist * freq.twist_scale->value();
    return phase;
}

void check_cube(const ResidueCube& cube, int n)
{
    if (cube.dim() != n)
        throw Error(ErrorKind::DimensionMismatch,
                    "cube dimension " + std::to_string(cube.dim()) + " differs from chart dimension " + std::to_string(n));
}

}  // namespace

void MonomialScene::validate() const
{
    if (l.size() != r.size())
        throw Error(ErrorKind::InvalidArgument, "monomial scene: l and r differ in length");
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i] < 0)
            throw Error(ErrorKind::InvalidArgument, "monomial scene: negative pole exponent");
        if (l[i] == 0 && r[i] < 0)
            throw Error(ErrorKind::InvalidArgument, "monomial scene: r_i must be >= 0 where l_i = 0");
    }
}

void PolynomialScene::validate(const PrimeContext& ctx) const
{
    if (n < 0 || d < 0 || static_cast<int>(phi.size()) != d || static_cast<int>(r.size()) != n)
        throw Error(ErrorKind::InvalidArgument, "polynomial scene: inconsistent dimensions");
    auto check_poly = [&](const Polynomial& f) {
        if (f.nvars() != n)
            throw Error(ErrorKind::InvalidArgument, "polynomial scene: polynomial in the wrong number of variables");
        for (const auto& [e, c] : f.terms())
            if (valuation(c, ctx.prime()) < 0)
                throw Error(ErrorKind::InvalidArgument,
                            "polynomial scene: coefficient " + c.get_str() + " is not p-integral");
    };
    for (const auto& f : phi)
        check_poly(f);
    if (twist)
        check_poly(*twist);
    for (int x : r)
        if (x < 0)
            throw Error(ErrorKind::InvalidArgument, "polynomial scene: weight exponents must be >= 0");
}

Rational weight_ball_integral(const PAdicBall& ball, int r, const PrimeContext& ctx)
{
    const int v = valuation(ball.center, ctx.prime());
    if (v < ball.level)
        return ctx.rational_power(-ball.level - v * r);
    return zero_slice_tail(ball.level, r, ctx);
}

Rational weight_cube_integral(const ResidueCube& cube, const std::vector<int>& r, const PrimeContext& ctx)
{
    check_cube(cube, static_cast<int>(r.size()));
    const PAdicBox box = to_box(cube);
    Rational total = 1;
    for (std::size_t i = 0; i < r.size(); ++i)
        total *= weight_ball_integral(box[i], r[i], ctx);
    return total;
}

int phase_precision(const PolynomialScene& scene, const FrequencyPoint& freq, const PrimeContext& ctx)
{
    const Polynomial phase = combined_phase(scene, freq);
    int m = 0;
    for (const auto& [e, c] : phase.terms())
        m = std::max(m, -valuation(c, ctx.prime()));
    return m;
}

CyclotomicValue direct_ft(const PolynomialScene& scene, const ResidueCube& cube, const FrequencyPoint& freq,
                          const PrimeContext& ctx, const EvalOptions& options)
{
    scene.validate(ctx);
    check_cube(cube, scene.n);
    const long p = ctx.prime();
    const Polynomial phase = combined_phase(scene, freq);
    const int m = phase_precision(scene, freq, ctx);
    ctx.check_level(m);
    if (m == 0)
        return CyclotomicValue::rational(p, weight_cube_integral(cube, scene.r, ctx));

    const int n = scene.n;
    const int k = cube.level();
    const int K = std::max(m, k);
    const std::int64_t N = ctx.power(m);
    const std::int64_t PK = ctx.power(K);
    const std::int64_t per_coord = ctx.power(K - k);

    std::int64_t points = 1;
    for (int i = 0; i < n; ++i) {
        if (points > kEnumerationBudget / per_coord)
            throw Error(ErrorKind::BudgetExceeded, "direct_ft: residue enumeration exceeds budget");
        points *= per_coord;
    }

    // Integer phase p^m * P reduced mod p^m.
    struct Term {
        std::vector<int> e;
        std::int64_t c;
    };
    std::vector<Term> terms;
    for (const auto& [e, c] : phase.terms()) {
        const std::int64_t res = residue_mod(c * ctx.rational_power(m), m, ctx);
        if (res != 0)
            terms.push_back({e, res});
    }

    // Per coordinate: residues mod p^m, valuation class (K means y = 0 mod p^K).
    int max_exp = 0;
    for (const auto& t : terms)
        for (int x : t.e)
            max_exp = std::max(max_exp, x);
    std::vector<std::vector<std::vector<std::int64_t>>> powers(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> classes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& pw = powers[static_cast<std::size_t>(i)];
        auto& cl = classes[static_cast<std::size_t>(i)];
        pw.resize(static_cast<std::size_t>(per_coord));
        cl.resize(static_cast<std::size_t>(per_coord));
        for (std::int64_t t = 0; t < per_coord; ++t) {
            const std::int64_t y = (cube.base()[static_cast<std::size_t>(i)] + ctx.power(k) * t) % PK;
            cl[static_cast<std::size_t>(t)] = y == 0 ? K : valuation(Integer(y), p);
            auto& row = pw[static_cast<std::size_t>(t)];
            row.resize(static_cast<std::size_t>(max_exp) + 1);
            row[0] = 1 % N;
            for (int e = 1; e <= max_exp; ++e)
                row[static_cast<std::size_t>(e)] = mulmod(row[static_cast<std::size_t>(e) - 1], y % N, N);
        }
    }

    std::int64_t class_count = 1;
    for (int i = 0; i < n; ++i)
        class_count *= (K + 1);
    if (N > kCountTableBudget / class_count)
        throw Error(ErrorKind::BudgetExceeded, "direct_ft: count table exceeds budget");
    const std::size_t table = static_cast<std::size_t>(N * class_count);

    // Enumerate the flat index range [lo, hi) of the product of per-coordinate lists.
    auto accumulate = [&](std::int64_t lo, std::int64_t hi, std::vector<std::int64_t>& counts) {
        std::vector<std::int64_t> digit(static_cast<std::size_t>(n));
        std::int64_t rem = lo;
        for (int i = n - 1; i >= 0; --i) {
            digit[static_cast<std::size_t>(i)] = rem % per_coord;
            rem /= per_coord;
        }
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            std::int64_t value = 0;
            for (const auto& t : terms) {
                std::int64_t mono = t.c;
                for (int i = 0; i < n; ++i)
                    if (t.e[static_cast<std::size_t>(i)] != 0)
                        mono = mulmod(mono,
                                      powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(digit[static_cast<std::size_t>(i)])]
                                            [static_cast<std::size_t>(t.e[static_cast<std::size_t>(i)])],
                                      N);
                value += mono;
                if (value >= N)
                    value -= N;
            }
            std::int64_t cls = 0;
            for (int i = 0; i < n; ++i)
                cls = cls * (K + 1) + classes[static_cast<std::size_t>(i)][static_cast<std::size_t>(digit[static_cast<std::size_t>(i)])];
            ++counts[static_cast<std::size_t>(value * class_count + cls)];
            for (int i = n - 1; i >= 0; --i) {
                if (++digit[static_cast<std::size_t>(i)] < per_coord)
                    break;
                digit[static_cast<std::size_t>(i)] = 0;
            }
        }
    };

    std::vector<std::int64_t> counts(table, 0);
    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(std::min<std::int64_t>(points, 64))));
    if (threads == 1) {
        accumulate(0, points, counts);
    } else {
        std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(threads), std::vector<std::int64_t>(table, 0));
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            const std::int64_t lo = points * t / threads;
            const std::int64_t hi = points * (t + 1) / threads;
            pool.emplace_back(accumulate, lo, hi, std::ref(partial[static_cast<std::size_t>(t)]));
        }
        for (auto& th : pool)
            th.join();
        for (const auto& part : partial)
            for (std::size_t i = 0; i < table; ++i)
                counts[i] += part[i];
    }

    // Weight per (coordinate, class).
    std::vector<std::vector<Rational>> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int r = scene.r[static_cast<std::size_t>(i)];
        auto& wi = w[static_cast<std::size_t>(i)];
        wi.resize(static_cast<std::size_t>(K) + 1);
        for (int c = 0; c < K; ++c)
            wi[static_cast<std::size_t>(c)] = ctx.rational_power(-K - c * r);
        wi[static_cast<std::size_t>(K)] = zero_slice_tail(K, r, ctx);
    }
    std::vector<Rational> class_weight(static_cast<std::size_t>(class_count));
    for (std::int64_t cls = 0; cls < class_count; ++cls) {
        Rational acc = 1;
        std::int64_t rem = cls;
        for (int i = n - 1; i >= 0; --i) {
            acc *= w[static_cast<std::size_t>(i)][static_cast<std::size_t>(rem % (K + 1))];
            rem /= (K + 1);
        }
        class_weight[static_cast<std::size_t>(cls)] = acc;
    }

    std::map<std::int64_t, Rational> coeffs;
    for (std::int64_t j = 0; j < N; ++j) {
        Rational acc = 0;
        for (std::int64_t cls = 0; cls < class_count; ++cls) {
            const std::int64_t c = counts[static_cast<std::size_t>(j * class_count + cls)];
            if (c != 0)
                acc += class_weight[static_cast<std::size_t>(cls)] * Rational(Integer(static_cast<long>(c)));
        }
        if (acc != 0)
            coeffs.emplace(j, acc);
    }
    return CyclotomicValue::from_sparse(p, m, std::move(coeffs));
}

namespace {

struct PhaseCoordinate {
    int index;
    int l;
    int r;
    bool zero_slice;   // ball = p^level Z_p
    int level;         // ball level
    int fixed_v = 0;   // valuation on the ball when not zero_slice
    Rational unit;     // center * p^{-fixed_v} when not zero_slice
};

}  // namespace

CyclotomicValue inverse_ft(const MonomialScene& scene, const PAdicBox& box, const PAdicScalar& xi,
                           const PrimeContext& ctx)
{
    scene.validate();
    if (static_cast<int>(box.size()) != scene.n())
        throw Error(ErrorKind::DimensionMismatch, "box dimension differs from chart dimension");
    const long p = ctx.prime();

    Rational factor = 1;
    std::vector<PhaseCoordinate> coords;
    for (int i = 0; i < scene.n(); ++i) {
        const auto& ball = box[static_cast<std::size_t>(i)];
        const int l = scene.l[static_cast<std::size_t>(i)];
        const int r = scene.r[static_cast<std::size_t>(i)];
        if (l == 0 || xi.is_zero()) {
            factor *= weight_ball_integral(ball, r, ctx);
            continue;
        }
        PhaseCoordinate c{i, l, r, ball.contains_zero(p), ball.level, 0, Rational(0)};
        if (!c.zero_slice) {
            c.fixed_v = valuation(ball.center, p);
            c.unit = ball.center * ctx.rational_power(-c.fixed_v);
        }
        coords.push_back(c);
    }
    if (xi.is_zero())
        return CyclotomicValue::rational(p, factor);
    if (coords.empty())
        return psi(xi, ctx) * factor;

    const int vx = valuation(xi, ctx);
    // A stratum vanishes once M >= B_i for a zero-slice coordinate i.
    int bmin = std::numeric_limits<int>::max();
    for (const auto& c : coords)
        if (c.zero_slice)
            bmin = std::min(bmin, valuation(Integer(c.l), p) + (p == 2 ? 3 : 2));

    CyclotomicValue total(p);
    std::vector<int> v(coords.size());
    long s_fixed = 0;
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (!coords[i].zero_slice) {
            v[i] = coords[i].fixed_v;
            s_fixed += static_cast<long>(coords[i].l) * coords[i].fixed_v;
        }

    auto stratum = [&]() {
        long s = 0;
        long scale_exp = 0;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            s += static_cast<long>(coords[i].l) * v[i];
            scale_exp -= static_cast<long>(v[i]) * (coords[i].r + 1);
        }
        const long M = s - vx;
        const Rational scale = ctx.rational_power(static_cast<int>(scale_exp));
        if (M <= 0) {
            Rational vol = scale;
            for (std::size_t i = 0; i < coords.size(); ++i)
                vol *= coords[i].zero_slice ? Rational(p - 1, p) : ctx.rational_power(-(coords[i].level - v[i]));
            total += CyclotomicValue::rational(p, vol);
            return;
        }
        const int m = static_cast<int>(M);
        ctx.check_level(m);
        const std::int64_t N = ctx.power(m);
        // xi p^{-s} = A / p^M with A a unit.
        const Rational A = xi.value() * ctx.rational_power(static_cast<int>(-s + M));
        std::vector<std::int64_t> dist(static_cast<std::size_t>(N), 0);
        dist[static_cast<std::size_t>(residue_mod(A, m, ctx))] = 1;
        Rational measure = scale;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            const auto& c = coords[i];
            // Residues u mod p^M admissible for this coordinate, as inv(u)^l.
            std::vector<std::int64_t> factors;
            if (c.zero_slice) {
                measure *= ctx.rational_power(-m);
                for (std::int64_t u = 1; u < N; ++u)
                    if (u % p != 0)
                        factors.push_back(powmod(unit_inverse_mod(Integer(static_cast<long>(u)), m, ctx), c.l, N));
            } else {
                const int prec = c.level - v[i];
                const int known = std::min(prec, m);
                const std::int64_t a = residue_mod(c.unit, known, ctx);
                measure *= ctx.rational_power(-std::max(prec, m));
                const std::int64_t step = ctx.power(known);
                const std::int64_t choices = ctx.power(m - known);
                for (std::int64_t t = 0; t < choices; ++t) {
                    const std::int64_t u = a + step * t;
                    factors.push_back(powmod(unit_inverse_mod(Integer(static_cast<long>(u)), m, ctx), c.l, N));
                }
            }
            std::vector<std::int64_t> next(static_cast<std::size_t>(N), 0);
            for (std::int64_t x = 0; x < N; ++x) {
                const std::int64_t cnt = dist[static_cast<std::size_t>(x)];
                if (cnt == 0)
                    continue;
                for (std::int64_t f : factors)
                    next[static_cast<std::size_t>(mulmod(x, f, N))] += cnt;
            }
            dist = std::move(next);
        }
        std::map<std::int64_t, Rational> coeffs;
        for (std::int64_t j = 0; j < N; ++j)
            if (dist[static_cast<std::size_t>(j)] != 0)
                coeffs.emplace(j, measure * Rational(Integer(static_cast<long>(dist[static_cast<std::size_t>(j)]))));
        total += CyclotomicValue::from_sparse(p, m, std::move(coeffs));
    };

    // Zero-slice coordinates run over v >= level while the minimal M stays below bmin.
    std::vector<std::size_t> free_coords;
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (coords[i].zero_slice)
            free_coords.push_back(i);
    std::function<void(std::size_t, long)> descend = [&](std::size_t pos, long s_partial) {
        if (pos == free_coords.size()) {
            stratum();
            return;
        }
        long s_rest = 0;
        for (std::size_t q = pos + 1; q < free_coords.size(); ++q)
            s_rest += static_cast<long>(coords[free_coords[q]].l) * coords[free_coords[q]].level;
        const auto& c = coords[free_coords[pos]];
        for (int vv = c.level;; ++vv) {
            const long s_min = s_partial + static_cast<long>(c.l) * vv + s_rest;
            if (s_min - vx >= bmin)
                break;
            v[free_coords[pos]] = vv;
            descend(pos + 1, s_partial + static_cast<long>(c.l) * vv);
        }
    };
    descend(0, s_fixed);
    total *= factor;
    return total;
}

CyclotomicValue inverse_ft(const MonomialScene& scene, const ResidueCube& cube, const PAdicScalar& xi,
                           const PrimeContext& ctx)
{
    check_cube(cube, scene.n());
    return inverse_ft(scene, to_box(cube), xi, ctx);
}

CyclotomicValue brute_force_ft(const PolynomialScene& scene, const ResidueCube& cube, const FrequencyPoint& freq,
                               int K, const PrimeContext& ctx)
{
    scene.validate(ctx);
    check_cube(cube, scene.n);
    const int m = phase_precision(scene, freq, ctx);
    ctx.check_level(m);
    if (K < m || K < cube.level())
        throw Error(ErrorKind::InvalidArgument, "brute_force_ft: level K must be at least the phase precision and cube level");
    const long p = ctx.prime();
    const int n = scene.n;
    const std::int64_t per_coord = ctx.power(K - cube.level());
    const Integer PK = Integer(static_cast<long>(ctx.power(K)));

    std::vector<Integer> y(static_cast<std::size_t>(n));
    std::vector<Rational> point(static_cast<std::size_t>(n));
    std::vector<std::int64_t> digit(static_cast<std::size_t>(n), 0);
    CyclotomicValue total(p);
    while (true) {
        Rational weight = 1;
        for (int i = 0; i < n; ++i) {
            Integer yi = Integer(static_cast<long>(cube.base()[static_cast<std::size_t>(i)])) +
                         Integer(static_cast<long>(ctx.power(cube.level()))) * Integer(static_cast<long>(digit[static_cast<std::size_t>(i)]));
            yi %= PK;
            point[static_cast<std::size_t>(i)] = yi;
            const int r = scene.r[static_cast<std::size_t>(i)];
            if (yi == 0)
                weight *= zero_slice_tail(K, r, ctx);
            else
                weight *= ctx.rational_power(-K - valuation(yi, p) * r);
        }
        Rational phase = 0;
        for (int k = 0; k < scene.d; ++k)
            phase += freq.xi[static_cast<std::size_t>(k)].value() * scene.phi[static_cast<std::size_t>(k)].evaluate(point);
        if (scene.twist && freq.twist_scale)
            phase += freq.twist_scale->value() * scene.twist->evaluate(point);
        total += psi(phase, ctx) * weight;

        int i = n - 1;
        for (; i >= 0; --i) {
            if (++digit[static_cast<std::size_t>(i)] < per_coord)
                break;
            digit[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0)
            break;
    }
    return total;
}

CyclotomicValue brute_force_ft(const MonomialScene& scene, const ResidueCube& cube, const PAdicScalar& xi, int K,
                               const PrimeContext& ctx)
{
    scene.validate();
    check_cube(cube, scene.n());
    if (K < cube.level())
        throw Error(ErrorKind::InvalidArgument, "brute_force_ft: level K below cube level");
    const long p = ctx.prime();
    const int n = scene.n();
    for (int i = 0; i < n; ++i) {
        const auto li = scene.l[static_cast<std::size_t>(i)];
        const auto ri = scene.r[static_cast<std::size_t>(i)];
        if (li == 0 && ri == 0)
            continue;
        const std::int64_t b = cube.base()[static_cast<std::size_t>(i)];
        if (b == 0 || valuation(Integer(static_cast<long>(b)), p) >= cube.level())
            throw Error(ErrorKind::DivisorTouched, "brute_force_ft: cube meets the divisor in coordinate " + std::to_string(i + 1));
    }
    const std::int64_t per_coord = ctx.power(K - cube.level());
    const std::int64_t PK = ctx.power(K);
    std::vector<std::int64_t> digit(static_cast<std::size_t>(n), 0);
    CyclotomicValue total(p);
    const Rational cell = ctx.rational_power(-n * K);
    while (true) {
        Rational weight = cell;
        Rational mono = 1;
        for (int i = 0; i < n; ++i) {
            const std::int64_t yi =
                (cube.base()[static_cast<std::size_t>(i)] + ctx.power(cube.level()) * digit[static_cast<std::size_t>(i)]) % PK;
            const int l = scene.l[static_cast<std::size_t>(i)];
            const int r = scene.r[static_cast<std::size_t>(i)];
            if (l == 0 && r == 0)
                continue;
            const Integer Y(static_cast<long>(yi));
            weight *= ctx.rational_power(-valuation(Y, p) * r);
            Integer pw;
            mpz_pow_ui(pw.get_mpz_t(), Y.get_mpz_t(), static_cast<unsigned long>(l));
            mono *= pw;
        }
        total += psi(Rational(xi.value() / mono), ctx) * weight;

        int i = n - 1;
        for (; i >= 0; --i) {
            if (++digit[static_cast<std::size_t>(i)] < per_coord)
                break;
            digit[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0)
            break;
    }
    return total;
}

PAdicBox transport_box(const PAdicBox& box, const std::vector<PAdicScalar>& alpha, const PrimeContext& ctx)
{
    if (box.size() != alpha.size())
        throw Error(ErrorKind::DimensionMismatch, "torus element and box differ in dimension");
    PAdicBox out;
    out.reserve(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (alpha[i].is_zero())
            throw Error(ErrorKind::InvalidArgument, "torus element has a zero coordinate");
        out.push_back(PAdicBall{box[i].center / alpha[i].value(), box[i].level - valuation(alpha[i], ctx)});
    }
    return out;
}

Rational homogeneity_factor(const MonomialScene& scene, const std::vector<PAdicScalar>& alpha, const PrimeContext& ctx)
{
    if (static_cast<int>(alpha.size()) != scene.n())
        throw Error(ErrorKind::DimensionMismatch, "torus element and chart differ in dimension");
    Rational f = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        f *= ctx.rational_power(valuation(alpha[i], ctx) * (1 + scene.r[i]));
    return f;
}

CyclotomicValue scaled_eval(const MonomialScene& scene, const std::vector<PAdicScalar>& alpha, const ResidueCube& cube,
                            const PAdicScalar& xi, const PrimeContext& ctx)
{
    scene.validate();
    check_cube(cube, scene.n());
    if (static_cast<int>(alpha.size()) != scene.n())
        throw Error(ErrorKind::DimensionMismatch, "torus element and chart differ in dimension");
    const PAdicBox moved = transport_box(to_box(cube), alpha, ctx);
    Rational x = xi.value();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const Rational& a = alpha[i].value();
        Rational apow;
        mpz_pow_ui(apow.get_num_mpz_t(), a.get_num_mpz_t(), static_cast<unsigned long>(scene.l[i]));
        mpz_pow_ui(apow.get_den_mpz_t(), a.get_den_mpz_t(), static_cast<unsigned long>(scene.l[i]));
        apow.canonicalize();
        x /= apow;
    }
    return inverse_ft(scene, moved, x, ctx);
}

}  // namespace padicwf
