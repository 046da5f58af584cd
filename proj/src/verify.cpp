#include "padicwf/verify.hpp"

#include "padicwf/prng.hpp"

#include <algorithm>

namespace padicwf {

using nlohmann::json;

const char* to_string(OutcomeKind kind)
{
    switch (kind) {
    case OutcomeKind::StabilizedAt:
        return "StabilizedAt";
    case OutcomeKind::VanishedAt:
        return "VanishedAt";
    case OutcomeKind::NotStabilized:
        return "NotStabilized";
    }
    return "?";
}

ProbeOutcome classify(const std::vector<CyclotomicValue>& values)
{
    const int n = static_cast<int>(values.size());
    if (n == 0)
        return {OutcomeKind::NotStabilized, 0};
    int start = n;
    while (start > 0 && values[static_cast<std::size_t>(start - 1)] == values.back())
        --start;
    // values[start..n-1] is the maximal constant tail.
    if (values.back().is_zero())
        return {OutcomeKind::VanishedAt, start + 1};
    if (n - start >= 2)
        return {OutcomeKind::StabilizedAt, start + 1};
    return {OutcomeKind::NotStabilized, n};
}

namespace {

bool is_zero_vector(const RationalVector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

std::size_t frequency_length(const AnyScene& scene)
{
    if (const auto* poly = std::get_if<PolynomialScene>(&scene))
        return static_cast<std::size_t>(poly->d);
    return 1;
}

CyclotomicValue evaluate(const AnyScene& scene, const ResidueCube& cube, const RationalVector& xi,
                         const PrimeContext& ctx, const std::optional<Rational>& twist_scale,
                         const EvalOptions& options)
{
    if (const auto* poly = std::get_if<PolynomialScene>(&scene)) {
        FrequencyPoint freq;
        for (const auto& x : xi)
            freq.xi.emplace_back(x);
        if (twist_scale)
            freq.twist_scale = PAdicScalar(*twist_scale);
        return direct_ft(*poly, cube, freq, ctx, options);
    }
    return inverse_ft(std::get<MonomialScene>(scene), cube, PAdicScalar(xi[0]), ctx);
}

void check_frequency(const AnyScene& scene, const RationalVector& xi)
{
    if (xi.size() != frequency_length(scene))
        throw Error(ErrorKind::DimensionMismatch, "frequency has " + std::to_string(xi.size()) +
                                                      " coordinates, the scene expects " +
                                                      std::to_string(frequency_length(scene)));
    if (is_zero_vector(xi))
        throw Error(ErrorKind::ZeroFrequency, "probes need a nonzero frequency");
}

RationalVector scaled(RationalVector v, const Rational& s)
{
    for (auto& x : v)
        x *= s;
    return v;
}

}  // namespace

ProbeReport smoothness_probe(const AnyScene& scene, const ResidueCube& cube, const RationalVector& xi0, int k_max,
                             const PrimeContext& ctx, const std::optional<Rational>& twist_scale,
                             const EvalOptions& options)
{
    check_frequency(scene, xi0);
    if (k_max < 1)
        throw Error(ErrorKind::InvalidArgument, "probe budget k_max must be >= 1");
    ProbeReport report;
    report.cube = cube;
    report.direction = xi0;
    report.k_max = k_max;
    for (int j = 1; j <= k_max; ++j)
        report.values.push_back(evaluate(scene, cube, scaled(xi0, ctx.rational_power(-j)), ctx, twist_scale, options));
    report.outcome = classify(report.values);
    return report;
}

ConstancyReport local_constancy_probe(const AnyScene& scene, const ResidueCube& cube, const RationalVector& xi,
                                      int refine_max, const PrimeContext& ctx,
                                      const std::optional<Rational>& twist_scale, const EvalOptions& options)
{
    check_frequency(scene, xi);
    if (refine_max < 1)
        throw Error(ErrorKind::InvalidArgument, "refine_max must be >= 1");
    ConstancyReport report;
    report.cube = cube;
    report.xi = xi;
    report.refine_max = refine_max;
    const CyclotomicValue center = evaluate(scene, cube, xi, ctx, twist_scale, options);
    auto agrees_at = [&](int j) {
        const Rational step = ctx.rational_power(j);
        for (long u = 1; u < ctx.prime(); ++u)
            if (evaluate(scene, cube, scaled(xi, Rational(1) + step * u), ctx, twist_scale, options) != center)
                return false;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            RationalVector moved = xi;
            moved[i] += step;
            if (evaluate(scene, cube, moved, ctx, twist_scale, options) != center)
                return false;
        }
        return true;
    };
    int least = refine_max + 1;
    while (least > 1 && agrees_at(least - 1))
        --least;
    if (least <= refine_max)
        report.stabilized_at = least;
    return report;
}

namespace {

Rational random_unit(SplitMix64& rng, long p)
{
    while (true) {
        const std::int64_t u = rng.range(1, p * p + 1);
        if (u % p != 0)
            return Rational(Integer(static_cast<long>(rng.coin() ? u : -u)));
    }
}

json rational_list(const std::vector<PAdicScalar>& xs)
{
    json out = json::array();
    for (const auto& x : xs)
        out.push_back(rational_to_string(x.value()));
    return out;
}

json cube_to_json(const ResidueCube& cube)
{
    return {{"level", cube.level()}, {"base", cube.base()}};
}

}  // namespace

SuiteResult homogeneity_suite(const MonomialScene& scene, int trials, std::uint64_t seed, const PrimeContext& ctx,
                              bool drop_factor)
{
    scene.validate();
    SuiteResult result;
    result.suite = "homogeneity";
    result.seed = seed;
    SplitMix64 rng(seed);
    const long p = ctx.prime();
    for (int t = 0; t < trials; ++t) {
        std::vector<PAdicScalar> alpha;
        for (int i = 0; i < scene.n(); ++i)
            alpha.emplace_back(ctx.rational_power(static_cast<int>(rng.range(-2, 2))) * random_unit(rng, p));
        const int level = static_cast<int>(rng.range(0, 2));
        std::vector<std::int64_t> base;
        for (int i = 0; i < scene.n(); ++i)
            base.push_back(rng.range(0, ctx.power(level) - 1));
        const ResidueCube cube(base, level, ctx);
        const PAdicScalar xi(ctx.rational_power(static_cast<int>(rng.range(-3, 1))) * random_unit(rng, p));
        ++result.trials;
        json witness = {{"alpha", rational_list(alpha)}, {"cube", cube_to_json(cube)},
                        {"xi", rational_to_string(xi.value())}};
        try {
            const CyclotomicValue lhs = scaled_eval(scene, alpha, cube, xi, ctx);
            CyclotomicValue rhs = inverse_ft(scene, cube, xi, ctx);
            if (!drop_factor)
                rhs *= homogeneity_factor(scene, alpha, ctx);
            if (lhs == rhs)
                continue;
            witness["lhs"] = lhs.to_string();
            witness["rhs"] = rhs.to_string();
        } catch (const Error& e) {
            witness["error"] = e.what();
        }
        ++result.failures;
        if (result.counterexamples.size() < 3)
            result.counterexamples.push_back(std::move(witness));
    }
    return result;
}

namespace {

constexpr std::int64_t kReductionBudget = std::int64_t{1} << 22;

struct Piece {
    std::int64_t base;
    int level;
    int v;  // common valuation of the piece
};

}  // namespace

bool reduction_identity_check(const RationalVector& a, const MonomialScene& scene, const ResidueCube& cube,
                              const RationalVector& xi, const PrimeContext& ctx)
{
    scene.validate();
    if (a.empty() || a.size() != xi.size())
        throw Error(ErrorKind::InvalidArgument, "a and xi must be nonempty vectors of equal length");
    if (is_zero_vector(a))
        throw Error(ErrorKind::InvalidArgument, "a = 0: the reduction map is not a submersion");
    if (cube.dim() != scene.n())
        throw Error(ErrorKind::DimensionMismatch, "cube dimension differs from the scene");
    const long p = ctx.prime();
    Rational c = 0;
    std::vector<Rational> coeffs;
    for (std::size_t k = 0; k < a.size(); ++k) {
        c += a[k] * xi[k];
        if (a[k] * xi[k] != 0)
            coeffs.push_back(a[k] * xi[k]);
    }
    const CyclotomicValue rhs = inverse_ft(scene, cube, PAdicScalar(c), ctx);
    if (c == 0)
        return rhs == CyclotomicValue::rational(p, weight_cube_integral(cube, scene.r, ctx));

    // Coordinates without poles factor out; the others split into valuation
    // shells down to the depth where every deeper shell integrates to zero.
    const int k = cube.level();
    const int vc = valuation(c, p);
    Rational factor = 1;
    std::vector<int> l, r;
    std::vector<std::vector<Piece>> options;
    for (int i = 0; i < scene.n(); ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const std::int64_t b = cube.base()[si];
        if (scene.l[si] == 0) {
            factor *= weight_ball_integral(PAdicBall{Rational(Integer(static_cast<long>(b))), k}, scene.r[si], ctx);
            continue;
        }
        l.push_back(scene.l[si]);
        r.push_back(scene.r[si]);
        std::vector<Piece> opts;
        const int vb = b == 0 ? kInfiniteValuation : valuation(Integer(static_cast<long>(b)), p);
        if (vb < k) {
            opts.push_back({b, k, vb});
        } else {
            const int bound = valuation(Integer(scene.l[si]), p) + 3;
            for (int v = k; scene.l[si] * v - vc < bound; ++v)
                for (long u = 1; u < p; ++u)
                    opts.push_back({static_cast<std::int64_t>(u) * ctx.power(v), v + 1, v});
        }
        options.push_back(std::move(opts));
    }
    CyclotomicValue lhs(p);
    if (options.empty()) {
        lhs = CyclotomicValue::rational(p, 1);
        for (const auto& ck : coeffs)
            lhs = lhs * psi(PAdicScalar(ck), ctx);
        return lhs * factor == rhs;
    }
    // A pole coordinate with no shells: every stratum integrates to zero.
    if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); }))
        return rhs.is_zero();
    std::int64_t spent = 0;
    std::vector<std::size_t> idx(options.size(), 0);
    while (true) {
        const std::size_t m = options.size();
        int lv = 0;
        for (std::size_t i = 0; i < m; ++i)
            lv += l[i] * options[i][idx[i]].v;
        int M = 0;
        for (const auto& ck : coeffs)
            M = std::max(M, lv - valuation(ck, p));
        std::vector<int> K(m);
        std::vector<std::int64_t> count(m);
        Rational cell = 1;
        std::int64_t points = 1;
        for (std::size_t i = 0; i < m; ++i) {
            const Piece& pc = options[i][idx[i]];
            K[i] = std::max(pc.level, pc.v + M);
            count[i] = ctx.power(K[i] - pc.level);
            points *= count[i];
            cell *= ctx.rational_power(-K[i] - pc.v * r[i]);
        }
        spent += points;
        if (spent > kReductionBudget)
            throw Error(ErrorKind::BudgetExceeded, "reduction check needs more than 2^22 residue points");
        std::vector<std::int64_t> t(m, 0);
        CyclotomicValue piece_sum(p);
        while (true) {
            Integer mono = 1;
            for (std::size_t i = 0; i < m; ++i) {
                const Piece& pc = options[i][idx[i]];
                Integer y = Integer(static_cast<long>(pc.base)) +
                            Integer(static_cast<long>(ctx.power(pc.level))) * Integer(static_cast<long>(t[i]));
                Integer yl;
                mpz_pow_ui(yl.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(l[i]));
                mono *= yl;
            }
            CyclotomicValue term = CyclotomicValue::rational(p, 1);
            for (const auto& ck : coeffs)
                term = term * psi(PAdicScalar(Rational(ck / Rational(mono))), ctx);
            piece_sum += term;
            std::size_t i = m;
            bool carry = true;
            while (carry && i > 0) {
                --i;
                carry = ++t[i] == count[i];
                if (carry)
                    t[i] = 0;
            }
            if (carry)
                break;
        }
        lhs += piece_sum * cell;
        std::size_t i = m;
        bool carry = true;
        while (carry && i > 0) {
            --i;
            carry = ++idx[i] == options[i].size();
            if (carry)
                idx[i] = 0;
        }
        if (carry)
            break;
    }
    return lhs * factor == rhs;
}

CoverReport wavefront_cover_check(const AnyScene& scene, const ConicSetDescriptor& L,
                                  const std::vector<ProbePlanEntry>& plan, const PrimeContext& ctx,
                                  const EvalOptions& options)
{
    if (L.ambient.y_dim != 0 || L.ambient.fiber != FiberKind::WDual)
        throw Error(ErrorKind::InvalidArgument, "coverage needs L over a point in the W* ambient");
    const ConicSetDescriptor swapped = symplectic_swap(L);
    CoverReport report;
    for (const auto& entry : plan) {
        if (entry.kind == ProbeKind::Constancy) {
            ConstancyReport c =
                local_constancy_probe(scene, entry.cube, entry.xi, entry.k_max, ctx, entry.twist_scale, options);
            c.id = entry.id;
            if (!c.stabilized_at && !singular_fiber_nonempty(L, {}, entry.xi))
                report.violations.push_back({entry.id, "not locally constant at a frequency where L has no covector"});
            report.constancy.push_back(std::move(c));
            continue;
        }
        ProbeReport ray = smoothness_probe(scene, entry.cube, entry.xi, entry.k_max, ctx, entry.twist_scale, options);
        ray.id = entry.id;
        if (ray.outcome.kind == OutcomeKind::NotStabilized) {
            std::optional<RationalVector> w0;
            if (const auto* poly = std::get_if<PolynomialScene>(&scene)) {
                RationalVector y0;
                for (auto b : entry.cube.base())
                    y0.push_back(Rational(Integer(static_cast<long>(b))));
                RationalVector w;
                for (const auto& f : poly->phi)
                    w.push_back(f.evaluate(y0));
                w0 = std::move(w);
            } else {
                const auto& mono = std::get<MonomialScene>(scene);
                Rational w = 1;
                bool at_pole = false;
                for (int i = 0; i < mono.n(); ++i) {
                    const auto b = entry.cube.base()[static_cast<std::size_t>(i)];
                    const int li = mono.l[static_cast<std::size_t>(i)];
                    if (li == 0)
                        continue;
                    if (b == 0) {
                        at_pole = true;
                        break;
                    }
                    Integer bl;
                    mpz_pow_ui(bl.get_mpz_t(), Integer(static_cast<long>(b)).get_mpz_t(),
                               static_cast<unsigned long>(li));
                    w /= Rational(bl);
                }
                if (!at_pole)
                    w0 = RationalVector{w};
            }
            if (!w0)
                report.violations.push_back({entry.id, "singular ray over the pole divisor"});
            else if (!membership(swapped, {{}, *w0, {}, entry.xi}))
                report.violations.push_back({entry.id, "singular ray outside L"});
        }
        report.rays.push_back(std::move(ray));
    }
    return report;
}

json value_to_json(const CyclotomicValue& v)
{
    const auto z = v.to_complex();
    return {{"exact", v.to_string()}, {"re", z.real()}, {"im", z.imag()}, {"exact_zero", v.is_zero()}};
}

json to_json(const ProbeReport& report)
{
    json values = json::array();
    for (std::size_t j = 0; j < report.values.size(); ++j) {
        json v = value_to_json(report.values[j]);
        v["level"] = static_cast<int>(j + 1);
        values.push_back(v);
    }
    json dir = json::array();
    for (const auto& x : report.direction)
        dir.push_back(rational_to_string(x));
    return {{"id", report.id},
            {"kind", "ray"},
            {"cube", cube_to_json(report.cube)},
            {"direction", dir},
            {"k_max", report.k_max},
            {"outcome", {{"kind", to_string(report.outcome.kind)}, {"level", report.outcome.level}}},
            {"values", values}};
}

json to_json(const ConstancyReport& report)
{
    json xi = json::array();
    for (const auto& x : report.xi)
        xi.push_back(rational_to_string(x));
    json j = {{"id", report.id},
              {"kind", "constancy"},
              {"cube", cube_to_json(report.cube)},
              {"xi", xi},
              {"refine_max", report.refine_max}};
    if (report.stabilized_at)
        j["outcome"] = {{"kind", "StabilizedAt"}, {"level", *report.stabilized_at}};
    else
        j["outcome"] = {{"kind", "NotStabilized"}, {"level", report.refine_max}};
    return j;
}

json to_json(const SuiteResult& result)
{
    return {{"suite", result.suite},
            {"seed", result.seed},
            {"trials", result.trials},
            {"failures", result.failures},
            {"passed", result.passed()},
            {"counterexamples", result.counterexamples}};
}

json to_json(const CoverReport& report)
{
    json probes = json::array();
    for (const auto& r : report.rays)
        probes.push_back(to_json(r));
    for (const auto& c : report.constancy)
        probes.push_back(to_json(c));
    json violations = json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"probe_id", v.probe_id}, {"reason", v.reason}});
    return {{"probes", probes}, {"violations", violations}, {"passed", report.passed()}};
}

}  // namespace padicwf

namespace padicwf {

namespace {

bool avoids_divisor(const MonomialScene& scene, const ResidueCube& cube)
{
    for (int i = 0; i < scene.n(); ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        if ((scene.l[si] > 0 || scene.r[si] != 0) && cube.base()[si] == 0)
            return false;
    }
    return true;
}

// Brute-force level at which the inverse phase is constant on the residue
// classes of a cube that avoids the divisor.
int exact_level(const MonomialScene& scene, const ResidueCube& cube, const PAdicScalar& xi, const PrimeContext& ctx)
{
    int lv = 0;
    int vmax = 0;
    for (int i = 0; i < scene.n(); ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        if (scene.l[si] == 0)
            continue;
        const int v = valuation(Integer(static_cast<long>(cube.base()[si])), ctx.prime());
        lv += scene.l[si] * v;
        vmax = std::max(vmax, v);
    }
    const int M = std::max(0, lv - valuation(xi, ctx));
    return std::max(cube.level(), vmax + M);
}

RationalVector random_frequency(SplitMix64& rng, std::size_t d, const PrimeContext& ctx, int lo, int hi)
{
    RationalVector xi;
    for (std::size_t k = 0; k < d; ++k)
        xi.push_back(ctx.rational_power(static_cast<int>(rng.range(lo, hi))) * random_unit(rng, ctx.prime()));
    return xi;
}

json rational_json(const RationalVector& v)
{
    json out = json::array();
    for (const auto& x : v)
        out.push_back(rational_to_string(x));
    return out;
}

}  // namespace

CyclotomicValue truncated_oracle(const MonomialScene& scene, const ResidueCube& cube, const PAdicScalar& xi, int depth,
                                 const PrimeContext& ctx)
{
    scene.validate();
    CyclotomicValue total(ctx.prime());
    std::vector<ResidueCube> pending{cube};
    std::int64_t visited = 0;
    while (!pending.empty()) {
        const ResidueCube c = pending.back();
        pending.pop_back();
        if (++visited > (std::int64_t{1} << 20))
            throw Error(ErrorKind::BudgetExceeded, "truncated oracle needs more than 2^20 sub-cubes");
        if (avoids_divisor(scene, c)) {
            total += brute_force_ft(scene, c, xi, exact_level(scene, c, xi, ctx), ctx);
        } else if (c.level() < depth) {
            for (auto& sub : c.refine(ctx))
                pending.push_back(std::move(sub));
        }
    }
    return total;
}

SuiteResult oracle_suite(const AnyScene& scene, int trials, std::uint64_t seed, const PrimeContext& ctx)
{
    SuiteResult result;
    result.suite = "oracle";
    result.seed = seed;
    SplitMix64 rng(seed);
    const long p = ctx.prime();
    const int dim = std::visit([](const auto& s) { return static_cast<int>(s.r.size()); }, scene);
    for (int t = 0; t < trials; ++t) {
        const int level = static_cast<int>(rng.range(0, 2));
        std::vector<std::int64_t> base;
        for (int i = 0; i < dim; ++i)
            base.push_back(rng.range(0, ctx.power(level) - 1));
        json witness;
        ++result.trials;
        try {
            if (const auto* poly = std::get_if<PolynomialScene>(&scene)) {
                const ResidueCube cube(base, level, ctx);
                const RationalVector xi = random_frequency(rng, static_cast<std::size_t>(poly->d), ctx, -2, 0);
                FrequencyPoint f;
                for (const auto& x : xi)
                    f.xi.emplace_back(x);
                if (poly->twist)
                    f.twist_scale = PAdicScalar(Rational(Integer(static_cast<long>(rng.range(-3, 3)))));
                const int K = std::max(phase_precision(*poly, f, ctx), level);
                witness = {{"cube", cube_to_json(cube)}, {"xi", rational_json(xi)}, {"K", K}};
                const auto fast = direct_ft(*poly, cube, f, ctx);
                const auto slow = brute_force_ft(*poly, cube, f, K, ctx);
                if (fast == slow)
                    continue;
                witness["direct"] = fast.to_string();
                witness["oracle"] = slow.to_string();
            } else {
                const auto& mono = std::get<MonomialScene>(scene);
                // Push the base off the divisor so brute force applies.
                const int lv = std::max(level, 1);
                for (int i = 0; i < dim; ++i) {
                    auto& b = base[static_cast<std::size_t>(i)];
                    b = rng.range(0, ctx.power(lv) - 1);
                    if (b == 0)
                        b = 1 + rng.range(0, p - 2);
                }
                const ResidueCube cube(base, lv, ctx);
                const PAdicScalar xi(random_frequency(rng, 1, ctx, -3, 1)[0]);
                const int K = exact_level(mono, cube, xi, ctx);
                witness = {{"cube", cube_to_json(cube)}, {"xi", rational_to_string(xi.value())}, {"K", K}};
                const auto fast = inverse_ft(mono, cube, xi, ctx);
                const auto slow = brute_force_ft(mono, cube, xi, K, ctx);
                if (fast == slow)
                    continue;
                witness["inverse"] = fast.to_string();
                witness["oracle"] = slow.to_string();
            }
        } catch (const Error& e) {
            witness["error"] = e.what();
        }
        ++result.failures;
        if (result.counterexamples.size() < 3)
            result.counterexamples.push_back(std::move(witness));
    }
    return result;
}

SuiteResult floor_suite(int trials, std::uint64_t seed, const PrimeContext& ctx)
{
    SuiteResult result;
    result.suite = "floor";
    result.seed = seed;
    SplitMix64 rng(seed);
    PolynomialScene linear;
    linear.n = 1;
    linear.d = 1;
    linear.phi = {Polynomial::variable(1, 0)};
    linear.r = {0};
    const int span = std::min(ctx.max_level(), 6);
    for (int t = 0; t < trials; ++t) {
        const int v = static_cast<int>(rng.range(-span, span));
        const Rational xi = ctx.rational_power(v) * random_unit(rng, ctx.prime());
        ++result.trials;
        json witness = {{"xi", rational_to_string(xi)}};
        try {
            const auto value = direct_ft(linear, ResidueCube::whole(1), {{PAdicScalar(xi)}, std::nullopt}, ctx);
            if (value == CyclotomicValue::rational(ctx.prime(), v >= 0 ? 1 : 0))
                continue;
            witness["value"] = value.to_string();
        } catch (const Error& e) {
            witness["error"] = e.what();
        }
        ++result.failures;
        if (result.counterexamples.size() < 3)
            result.counterexamples.push_back(std::move(witness));
    }
    return result;
}

}  // namespace padicwf
