#include "padicwf/bound.hpp"

#include "padicwf/prng.hpp"

#include <algorithm>

namespace padicwf {

using nlohmann::json;

namespace {

constexpr int kMaxChartDim = 16;
constexpr int kMaxCurveDim = 3;
constexpr int kMaxCurveDegree = 8;

[[noreturn]] void malformed(const ResolutionChart& chart, const std::string& msg)
{
    throw Error(ErrorKind::MalformedStratum, "chart '" + chart.id + "': " + msg);
}

}  // namespace

std::vector<int> ResolutionChart::divisor() const
{
    std::vector<int> out;
    for (int i = 0; i < n(); ++i)
        if (l[static_cast<std::size_t>(i)] > 0 || r[static_cast<std::size_t>(i)] != 0)
            out.push_back(i);
    return out;
}

void ResolutionChart::validate(int d) const
{
    if (r.size() != l.size() || dprime.size() != l.size())
        malformed(*this, "l, r and dprime must have equal length");
    if (n() > kMaxChartDim)
        malformed(*this, "more than " + std::to_string(kMaxChartDim) + " chart coordinates");
    bool any_dprime = false;
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i] < 0)
            malformed(*this, "negative pole order");
        if (dprime[i] && l[i] == 0)
            malformed(*this, "dprime component " + std::to_string(i) + " has no pole");
        any_dprime = any_dprime || dprime[i];
    }
    if (direction) {
        if (static_cast<int>(direction->size()) != d)
            malformed(*this, "direction must have length dim W");
        if (std::all_of(direction->begin(), direction->end(), [](const Rational& x) { return x == 0; }))
            malformed(*this, "direction is zero");
    } else if (any_dprime && d >= 2) {
        malformed(*this, "a pole component with dim W >= 2 needs a tautological direction");
    }
}

ConicSetDescriptor build_L(const std::vector<ResolutionChart>& charts, int d, int q)
{
    if (d < 1 || q < 0)
        throw Error(ErrorKind::InvalidArgument, "build_L needs dim W >= 1 and dim Y >= 0");
    ConicSetDescriptor total{{q, d, FiberKind::W}, {ConormalComponent::conormal_of({}, Subspace::zero(d))}};
    for (const auto& chart : charts) {
        chart.validate(d);
        if (static_cast<int>(chart.tau.size()) != q)
            throw Error(ErrorKind::UnsupportedMap, "chart '" + chart.id + "': tau must keep exactly dim Y coordinates");
        const std::vector<int> div = chart.divisor();
        ConicSetDescriptor local{{chart.n(), d, FiberKind::W}, {ConormalComponent::conormal_of({}, Subspace::zero(d))}};
        // Every nonempty intersection of divisor components, times the zero
        // fiber, and times the tautological line where it lies over the poles.
        for (std::uint32_t mask = 1; mask < (1u << div.size()); ++mask) {
            std::vector<int> s;
            bool over_pole = false;
            for (std::size_t k = 0; k < div.size(); ++k)
                if (mask & (1u << k)) {
                    s.push_back(div[k]);
                    over_pole = over_pole || chart.dprime[static_cast<std::size_t>(div[k])];
                }
            local.components.push_back(ConormalComponent::conormal_of(s, Subspace::zero(d)));
            if (over_pole)
                local.components.push_back(ConormalComponent::conormal_of(
                    s, d == 1 ? Subspace::full(1) : Subspace::span(d, {*chart.direction})));
        }
        local.canonicalize();
        const auto pushed = pushforward_coordinate(local, {chart.n(), chart.tau});
        total.components.insert(total.components.end(), pushed.components.begin(), pushed.components.end());
    }
    total.canonicalize();
    return symplectic_swap(total);
}

namespace {

// Dense univariate helpers over Q, coefficient k multiplies s^k.
using Dense = std::vector<Rational>;

Dense dense_of(const Polynomial& p)
{
    Dense out(static_cast<std::size_t>(std::max(p.degree_in(0), 0) + 1), Rational(0));
    for (const auto& [e, c] : p.terms())
        out[static_cast<std::size_t>(e[0])] += c;
    while (!out.empty() && out.back() == 0)
        out.pop_back();
    return out;
}

Dense remainder(Dense a, const Dense& b)
{
    while (a.size() >= b.size() && !a.empty()) {
        const Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] -= f * b[i];
        while (!a.empty() && a.back() == 0)
            a.pop_back();
    }
    return a;
}

Dense gcd(Dense a, Dense b)
{
    while (!b.empty()) {
        Dense t = remainder(a, b);
        a = std::move(b);
        b = std::move(t);
    }
    return a;
}

// Fraction-free Gaussian elimination; every division is exact.
Polynomial bareiss_determinant(std::vector<std::vector<Polynomial>> m, int nvars)
{
    const std::size_t n = m.size();
    if (n == 0)
        return Polynomial::constant(nvars, 1);
    Polynomial prev = Polynomial::constant(nvars, 1);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero())
                ++swap_row;
            if (swap_row == n)
                return Polynomial(nvars);
            std::swap(m[k], m[swap_row]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_divide(prev);
            m[i][k] = Polynomial(nvars);
        }
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

}  // namespace

void CurveScene::validate() const
{
    if (d < 1)
        throw Error(ErrorKind::InvalidArgument, "curve scene needs dim W >= 1");
    if (d > kMaxCurveDim)
        throw Error(ErrorKind::DegreeTooHigh, "exact PCrit supports dim W <= " + std::to_string(kMaxCurveDim));
    if (static_cast<int>(param.size()) != d + 1)
        throw Error(ErrorKind::InvalidArgument, "curve scene needs d + 1 homogeneous coordinates");
    Dense g;
    for (const auto& p : param) {
        if (p.nvars() != 1)
            throw Error(ErrorKind::InvalidArgument, "curve coordinates must be univariate in s");
        if (p.degree_in(0) > kMaxCurveDegree)
            throw Error(ErrorKind::DegreeTooHigh, "curve degree above " + std::to_string(kMaxCurveDegree));
        g = gcd(g, dense_of(p));
    }
    if (g.empty())
        throw Error(ErrorKind::InvalidArgument, "curve coordinates are all zero");
    if (g.size() > 1)
        throw Error(ErrorKind::InvalidArgument, "curve coordinates share a common factor in s");
}

const char* to_string(MethodTag tag)
{
    return tag == MethodTag::Exact ? "Exact" : "Sampled";
}

std::vector<RationalVector> TransversalityReport::samples() const
{
    std::vector<RationalVector> out;
    for (const auto& s : sampled_annihilators)
        out.insert(out.end(), s.basis().begin(), s.basis().end());
    return out;
}

TransversalityReport pcrit_exact(const CurveScene& scene)
{
    scene.validate();
    const int nv = scene.d + 1;
    TransversalityReport report;
    report.method = MethodTag::Exact;
    report.coordinates = nv;

    // f(s) = sum_k a_k s^k with a_k linear in l.
    int deg = 0;
    for (const auto& p : scene.param)
        deg = std::max(deg, p.degree_in(0));
    std::vector<Polynomial> a(static_cast<std::size_t>(deg + 1), Polynomial(nv));
    for (int i = 0; i < nv; ++i)
        for (const auto& [e, c] : scene.param[static_cast<std::size_t>(i)].terms())
            a[static_cast<std::size_t>(e[0])] += Polynomial::variable(nv, i) * c;

    if (deg == 0) {
        report.equations.push_back(a[0].primitive());
        return report;
    }
    std::vector<Polynomial> b;
    for (int k = 1; k <= deg; ++k)
        b.push_back(a[static_cast<std::size_t>(k)] * Rational(k));

    // Sylvester matrix of f (degree deg) and f' (degree deg - 1).
    const std::size_t size = static_cast<std::size_t>(2 * deg - 1);
    std::vector<std::vector<Polynomial>> m(size, std::vector<Polynomial>(size, Polynomial(nv)));
    for (std::size_t row = 0; row + 1 < static_cast<std::size_t>(deg); ++row)
        for (int k = 0; k <= deg; ++k)
            m[row][row + static_cast<std::size_t>(deg - k)] = a[static_cast<std::size_t>(k)];
    for (std::size_t row = 0; row < static_cast<std::size_t>(deg); ++row)
        for (int k = 0; k < deg; ++k)
            m[static_cast<std::size_t>(deg - 1) + row][row + static_cast<std::size_t>(deg - 1 - k)] =
                b[static_cast<std::size_t>(k)];
    const Polynomial res = bareiss_determinant(std::move(m), nv);
    if (res.is_zero()) {
        report.degenerate = true;
        return report;
    }
    const Polynomial quotient = res.exact_divide(a[static_cast<std::size_t>(deg)]);
    report.equations.push_back(quotient.is_constant() ? res.primitive() : quotient.primitive());
    return report;
}

TransversalityReport pcrit_sampled(const std::vector<PolynomialMap>& pieces, int coordinates, int sample_budget,
                                   std::uint64_t seed)
{
    if (sample_budget < 0)
        throw Error(ErrorKind::InvalidArgument, "negative sample budget");
    if (sample_budget > kSampleBudgetCap)
        throw Error(ErrorKind::BudgetExceeded, "sample budget above " + std::to_string(kSampleBudgetCap));
    TransversalityReport report;
    report.method = MethodTag::Sampled;
    report.coordinates = coordinates;
    if (pieces.empty())
        return report;
    SplitMix64 rng(seed);
    const int per_piece = std::max(1, sample_budget / static_cast<int>(pieces.size()));
    for (const auto& piece : pieces) {
        if (static_cast<int>(piece.components.size()) != coordinates)
            throw Error(ErrorKind::DimensionMismatch, "map target does not match the coordinate count");
        for (const auto& c : piece.components)
            if (c.nvars() != piece.source_dim)
                throw Error(ErrorKind::DimensionMismatch, "map component in the wrong number of variables");
        for (int t = 0; t < per_piece; ++t) {
            RationalVector x;
            for (int j = 0; j < piece.source_dim; ++j) {
                Rational v(Integer(static_cast<long>(rng.range(-6, 6))), Integer(static_cast<long>(rng.range(1, 4))));
                v.canonicalize();
                x.push_back(v);
            }
            std::vector<RationalVector> spanning(1 + static_cast<std::size_t>(piece.source_dim));
            for (const auto& c : piece.components)
                spanning[0].push_back(c.evaluate(x));
            if (std::all_of(spanning[0].begin(), spanning[0].end(), [](const Rational& v) { return v == 0; }))
                continue;  // the cone vertex is not a projective point
            for (int j = 0; j < piece.source_dim; ++j)
                for (const auto& c : piece.components)
                    spanning[1 + static_cast<std::size_t>(j)].push_back(c.derivative(j).evaluate(x));
            Subspace ann = Subspace::span(coordinates, spanning).perp();
            if (!ann.is_zero() && std::find(report.sampled_annihilators.begin(), report.sampled_annihilators.end(),
                                            ann) == report.sampled_annihilators.end())
                report.sampled_annihilators.push_back(std::move(ann));
        }
    }
    return report;
}

bool smooth_locus_membership(const TransversalityReport& report, const RationalVector& xi)
{
    if (static_cast<int>(xi.size()) != report.coordinates)
        throw Error(ErrorKind::DimensionMismatch, "frequency has " + std::to_string(xi.size()) + " coordinates, expected " +
                                                      std::to_string(report.coordinates));
    if (std::all_of(xi.begin(), xi.end(), [](const Rational& x) { return x == 0; }))
        throw Error(ErrorKind::ZeroFrequency, "the smooth locus lives in W* minus 0");
    if (report.degenerate)
        return false;
    if (report.method == MethodTag::Exact)
        return std::none_of(report.equations.begin(), report.equations.end(),
                            [&](const Polynomial& eq) { return eq.evaluate(xi) == 0; });
    return std::none_of(report.sampled_annihilators.begin(), report.sampled_annihilators.end(),
                        [&](const Subspace& s) { return s.contains(xi); });
}

std::vector<std::string> dual_variable_names(int coordinates)
{
    std::vector<std::string> names;
    for (int i = 0; i < coordinates; ++i)
        names.push_back("l" + std::to_string(i));
    return names;
}

json to_json(const TransversalityReport& report)
{
    json j;
    j["method"] = to_string(report.method);
    j["coordinates"] = report.coordinates;
    j["variables"] = dual_variable_names(report.coordinates);
    j["degenerate"] = report.degenerate;
    json eqs = json::array();
    for (const auto& eq : report.equations)
        eqs.push_back(eq.to_string(dual_variable_names(report.coordinates)));
    j["equations"] = eqs;
    if (report.method == MethodTag::Sampled) {
        json pts = json::array();
        for (const auto& v : report.samples()) {
            json row = json::array();
            for (const auto& x : v)
                row.push_back(rational_to_string(x));
            pts.push_back(row);
        }
        j["samples"] = pts;
    }
    return j;
}

}  // namespace padicwf
