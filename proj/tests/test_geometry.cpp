#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "padicwf/geometry.hpp"

using namespace padicwf;

namespace {

RationalVector vec(std::initializer_list<long> xs)
{
    RationalVector v;
    for (long x : xs)
        v.push_back(Rational(x));
    return v;
}

AmbientSpec ambient(int q, int d)
{
    return AmbientSpec{q, d, FiberKind::W};
}

RationalVector in_subspace(SplitMix64& rng, const Subspace& s)
{
    RationalVector v(static_cast<std::size_t>(s.ambient_dim()), Rational(0));
    for (const auto& row : s.basis()) {
        const Rational c = gen::small_rational(rng);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] += c * row[i];
    }
    return v;
}

// A random point of the given component.
CotangentPoint point_on(SplitMix64& rng, const AmbientSpec& a, const ConormalComponent& c)
{
    CotangentPoint pt{gen::vector(rng, a.y_dim), in_subspace(rng, c.fiber_base), RationalVector(a.y_dim, Rational(0)),
                      in_subspace(rng, c.conormal_fiber)};
    for (int i : c.zero_set)
        pt.y[static_cast<std::size_t>(i)] = 0;
    for (int i : c.conormal_support)
        pt.eta[static_cast<std::size_t>(i)] = gen::small_rational(rng);
    return pt;
}

RationalVector scaled(RationalVector v, const Rational& c)
{
    for (auto& x : v)
        x *= c;
    return v;
}

}  // namespace

TEST_CASE("subspace linear algebra")
{
    const Subspace e1 = Subspace::span(2, {vec({3, 0})});
    CHECK(e1.basis() == std::vector<RationalVector>{vec({1, 0})});
    CHECK(e1.perp() == Subspace::span(2, {vec({0, 1})}));
    CHECK(Subspace::zero(3).perp() == Subspace::full(3));
    CHECK(Subspace::full(3).perp().is_zero());
    CHECK(Subspace::span(3, {vec({1, 1, 0}), vec({2, 2, 0})}).dim() == 1);
    CHECK_THROWS_AS(Subspace::span(2, {vec({1, 2, 3})}), Error);

    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = static_cast<int>(rng.range(0, 4));
        const Subspace s = gen::subspace(rng, d);
        const Subspace sp = s.perp();
        CHECK(s.dim() + sp.dim() == d);
        CHECK(sp.perp() == s);
        for (const auto& a : s.basis())
            for (const auto& b : sp.basis()) {
                Rational dot = 0;
                for (int i = 0; i < d; ++i)
                    dot += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
                CHECK(dot == 0);
            }
        CHECK(s.contains(in_subspace(rng, s)));
        CHECK(Subspace::full(d).contains(s));
        CHECK(s.contains(Subspace::zero(d)));
    }
}

TEST_CASE("crit_of_map examples")
{
    const auto zero_only = crit_of_map(ambient(2, 1), {});
    REQUIRE(zero_only.components.size() == 1);
    CHECK(zero_only.components[0] == ConormalComponent::conormal_of({}, Subspace::full(1)));

    // Two divisor components with both rules on every nonempty intersection.
    std::vector<Stratum> strata;
    for (std::vector<int> s : {std::vector<int>{0}, {1}, {0, 1}}) {
        strata.push_back({s, WBlockRule::FullFiber, {}});
        strata.push_back({s, WBlockRule::ZeroSection, {}});
    }
    const auto crit = crit_of_map(ambient(2, 1), strata);
    CHECK(crit.components.size() == 7);
    CHECK(is_conic(crit));
    CHECK(is_lagrangian(crit));

    const auto one = crit_of_map(ambient(1, 1), {{{0}, WBlockRule::FullFiber, {}}, {{0}, WBlockRule::ZeroSection, {}}});
    REQUIRE(one.components.size() == 3);
    CHECK(one.components[0] == ConormalComponent::conormal_of({}, Subspace::full(1)));
    CHECK(one.components[1] == ConormalComponent::conormal_of({0}, Subspace::zero(1)));
    CHECK(one.components[2] == ConormalComponent::conormal_of({0}, Subspace::full(1)));

    auto kind_of = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    CHECK(kind_of([] { crit_of_map(ambient(1, 1), {{{1}, WBlockRule::FullFiber, {}}}); }) ==
          ErrorKind::MalformedStratum);
    CHECK(kind_of([] { crit_of_map(ambient(2, 1), {{{0, 0}, WBlockRule::FullFiber, {}}}); }) ==
          ErrorKind::MalformedStratum);
    CHECK(kind_of([] { crit_of_map(ambient(1, 2), {{{0}, WBlockRule::Subbundle, Subspace::full(3)}}); }) ==
          ErrorKind::MalformedStratum);
}

TEST_CASE("symplectic_swap examples")
{
    const ConicSetDescriptor zero_fiber{ambient(1, 2), {ConormalComponent::conormal_of({}, Subspace::zero(2))}};
    const auto swapped = symplectic_swap(zero_fiber);
    CHECK(swapped.ambient.fiber == FiberKind::WDual);
    CHECK(swapped.components[0].fiber_base.is_full());
    CHECK(swapped.components[0].conormal_fiber.is_zero());
    CHECK(symplectic_swap(swapped) == zero_fiber);

    const ConicSetDescriptor e1{ambient(1, 2),
                                {ConormalComponent::conormal_of({}, Subspace::span(2, {vec({1, 0})}))}};
    const auto s1 = symplectic_swap(e1);
    CHECK(s1.components[0].fiber_base == Subspace::span(2, {vec({0, 1})}));
    CHECK(s1.components[0].w_block_rule() == WBlockRule::Subbundle);
}

TEST_CASE("pushforward examples")
{
    const ConicSetDescriptor d{ambient(2, 1),
                               {ConormalComponent::conormal_of({}, Subspace::full(1)),
                                ConormalComponent::conormal_of({0}, Subspace::full(1))}};
    CHECK(pushforward_coordinate(d, CoordinateProjection::identity(2)) == d);

    const auto pushed = pushforward_coordinate(d, {2, {0}});
    const ConicSetDescriptor expected{ambient(1, 1),
                                      {ConormalComponent::conormal_of({}, Subspace::full(1)),
                                       ConormalComponent::conormal_of({0}, Subspace::full(1))}};
    CHECK(pushed == expected);

    // Dropping a coordinate of the zero set leaves an isotropic, non-Lagrangian piece.
    const auto dropped = pushforward_coordinate(d, {2, {1}});
    CHECK(dropped.components.size() == 1);
    CHECK(isotropic_check(dropped));

    const auto zero = crit_of_map(ambient(3, 2), {});
    CHECK(pushforward_coordinate(zero, {3, {2, 0}}) == crit_of_map(ambient(2, 2), {}));

    CHECK_THROWS_AS(pushforward_coordinate(d, {2, {0, 0}}), Error);
    CHECK_THROWS_AS(pushforward_coordinate(d, {2, {2}}), Error);
    CHECK_THROWS_AS(pushforward_coordinate(d, {3, {0}}), Error);
}

TEST_CASE("structural predicates")
{
    const auto zero = crit_of_map(ambient(2, 2), {});
    CHECK(is_conic(zero));
    CHECK(is_homothety_stable(zero));
    CHECK(isotropic_check(zero));

    // Covector support outside the zero set: too many dimensions.
    ConicSetDescriptor bad{ambient(2, 1), {ConormalComponent::conormal_of({0}, Subspace::full(1))}};
    bad.components[0].conormal_support = {0, 1};
    CHECK_FALSE(isotropic_check(bad));
    // Covector in the fiber not annihilating the base.
    ConicSetDescriptor bad2{ambient(1, 1), {ConormalComponent::conormal_of({}, Subspace::full(1))}};
    bad2.components[0].conormal_fiber = Subspace::full(1);
    CHECK_FALSE(isotropic_check(bad2));
    ConicSetDescriptor bad3{ambient(1, 1), {ConormalComponent::conormal_of({3}, Subspace::full(1))}};
    CHECK_FALSE(is_well_formed(bad3));
    CHECK_FALSE(isotropic_check(bad3));
}

TEST_CASE("membership examples")
{
    const auto one = crit_of_map(ambient(1, 1), {{{0}, WBlockRule::FullFiber, {}}, {{0}, WBlockRule::ZeroSection, {}}});
    CHECK(membership(one, {vec({5}), vec({-2}), vec({0}), vec({0})}));
    CHECK(membership(one, {vec({0}), vec({7}), vec({1}), vec({0})}));
    CHECK(membership(one, {vec({0}), vec({0}), vec({1}), vec({3})}));
    CHECK_FALSE(membership(one, {vec({0}), vec({1}), vec({1}), vec({3})}));
    CHECK_FALSE(membership(one, {vec({2}), vec({1}), vec({1}), vec({0})}));
    CHECK_THROWS_AS(membership(one, {vec({0, 0}), vec({0}), vec({0}), vec({0})}), Error);

    CHECK(singular_fiber_nonempty(one, vec({0}), vec({4})));
    CHECK_FALSE(singular_fiber_nonempty(one, vec({1}), vec({4})));
}

TEST_CASE("property: swap is an involution, crit outputs are Lagrangian")
{
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto desc = gen::conormal_union(rng);
        CHECK(is_lagrangian(desc));
        CHECK(is_conic(desc));
        CHECK(symplectic_swap(symplectic_swap(desc)) == desc);
        CHECK(is_lagrangian(symplectic_swap(desc)));
        const auto proj = gen::projection(rng, desc.ambient.y_dim);
        CHECK(isotropic_check(pushforward_coordinate(desc, proj)));
    }
}

TEST_CASE("property: membership is stable under covector and fiber scaling")
{
    SplitMix64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const auto desc = gen::conormal_union(rng);
        const auto& c = desc.components[rng.below(desc.components.size())];
        CotangentPoint pt = point_on(rng, desc.ambient, c);
        REQUIRE(membership(desc, pt));
        Rational t = gen::small_rational(rng);
        if (t == 0)
            t = 5;
        CHECK(membership(desc, {pt.y, pt.w, scaled(pt.eta, t), scaled(pt.phi, t)}));
        CHECK(membership(desc, {pt.y, scaled(pt.w, t), pt.eta, pt.phi}));
    }
}

TEST_CASE("descriptor JSON round trip and strictness")
{
    SplitMix64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto desc = gen::conormal_union(rng);
        CHECK(descriptor_from_json(to_json(desc)) == desc);
        CHECK(descriptor_from_json(nlohmann::json::parse(to_json(desc).dump())) == desc);
    }
    auto j = to_json(crit_of_map(ambient(1, 1), {{{0}, WBlockRule::ZeroSection, {}}}));
    auto extra = j;
    extra["components"][0]["colour"] = 1;
    CHECK_THROWS_AS(descriptor_from_json(extra), Error);
    auto flt = j;
    flt["components"][0]["fiber_base"] = nlohmann::json::array({nlohmann::json::array({0.5})});
    flt["components"][0]["w_block_rule"] = "FullFiber";
    CHECK_THROWS_AS(descriptor_from_json(flt), Error);
    auto wrong_rule = j;
    wrong_rule["components"][0]["w_block_rule"] = "Subbundle";
    CHECK_THROWS_AS(descriptor_from_json(wrong_rule), Error);

    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK(parse_rational("7") == 7);
    CHECK_THROWS_AS(parse_rational("0.5"), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("1e3"), Error);
    CHECK(rational_to_string(Rational(-1, 2)) == "-1/2");
}
