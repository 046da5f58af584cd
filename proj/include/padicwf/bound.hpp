#pragma once

// The explicit wave-front bound L in T*(Y x W*) assembled from resolution
// charts, and the non-transversality locus PCrit whose complement U is the
// predicted smooth locus of the Fourier transform.

#include "padicwf/geometry.hpp"
#include "padicwf/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace padicwf {

/// Monomial chart: phi is a unit times prod y_i^{-l_i}, the density a unit
/// times prod |y_i|^{r_i}. The map to Y keeps chart coordinates `tau` in order.
struct ResolutionChart {
    std::string id;
    std::vector<int> l;
    std::vector<int> r;
    std::vector<bool> dprime;  // divisor components over the pole locus
    std::vector<int> tau;
    /// Tautological direction in W, chart-constant; required when dim W >= 2
    /// and some dprime flag is set.
    std::optional<RationalVector> direction;
    std::string glue;

    int n() const noexcept { return static_cast<int>(l.size()); }
    /// Divisor components: l_i > 0 or r_i != 0.
    std::vector<int> divisor() const;
    /// Throws MalformedStratum.
    void validate(int d) const;
};

/// Builds L over Y of dimension q with fiber W of dimension d; the result
/// lives in the W* ambient. Throws UnsupportedMap for a tau that is not a
/// coordinate projection onto q coordinates, MalformedStratum for bad charts.
ConicSetDescriptor build_L(const std::vector<ResolutionChart>& charts, int d, int q);

/// One-parameter curve s -> (param_0(s) : ... : param_d(s)) in the projective
/// space of W*, so xi has d + 1 homogeneous coordinates.
struct CurveScene {
    int d = 1;
    std::vector<Polynomial> param;  // univariate

    /// Throws InvalidArgument (shape, zero map, gcd != 1) or DegreeTooHigh.
    void validate() const;
};

enum class MethodTag { Exact, Sampled };

const char* to_string(MethodTag tag);

struct TransversalityReport {
    MethodTag method = MethodTag::Exact;
    int coordinates = 0;  // length of xi
    std::vector<Polynomial> equations;  // Exact
    /// The whole space is non-transversal (param and param' identically
    /// proportional); U is empty.
    bool degenerate = false;
    /// Sampled: the hyperplanes killing the image of the differential at
    /// each sampled source point.
    std::vector<Subspace> sampled_annihilators;

    /// Points of the sampled cloud (annihilator bases).
    std::vector<RationalVector> samples() const;
};

/// Eliminates s from <l, param(s)> = <l, param'(s)> = 0 via a Sylvester
/// resultant; the leading-coefficient factor (roots at s = infinity) is
/// divided out unless nothing else would remain.
TransversalityReport pcrit_exact(const CurveScene& scene);

/// Polynomial map from Q^source_dim to the affine cone over the projective
/// space of W*.
struct PolynomialMap {
    int source_dim = 0;
    std::vector<Polynomial> components;
};

inline constexpr int kSampleBudgetCap = 100000;

/// Throws BudgetExceeded when sample_budget exceeds kSampleBudgetCap,
/// DimensionMismatch for pieces of the wrong target size.
TransversalityReport pcrit_sampled(const std::vector<PolynomialMap>& pieces, int coordinates, int sample_budget,
                                   std::uint64_t seed);

/// Exact mode: no equation vanishes at xi. Sampled mode: xi lies in no sampled
/// annihilator (a heuristic). Throws ZeroFrequency for xi = 0.
bool smooth_locus_membership(const TransversalityReport& report, const RationalVector& xi);

/// Variable names l0..ld for report equations.
std::vector<std::string> dual_variable_names(int coordinates);

nlohmann::json to_json(const TransversalityReport& report);

}  // namespace padicwf
