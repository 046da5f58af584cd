#pragma once

// Finite-level probes of smoothness and wave-front directions, identity
// suites, and the coverage check of observed singular directions against L.

#include "padicwf/char_sums.hpp"
#include "padicwf/geometry.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace padicwf {

enum class OutcomeKind { StabilizedAt, VanishedAt, NotStabilized };

const char* to_string(OutcomeKind kind);

struct ProbeOutcome {
    OutcomeKind kind = OutcomeKind::NotStabilized;
    int level = 0;  // k for StabilizedAt / VanishedAt, the budget for NotStabilized

    friend bool operator==(const ProbeOutcome&, const ProbeOutcome&) = default;
};

/// VanishedAt(k): every value from index k on is zero. StabilizedAt(k): the
/// values from k on are equal, nonzero, and at least two of them. Levels are
/// 1-based.
ProbeOutcome classify(const std::vector<CyclotomicValue>& values);

struct ProbeReport {
    std::string id;
    ResidueCube cube;
    RationalVector direction;
    int k_max = 0;
    ProbeOutcome outcome;
    std::vector<CyclotomicValue> values;  // values[j - 1] at lambda = p^{-j}
};

/// Localized transform at lambda * xi0 for lambda = p^{-1}, ..., p^{-k_max}.
/// Throws ZeroFrequency for xi0 = 0, DimensionMismatch for a direction of the
/// wrong length.
ProbeReport smoothness_probe(const AnyScene& scene, const ResidueCube& cube, const RationalVector& xi0, int k_max,
                             const PrimeContext& ctx, const std::optional<Rational>& twist_scale = std::nullopt,
                             const EvalOptions& options = {});

struct ConstancyReport {
    std::string id;
    ResidueCube cube;
    RationalVector xi;
    int refine_max = 0;
    std::optional<int> stabilized_at;  // nullopt: NotStabilized within the budget
};

/// Compares F(xi) with F(xi (1 + p^j u)) for u = 1..p-1 and F(xi + p^j e_i),
/// j = 1..refine_max. Returns the least j from which every tested
/// perturbation agrees through refine_max.
ConstancyReport local_constancy_probe(const AnyScene& scene, const ResidueCube& cube, const RationalVector& xi,
                                      int refine_max, const PrimeContext& ctx,
                                      const std::optional<Rational>& twist_scale = std::nullopt,
                                      const EvalOptions& options = {});

struct SuiteResult {
    std::string suite;
    std::uint64_t seed = 0;
    int trials = 0;
    int failures = 0;
    std::vector<nlohmann::json> counterexamples;  // at most a few are kept

    bool passed() const noexcept { return failures == 0 && trials > 0; }
};

/// scaled_eval against homogeneity_factor * inverse_ft on random torus
/// elements alpha = +-p^e u (|e| <= 2), cubes and frequencies. With
/// `drop_factor` the |alpha| factor is omitted (a negative control).
SuiteResult homogeneity_suite(const MonomialScene& scene, int trials, std::uint64_t seed, const PrimeContext& ctx,
                              bool drop_factor = false);

/// Integral over the cube of prod_k psi(xi_k a_k prod y_i^{-l_i}) |y|^r,
/// evaluated stratum by stratum as a product of characters, against
/// inverse_ft at the scalar frequency <xi, a>. Throws InvalidArgument when
/// a = 0 or the lengths differ, BudgetExceeded past 2^22 residue points.
bool reduction_identity_check(const RationalVector& a, const MonomialScene& scene, const ResidueCube& cube,
                              const RationalVector& xi, const PrimeContext& ctx);

/// direct_ft against brute_force_ft at the phase precision on random cubes
/// and frequencies; for a monomial scene, inverse_ft against brute force on
/// random cubes that avoid the divisor.
SuiteResult oracle_suite(const AnyScene& scene, int trials, std::uint64_t seed, const PrimeContext& ctx);

/// The integral of psi(xi y) over Z_p is 1 for v(xi) >= 0 and 0 below, on
/// random xi with |v(xi)| <= max_level.
SuiteResult floor_suite(int trials, std::uint64_t seed, const PrimeContext& ctx);

/// Riemann sums over the sub-cubes of `cube` that avoid the divisor, refined
/// down to level `depth`; the part of the cube within p^depth of the divisor
/// is dropped. Exact once every dropped stratum integrates to zero.
/// Throws BudgetExceeded past 2^20 sub-cubes.
CyclotomicValue truncated_oracle(const MonomialScene& scene, const ResidueCube& cube, const PAdicScalar& xi, int depth,
                                 const PrimeContext& ctx);

enum class ProbeKind { Ray, Constancy };

struct ProbePlanEntry {
    std::string id;
    ProbeKind kind = ProbeKind::Ray;
    ResidueCube cube;
    RationalVector xi;
    int k_max = 4;  // ray budget, or refine_max for constancy probes
    std::optional<Rational> twist_scale;
};

struct Violation {
    std::string probe_id;
    std::string reason;
};

struct CoverReport {
    std::vector<ProbeReport> rays;
    std::vector<ConstancyReport> constancy;
    std::vector<Violation> violations;

    bool passed() const noexcept { return violations.empty(); }
};

/// Runs the plan and checks one direction only: a ray probe that does not
/// stabilize at cube base y0 and direction xi0 needs (phi(y0), xi0) in the
/// swap of L; a constancy probe that does not stabilize at xi needs a
/// nonzero covector of L over xi. A monomial ray probe whose cube meets the
/// pole divisor has no finite base point and counts as a violation. L must
/// live over a point (y_dim 0) in the W* ambient.
CoverReport wavefront_cover_check(const AnyScene& scene, const ConicSetDescriptor& L,
                                  const std::vector<ProbePlanEntry>& plan, const PrimeContext& ctx,
                                  const EvalOptions& options = {});

nlohmann::json value_to_json(const CyclotomicValue& v);
nlohmann::json to_json(const ProbeReport& report);
nlohmann::json to_json(const ConstancyReport& report);
nlohmann::json to_json(const SuiteResult& result);
nlohmann::json to_json(const CoverReport& report);

}  // namespace padicwf
