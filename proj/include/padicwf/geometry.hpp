#pragma once

// Conic subsets of T*(Y x W) and T*(Y x W*) presented as finite unions of
// components
//   {(y, w; eta, phi) : y_S = 0, w in E, supp(eta) in T, phi in F}.
// The conormal bundle of the stratum {y_S = 0} x E is the case T = S, F = E^perp.

#include "padicwf/padic_core.hpp"

#include <json.hpp>

#include <vector>

namespace padicwf {

using RationalVector = std::vector<Rational>;

enum class FiberKind { W, WDual };

struct AmbientSpec {
    int y_dim = 0;      // q
    int fiber_dim = 0;  // d
    FiberKind fiber = FiberKind::W;

    friend bool operator==(const AmbientSpec&, const AmbientSpec&) = default;
};

/// Linear subspace of Q^d kept as a reduced row echelon basis, so equality
/// and ordering are structural.
class Subspace {
public:
    Subspace() = default;
    static Subspace zero(int d);
    static Subspace full(int d);
    static Subspace span(int d, const std::vector<RationalVector>& vectors);

    int ambient_dim() const noexcept { return d_; }
    int dim() const noexcept { return static_cast<int>(basis_.size()); }
    const std::vector<RationalVector>& basis() const noexcept { return basis_; }
    bool is_zero() const noexcept { return basis_.empty(); }
    bool is_full() const noexcept { return dim() == d_; }

    /// Annihilator under the standard pairing.
    Subspace perp() const;
    bool contains(const RationalVector& v) const;
    bool contains(const Subspace& other) const;

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.d_ == b.d_ && a.basis_ == b.basis_; }
    friend bool operator<(const Subspace& a, const Subspace& b);

private:
    int d_ = 0;
    std::vector<RationalVector> basis_;
};

enum class WBlockRule { ZeroSection, FullFiber, Subbundle };

const char* to_string(WBlockRule rule);

/// ZeroSection for the zero subspace, FullFiber for everything, else Subbundle.
WBlockRule rule_of(const Subspace& s);

struct ConormalComponent {
    std::vector<int> zero_set;          // S
    Subspace fiber_base;                // E, inside the fiber block
    std::vector<int> conormal_support;  // T
    Subspace conormal_fiber;            // F, inside the dual of the fiber block

    /// Conormal bundle of {y_S = 0} x E.
    static ConormalComponent conormal_of(std::vector<int> zero_set, Subspace fiber_base);

    WBlockRule w_block_rule() const { return rule_of(fiber_base); }
    /// Point-set containment of components.
    bool contains(const ConormalComponent& other) const;

    friend bool operator==(const ConormalComponent&, const ConormalComponent&) = default;
    friend bool operator<(const ConormalComponent& a, const ConormalComponent& b);
};

struct ConicSetDescriptor {
    AmbientSpec ambient;
    std::vector<ConormalComponent> components;

    /// Sorts components, removes duplicates and components contained in another.
    void canonicalize();

    friend bool operator==(const ConicSetDescriptor&, const ConicSetDescriptor&) = default;
};

/// Stratum {y_S = 0} x E with E given by a rule; `subbundle` is read only for
/// WBlockRule::Subbundle.
struct Stratum {
    std::vector<int> zero_set;
    WBlockRule rule = WBlockRule::FullFiber;
    Subspace subbundle;
};

/// Union of the conormals of the strata together with the ambient zero section.
/// Throws MalformedStratum for out-of-range or repeated indices or a subbundle
/// of the wrong ambient dimension.
ConicSetDescriptor crit_of_map(const AmbientSpec& ambient, const std::vector<Stratum>& strata);

/// The image under (w, phi) -> (phi, -w); toggles W and W*.
ConicSetDescriptor symplectic_swap(const ConicSetDescriptor& desc);

/// Y-coordinate projection keeping `kept` (in this order) out of `source_dim`.
struct CoordinateProjection {
    int source_dim = 0;
    std::vector<int> kept;

    static CoordinateProjection identity(int n);
};

/// Throws UnsupportedMap when `kept` repeats or leaves the range.
ConicSetDescriptor pushforward_coordinate(const ConicSetDescriptor& desc, const CoordinateProjection& proj);

/// Indices in range, sorted, subspaces of the fiber dimension.
bool is_well_formed(const ConicSetDescriptor& desc);
bool is_conic(const ConicSetDescriptor& desc);
bool is_homothety_stable(const ConicSetDescriptor& desc);
/// Every component lies in the conormal bundle of its base (T in S, F in E^perp).
bool isotropic_check(const ConicSetDescriptor& desc);
/// isotropic_check plus the Lagrangian dimension count q + d per component.
bool is_lagrangian(const ConicSetDescriptor& desc);

struct CotangentPoint {
    RationalVector y;    // q
    RationalVector w;    // d, base point in the fiber block
    RationalVector eta;  // q
    RationalVector phi;  // d, covector on the fiber block
};

/// Throws DimensionMismatch when the point does not fit the ambient.
bool membership(const ConicSetDescriptor& desc, const CotangentPoint& point);

/// True when some component through the base point (y, w) has a nonzero covector.
bool singular_fiber_nonempty(const ConicSetDescriptor& desc, const RationalVector& y, const RationalVector& w);

nlohmann::json to_json(const ConicSetDescriptor& desc);
/// Throws Parse on schema violations.
ConicSetDescriptor descriptor_from_json(const nlohmann::json& j);

std::string rational_to_string(const Rational& q);
/// Accepts "a", "-a", "a/b"; throws Parse otherwise (decimal literals included).
Rational parse_rational(const std::string& text);

}  // namespace padicwf
