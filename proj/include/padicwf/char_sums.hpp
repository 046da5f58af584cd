#pragma once

// Localized Fourier transforms of algebraic measures, evaluated exactly as
// finite character sums over residue classes and valuation strata.

#include "padicwf/padic_core.hpp"
#include "padicwf/polynomial.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace padicwf {

/// Chart with phase xi * prod y_i^{-l_i} and weight prod |y_i|^{r_i}.
struct MonomialScene {
    std::vector<int> l;
    std::vector<int> r;

    int n() const noexcept { return static_cast<int>(l.size()); }
    /// Throws InvalidArgument on length mismatch, negative l, or r_i < 0 where l_i = 0.
    void validate() const;
};

/// Chart with phase <xi, phi(y)> + t * twist(y) and weight prod |y_i|^{r_i}.
struct PolynomialScene {
    int n = 0;
    int d = 0;
    std::vector<Polynomial> phi;
    std::vector<int> r;
    std::optional<Polynomial> twist;

    /// Throws InvalidArgument on shape errors, non p-integral coefficients or
    /// negative weight exponents.
    void validate(const PrimeContext& ctx) const;
};

using AnyScene = std::variant<PolynomialScene, MonomialScene>;

struct FrequencyPoint {
    std::vector<PAdicScalar> xi;
    std::optional<PAdicScalar> twist_scale;
};

/// Integral of |y|^r over one ball. Throws Divergent when r <= -1 and the
/// ball contains 0.
Rational weight_ball_integral(const PAdicBall& ball, int r, const PrimeContext& ctx);

/// Integral of prod |y_i|^{r_i} over the cube.
Rational weight_cube_integral(const ResidueCube& cube, const std::vector<int>& r, const PrimeContext& ctx);

/// Smallest m with p^m * (phase coefficients) p-integral.
int phase_precision(const PolynomialScene& scene, const FrequencyPoint& freq, const PrimeContext& ctx);

struct EvalOptions {
    int threads = 1;
};

/// Integral over the cube of psi(<xi, phi(y)> + t q(y)) prod |y_i|^{r_i}.
CyclotomicValue direct_ft(const PolynomialScene& scene, const ResidueCube& cube, const FrequencyPoint& freq,
                          const PrimeContext& ctx, const EvalOptions& options = {});

/// Integral over the box of psi(xi prod y_i^{-l_i}) prod |y_i|^{r_i}.
CyclotomicValue inverse_ft(const MonomialScene& scene, const PAdicBox& box, const PAdicScalar& xi,
                           const PrimeContext& ctx);
CyclotomicValue inverse_ft(const MonomialScene& scene, const ResidueCube& cube, const PAdicScalar& xi,
                           const PrimeContext& ctx);

/// Riemann sum at level K with exact psi values. For the direct phase,
/// coordinates in p^K Z_p receive the closed-form weight tail.
CyclotomicValue brute_force_ft(const PolynomialScene& scene, const ResidueCube& cube, const FrequencyPoint& freq,
                               int K, const PrimeContext& ctx);
/// Requires every coordinate with l_i > 0 or r_i != 0 to keep valuation < K
/// on the cube; throws DivisorTouched otherwise.
CyclotomicValue brute_force_ft(const MonomialScene& scene, const ResidueCube& cube, const PAdicScalar& xi, int K,
                               const PrimeContext& ctx);

/// alpha^{-1} * box, coordinatewise.
PAdicBox transport_box(const PAdicBox& box, const std::vector<PAdicScalar>& alpha, const PrimeContext& ctx);

/// The transform of the transported data: inverse_ft over alpha^{-1} * cube at
/// frequency xi * prod alpha_i^{-l_i}. Equals
/// prod |alpha_i|^{-1-r_i} * inverse_ft(scene, cube, xi).
CyclotomicValue scaled_eval(const MonomialScene& scene, const std::vector<PAdicScalar>& alpha, const ResidueCube& cube,
                            const PAdicScalar& xi, const PrimeContext& ctx);

/// prod |alpha_i|^{-1-r_i}
Rational homogeneity_factor(const MonomialScene& scene, const std::vector<PAdicScalar>& alpha,
                            const PrimeContext& ctx);

}  // namespace padicwf
