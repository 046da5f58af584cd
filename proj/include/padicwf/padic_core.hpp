#pragma once

// Exact p-adic scalars, the normalized absolute value, the standard additive
// character psi(x) = exp(2 pi i {x}_p), and exact arithmetic in Q(zeta_{p^m}).

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicwf {

using Integer = mpz_class;
using Rational = mpq_class;

enum class ErrorKind {
    InvalidArgument,
    LevelExceeded,
    NotAUnit,
    Divergent,
    DivisorTouched,
    MalformedStratum,
    UnsupportedMap,
    DimensionMismatch,
    DegreeTooHigh,
    BudgetExceeded,
    ZeroFrequency,
    Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Valuation of zero.
inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

/// The prime p together with the cap M on character conductors p^M.
class PrimeContext {
public:
    PrimeContext(long p, int max_level);

    long prime() const noexcept { return p_; }
    int max_level() const noexcept { return max_level_; }

    /// p^k as a machine integer; throws LevelExceeded when p^k does not fit
    /// comfortably in 62 bits.
    std::int64_t power(int k) const;
    Rational rational_power(int k) const;  // p^k for any integer k

    /// Throws LevelExceeded when level > max_level.
    void check_level(int level) const;

private:
    long p_;
    int max_level_;
};

bool is_prime(long n);

/// An element of Q viewed inside Q_p.
class PAdicScalar {
public:
    PAdicScalar() = default;
    PAdicScalar(Rational value) : value_(std::move(value)) { value_.canonicalize(); }
    PAdicScalar(long value) : value_(value) {}

    const Rational& value() const noexcept { return value_; }
    bool is_zero() const { return value_ == 0; }

    friend bool operator==(const PAdicScalar& a, const PAdicScalar& b) { return a.value_ == b.value_; }

private:
    Rational value_{0};
};

int valuation(const Integer& x, long p);
int valuation(const Rational& x, long p);
inline int valuation(const PAdicScalar& x, const PrimeContext& ctx) { return valuation(x.value(), ctx.prime()); }

/// |x|_p = p^{-v_p(x)}, and 0 for x = 0.
Rational abs_norm(const Rational& x, long p);
inline Rational abs_norm(const PAdicScalar& x, const PrimeContext& ctx) { return abs_norm(x.value(), ctx.prime()); }

/// u^{-1} mod p^k. Throws NotAUnit when p | u.
std::int64_t unit_inverse_mod(const Integer& u, int k, const PrimeContext& ctx);

/// Residue of a p-integral rational modulo p^k (in [0, p^k)).
/// Throws InvalidArgument when x is not p-integral.
std::int64_t residue_mod(const Rational& x, int k, const PrimeContext& ctx);

/// Element of Q(zeta_{p^m}) stored as sum_j c_j zeta^j over the powerful basis:
/// exponents j with j < (p-1) p^{m-1}. The level is always the least m such that
/// the value lies in Q(zeta_{p^m}), so equality is structural.
class CyclotomicValue {
public:
    CyclotomicValue() = default;  // zero, prime 0 means "not yet bound"
    explicit CyclotomicValue(long p) : p_(p) {}

    static CyclotomicValue zero(long p) { return CyclotomicValue(p); }
    static CyclotomicValue rational(long p, const Rational& q);
    /// zeta_{p^level}^exponent
    static CyclotomicValue root_of_unity(long p, int level, std::int64_t exponent);
    /// Builds sum_j coeffs[j] zeta_{p^level}^j for a dense coefficient vector of
    /// length p^level, then canonicalizes.
    static CyclotomicValue from_dense(long p, int level, const std::vector<Rational>& coeffs);
    static CyclotomicValue from_sparse(long p, int level, std::map<std::int64_t, Rational> coeffs);

    long prime() const noexcept { return p_; }
    int level() const noexcept { return level_; }
    const std::map<std::int64_t, Rational>& coefficients() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_rational() const noexcept { return level_ == 0; }
    /// Value when is_rational(); throws InvalidArgument otherwise.
    Rational rational_value() const;

    /// Coefficients of the same value written over zeta_{p^level}, level >= level().
    std::map<std::int64_t, Rational> embedded_coefficients(int level) const;

    CyclotomicValue conjugate() const;
    std::complex<double> to_complex() const;

    CyclotomicValue& operator+=(const CyclotomicValue& other);
    CyclotomicValue& operator-=(const CyclotomicValue& other);
    CyclotomicValue& operator*=(const Rational& scale);
    friend CyclotomicValue operator+(CyclotomicValue a, const CyclotomicValue& b) { return a += b; }
    friend CyclotomicValue operator-(CyclotomicValue a, const CyclotomicValue& b) { return a -= b; }
    friend CyclotomicValue operator*(CyclotomicValue a, const Rational& s) { return a *= s; }
    friend CyclotomicValue operator*(const Rational& s, CyclotomicValue a) { return a *= s; }
    friend CyclotomicValue operator*(const CyclotomicValue& a, const CyclotomicValue& b);
    friend bool operator==(const CyclotomicValue& a, const CyclotomicValue& b);
    friend bool operator!=(const CyclotomicValue& a, const CyclotomicValue& b) { return !(a == b); }

    /// Canonical reduction; idempotent. Public so callers building values by
    /// hand can normalize.
    void reduce();

    std::string to_string() const;

private:
    void bind_prime(long p);
    void raise_level(int level);

    long p_ = 0;
    int level_ = 0;
    std::map<std::int64_t, Rational> coeffs_;
};

CyclotomicValue psi(const PAdicScalar& x, const PrimeContext& ctx);

inline CyclotomicValue cyclo_add(const CyclotomicValue& a, const CyclotomicValue& b) { return a + b; }
inline CyclotomicValue cyclo_scale(const CyclotomicValue& a, const Rational& s) { return a * s; }
inline bool cyclo_eq(const CyclotomicValue& a, const CyclotomicValue& b) { return a == b; }
inline std::complex<double> cyclo_to_complex(const CyclotomicValue& a) { return a.to_complex(); }

/// {y in Z_p^n : y = base mod p^level}; level 0 is all of Z_p^n.
class ResidueCube {
public:
    ResidueCube() = default;
    ResidueCube(std::vector<std::int64_t> base, int level, const PrimeContext& ctx);
    static ResidueCube whole(int dim) { ResidueCube c; c.base_.assign(static_cast<std::size_t>(dim), 0); return c; }

    int dim() const noexcept { return static_cast<int>(base_.size()); }
    int level() const noexcept { return level_; }
    const std::vector<std::int64_t>& base() const noexcept { return base_; }
    Rational volume(const PrimeContext& ctx) const { return ctx.rational_power(-dim() * level_); }

    /// The p^dim sub-cubes one level finer.
    std::vector<ResidueCube> refine(const PrimeContext& ctx) const;

    friend bool operator==(const ResidueCube&, const ResidueCube&) = default;

private:
    std::vector<std::int64_t> base_;
    int level_ = 0;
};

/// One coordinate of a p-adic box: center + p^level Z_p, level may be negative.
struct PAdicBall {
    Rational center{0};
    int level = 0;

    /// True when 0 lies in the ball.
    bool contains_zero(long p) const { return valuation(center, p) >= level; }
};

/// Product of balls; the transport of a ResidueCube by a torus element.
using PAdicBox = std::vector<PAdicBall>;

PAdicBox to_box(const ResidueCube& cube);

}  // namespace padicwf
