#include "padicwf/padic_core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace padicwf {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::LevelExceeded: return "LevelExceeded";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::Divergent: return "Divergent";
    case ErrorKind::DivisorTouched: return "DivisorTouched";
    case ErrorKind::MalformedStratum: return "MalformedStratum";
    case ErrorKind::UnsupportedMap: return "UnsupportedMap";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ZeroFrequency: return "ZeroFrequency";
    case ErrorKind::Parse: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{
}

bool is_prime(long n)
{
    if (n < 2)
        return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

PrimeContext::PrimeContext(long p, int max_level) : p_(p), max_level_(max_level)
{
    if (!is_prime(p))
        throw Error(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
    if (max_level < 1)
        throw Error(ErrorKind::InvalidArgument, "max_level must be >= 1");
}

std::int64_t PrimeContext::power(int k) const
{
    if (k < 0)
        throw Error(ErrorKind::InvalidArgument, "negative exponent in PrimeContext::power");
    std::int64_t result = 1;
    for (int i = 0; i < k; ++i) {
        if (result > (std::int64_t{1} << 62) / p_)
            throw Error(ErrorKind::LevelExceeded, "p^" + std::to_string(k) + " exceeds machine range");
        result *= p_;
    }
    return result;
}

Rational PrimeContext::rational_power(int k) const
{
    Integer base;
    mpz_ui_pow_ui(base.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(k < 0 ? -k : k));
    if (k >= 0)
        return Rational(base);
    Rational r(1, base);
    r.canonicalize();
    return r;
}

void PrimeContext::check_level(int level) const
{
    if (level > max_level_)
        throw Error(ErrorKind::LevelExceeded,
                    "level " + std::to_string(level) + " exceeds max_level " + std::to_string(max_level_));
}

int valuation(const Integer& x, long p)
{
    if (x == 0)
        return kInfiniteValuation;
    Integer rest;
    Integer prime(p);
    return static_cast<int>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t()));
}

int valuation(const Rational& x, long p)
{
    if (x == 0)
        return kInfiniteValuation;
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

Rational abs_norm(const Rational& x, long p)
{
    if (x == 0)
        return 0;
    int v = valuation(x, p);
    Integer pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v < 0 ? -v : v));
    if (v <= 0)
        return Rational(pk);
    Rational r(1, pk);
    r.canonicalize();
    return r;
}

std::int64_t unit_inverse_mod(const Integer& u, int k, const PrimeContext& ctx)
{
    if (valuation(u, ctx.prime()) > 0)
        throw Error(ErrorKind::NotAUnit, u.get_str() + " is divisible by " + std::to_string(ctx.prime()));
    const Integer modulus(ctx.power(k));
    if (modulus == 1)
        return 0;
    Integer inv;
    mpz_invert(inv.get_mpz_t(), u.get_mpz_t(), modulus.get_mpz_t());
    Integer r = inv % modulus;
    if (r < 0)
        r += modulus;
    return r.get_si();
}

std::int64_t residue_mod(const Rational& x, int k, const PrimeContext& ctx)
{
    if (valuation(x.get_den(), ctx.prime()) > 0)
        throw Error(ErrorKind::InvalidArgument, x.get_str() + " is not p-integral");
    const Integer modulus(ctx.power(k));
    if (modulus == 1)
        return 0;
    Integer inv;
    mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), modulus.get_mpz_t());
    Integer r = (x.get_num() * inv) % modulus;
    if (r < 0)
        r += modulus;
    return r.get_si();
}

namespace {

std::int64_t ipow(long p, int k)
{
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i)
        r *= p;
    return r;
}

}  // namespace

CyclotomicValue CyclotomicValue::rational(long p, const Rational& q)
{
    CyclotomicValue v(p);
    if (q != 0)
        v.coeffs_[0] = q;
    return v;
}

CyclotomicValue CyclotomicValue::root_of_unity(long p, int level, std::int64_t exponent)
{
    const std::int64_t n = ipow(p, level);
    exponent %= n;
    if (exponent < 0)
        exponent += n;
    std::map<std::int64_t, Rational> c;
    c[exponent] = 1;
    return from_sparse(p, level, std::move(c));
}

CyclotomicValue CyclotomicValue::from_dense(long p, int level, const std::vector<Rational>& coeffs)
{
    std::map<std::int64_t, Rational> c;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        if (coeffs[j] != 0)
            c.emplace(static_cast<std::int64_t>(j), coeffs[j]);
    return from_sparse(p, level, std::move(c));
}

CyclotomicValue CyclotomicValue::from_sparse(long p, int level, std::map<std::int64_t, Rational> coeffs)
{
    CyclotomicValue v(p);
    v.level_ = level;
    v.coeffs_ = std::move(coeffs);
    v.reduce();
    return v;
}

Rational CyclotomicValue::rational_value() const
{
    if (level_ != 0)
        throw Error(ErrorKind::InvalidArgument, "cyclotomic value is not rational");
    auto it = coeffs_.find(0);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

void CyclotomicValue::bind_prime(long p)
{
    if (p_ == 0)
        p_ = p;
    else if (p != 0 && p != p_)
        throw Error(ErrorKind::InvalidArgument, "cyclotomic values over different primes");
}

void CyclotomicValue::raise_level(int level)
{
    if (level <= level_)
        return;
    const std::int64_t step = ipow(p_, level - level_);
    std::map<std::int64_t, Rational> raised;
    for (auto& [j, c] : coeffs_)
        raised.emplace_hint(raised.end(), j * step, std::move(c));
    coeffs_ = std::move(raised);
    level_ = level;
}

std::map<std::int64_t, Rational> CyclotomicValue::embedded_coefficients(int level) const
{
    CyclotomicValue copy = *this;
    copy.raise_level(level);
    return copy.coeffs_;
}

void CyclotomicValue::reduce()
{
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = it->second == 0 ? coeffs_.erase(it) : std::next(it);
    if (level_ == 0 || coeffs_.empty()) {
        if (coeffs_.empty())
            level_ = 0;
        return;
    }
    const std::int64_t n = ipow(p_, level_);
    // Fold exponents into [0, n).
    if (coeffs_.begin()->first < 0 || coeffs_.rbegin()->first >= n) {
        std::map<std::int64_t, Rational> folded;
        for (auto& [j, c] : coeffs_) {
            std::int64_t r = j % n;
            if (r < 0)
                r += n;
            folded[r] += c;
        }
        coeffs_ = std::move(folded);
    }
    // zeta^{j + (p-1)b} = -sum_{k<p-1} zeta^{j + k b}, b = p^{m-1}.
    const std::int64_t block = n / p_;
    const std::int64_t top = (p_ - 1) * block;
    std::vector<std::pair<std::int64_t, Rational>> high(coeffs_.lower_bound(top), coeffs_.end());
    coeffs_.erase(coeffs_.lower_bound(top), coeffs_.end());
    for (const auto& [j, c] : high)
        for (long k = 0; k < p_ - 1; ++k)
            coeffs_[j - top + k * block] -= c;
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = it->second == 0 ? coeffs_.erase(it) : std::next(it);
    // Descend while the value lives in a smaller cyclotomic field.
    while (level_ > 0) {
        bool all_divisible = true;
        for (const auto& [j, c] : coeffs_)
            if (j % p_ != 0) {
                all_divisible = false;
                break;
            }
        if (!all_divisible)
            break;
        std::map<std::int64_t, Rational> lowered;
        for (auto& [j, c] : coeffs_)
            lowered.emplace_hint(lowered.end(), j / p_, std::move(c));
        coeffs_ = std::move(lowered);
        --level_;
    }
}

CyclotomicValue& CyclotomicValue::operator+=(const CyclotomicValue& other)
{
    bind_prime(other.p_);
    if (other.coeffs_.empty())
        return *this;
    raise_level(other.level_);
    const std::int64_t step = ipow(p_, level_ - other.level_);
    for (const auto& [j, c] : other.coeffs_)
        coeffs_[j * step] += c;
    reduce();
    return *this;
}

CyclotomicValue& CyclotomicValue::operator-=(const CyclotomicValue& other)
{
    CyclotomicValue neg = other;
    neg *= Rational(-1);
    return *this += neg;
}

CyclotomicValue& CyclotomicValue::operator*=(const Rational& scale)
{
    if (scale == 0) {
        coeffs_.clear();
        level_ = 0;
        return *this;
    }
    for (auto& [j, c] : coeffs_)
        c *= scale;
    return *this;
}

CyclotomicValue operator*(const CyclotomicValue& a, const CyclotomicValue& b)
{
    CyclotomicValue out(a.p_ != 0 ? a.p_ : b.p_);
    out.bind_prime(b.p_);
    if (a.is_zero() || b.is_zero())
        return out;
    const int level = std::max(a.level_, b.level_);
    const auto ac = a.embedded_coefficients(level);
    const auto bc = b.embedded_coefficients(level);
    const std::int64_t n = ipow(out.p_, level);
    std::map<std::int64_t, Rational> prod;
    for (const auto& [i, x] : ac)
        for (const auto& [j, y] : bc)
            prod[(i + j) % n] += x * y;
    return CyclotomicValue::from_sparse(out.p_, level, std::move(prod));
}

bool operator==(const CyclotomicValue& a, const CyclotomicValue& b)
{
    if (a.is_zero() && b.is_zero())
        return true;
    return a.p_ == b.p_ && a.level_ == b.level_ && a.coeffs_ == b.coeffs_;
}

CyclotomicValue CyclotomicValue::conjugate() const
{
    std::map<std::int64_t, Rational> c;
    const std::int64_t n = ipow(p_ == 0 ? 1 : p_, level_);
    for (const auto& [j, x] : coeffs_)
        c[(n - j) % n] += x;
    return from_sparse(p_, level_, std::move(c));
}

std::complex<double> CyclotomicValue::to_complex() const
{
    std::complex<double> acc{0.0, 0.0};
    if (coeffs_.empty())
        return acc;
    const double n = static_cast<double>(ipow(p_, level_));
    for (const auto& [j, c] : coeffs_) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
        acc += c.get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return acc;
}

std::string CyclotomicValue::to_string() const
{
    if (coeffs_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [j, c] : coeffs_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.get_str() << ")";
        if (level_ > 0 && j != 0)
            os << "*z" << ipow(p_, level_) << "^" << j;
    }
    return os.str();
}

CyclotomicValue psi(const PAdicScalar& x, const PrimeContext& ctx)
{
    const long p = ctx.prime();
    const int v = valuation(x.value(), p);
    if (v >= 0)
        return CyclotomicValue::rational(p, 1);
    const int m = -v;
    ctx.check_level(m);
    const std::int64_t j = residue_mod(x.value() * ctx.rational_power(m), m, ctx);
    return CyclotomicValue::root_of_unity(p, m, j);
}

ResidueCube::ResidueCube(std::vector<std::int64_t> base, int level, const PrimeContext& ctx)
    : base_(std::move(base)), level_(level)
{
    if (level < 0)
        throw Error(ErrorKind::InvalidArgument, "cube level must be >= 0");
    const std::int64_t modulus = ctx.power(level);
    for (auto& b : base_) {
        b %= modulus;
        if (b < 0)
            b += modulus;
    }
}

std::vector<ResidueCube> ResidueCube::refine(const PrimeContext& ctx) const
{
    const long p = ctx.prime();
    const std::int64_t step = ctx.power(level_);
    std::vector<ResidueCube> out;
    std::vector<long> digits(base_.size(), 0);
    while (true) {
        std::vector<std::int64_t> b = base_;
        for (std::size_t i = 0; i < b.size(); ++i)
            b[i] += digits[i] * step;
        out.emplace_back(std::move(b), level_ + 1, ctx);
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == p)
            digits[i++] = 0;
        if (i == digits.size())
            break;
    }
    return out;
}

PAdicBox to_box(const ResidueCube& cube)
{
    PAdicBox box;
    for (auto b : cube.base())
        box.push_back(PAdicBall{Rational(static_cast<long>(b)), cube.level()});
    return box;
}

}  // namespace padicwf
