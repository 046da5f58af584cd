#pragma once

// Sparse multivariate polynomials over Q with a small expression parser.

#include "padicwf/padic_core.hpp"

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace padicwf {

class Polynomial {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, Rational>;

    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rational& c);
    static Polynomial variable(int nvars, int index);

    int nvars() const noexcept { return nvars_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const;

    void add_term(const Exponents& e, const Rational& c);

    int total_degree() const;
    int degree_in(int var) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

    Polynomial pow(int e) const;
    Polynomial derivative(int var) const;
    Rational evaluate(std::span<const Rational> point) const;

    /// Quotient of an exact division; throws InvalidArgument when the
    /// divisor does not divide.
    Polynomial exact_divide(const Polynomial& divisor) const;

    /// Integer coefficients with gcd 1 and positive lex-leading coefficient.
    Polynomial primitive() const;

    /// Same polynomial in a ring with more variables (new ones appended).
    Polynomial extended(int nvars) const;

    /// Coefficients as a polynomial in `var`: result[k] multiplies var^k.
    std::vector<Polynomial> coefficients_in(int var) const;

    std::string to_string(const std::vector<std::string>& names) const;

private:
    int nvars_ = 0;
    TermMap terms_;
};

/// Parses +, -, *, ^ (non-negative integer exponents), parentheses, integer
/// literals and division by constants. Decimal literals are rejected.
/// `vars` maps accepted identifiers to variable indices.
Polynomial parse_polynomial(std::string_view text, const std::map<std::string, int>& vars, int nvars);

/// Variable names y1..yn (plus y for n == 1).
std::map<std::string, int> chart_variables(int n);

}  // namespace padicwf
