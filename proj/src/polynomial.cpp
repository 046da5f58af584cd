#include "padicwf/polynomial.hpp"

#include <cctype>
#include <sstream>

namespace padicwf {

Polynomial Polynomial::constant(int nvars, const Rational& c)
{
    Polynomial p(nvars);
    p.add_term(Exponents(static_cast<std::size_t>(nvars), 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int index)
{
    Polynomial p(nvars);
    Exponents e(static_cast<std::size_t>(nvars), 0);
    e.at(static_cast<std::size_t>(index)) = 1;
    p.add_term(e, 1);
    return p;
}

bool Polynomial::is_constant() const
{
    return total_degree() <= 0;
}

void Polynomial::add_term(const Exponents& e, const Rational& c)
{
    if (static_cast<int>(e.size()) != nvars_)
        throw Error(ErrorKind::DimensionMismatch, "exponent vector length differs from variable count");
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

int Polynomial::total_degree() const
{
    int deg = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int x : e)
            s += x;
        deg = std::max(deg, s);
    }
    return deg;
}

int Polynomial::degree_in(int var) const
{
    int deg = -1;
    for (const auto& [e, c] : terms_)
        deg = std::max(deg, e.at(static_cast<std::size_t>(var)));
    return deg;
}

Polynomial Polynomial::operator-() const
{
    Polynomial r = *this;
    for (auto& [e, c] : r.terms_)
        c = -c;
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o)
{
    if (nvars_ != o.nvars_)
        throw Error(ErrorKind::DimensionMismatch, "adding polynomials in different rings");
    for (const auto& [e, c] : o.terms_)
        add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o)
{
    return *this += -o;
}

Polynomial& Polynomial::operator*=(const Rational& s)
{
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_)
        c *= s;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    if (a.nvars_ != b.nvars_)
        throw Error(ErrorKind::DimensionMismatch, "multiplying polynomials in different rings");
    Polynomial r(a.nvars_);
    Polynomial::Exponents e(static_cast<std::size_t>(a.nvars_));
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Polynomial Polynomial::pow(int e) const
{
    if (e < 0)
        throw Error(ErrorKind::InvalidArgument, "negative polynomial exponent");
    Polynomial result = constant(nvars_, 1);
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1)
            result = result * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return result;
}

Polynomial Polynomial::derivative(int var) const
{
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        const int k = e.at(static_cast<std::size_t>(var));
        if (k == 0)
            continue;
        Exponents d = e;
        d[static_cast<std::size_t>(var)] = k - 1;
        r.add_term(d, c * k);
    }
    return r;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const
{
    if (static_cast<int>(point.size()) != nvars_)
        throw Error(ErrorKind::DimensionMismatch, "evaluation point has wrong dimension");
    Rational acc = 0;
    Rational term;
    Rational pw;
    for (const auto& [e, c] : terms_) {
        term = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            mpz_pow_ui(pw.get_num_mpz_t(), point[i].get_num_mpz_t(), static_cast<unsigned long>(e[i]));
            mpz_pow_ui(pw.get_den_mpz_t(), point[i].get_den_mpz_t(), static_cast<unsigned long>(e[i]));
            pw.canonicalize();  // 0 / den^e is not canonical
            term *= pw;
        }
        acc += term;
    }
    return acc;
}

Polynomial Polynomial::exact_divide(const Polynomial& divisor) const
{
    if (divisor.is_zero())
        throw Error(ErrorKind::InvalidArgument, "division by the zero polynomial");
    if (divisor.nvars_ != nvars_)
        throw Error(ErrorKind::DimensionMismatch, "dividing polynomials in different rings");
    Polynomial quotient(nvars_);
    Polynomial rest = *this;
    const auto& [lead_e, lead_c] = *divisor.terms_.rbegin();
    while (!rest.is_zero()) {
        const auto [re, rc] = *rest.terms_.rbegin();
        Exponents q(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) {
            q[i] = re[i] - lead_e[i];
            if (q[i] < 0)
                throw Error(ErrorKind::InvalidArgument, "polynomial division is not exact");
        }
        Polynomial t(nvars_);
        t.add_term(q, rc / lead_c);
        quotient += t;
        rest -= t * divisor;
    }
    return quotient;
}

Polynomial Polynomial::primitive() const
{
    if (terms_.empty())
        return *this;
    Integer den_lcm = 1;
    for (const auto& [e, c] : terms_)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    Integer num_gcd = 0;
    for (const auto& [e, c] : terms_) {
        Integer scaled = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    }
    Rational factor(den_lcm, num_gcd);
    factor.canonicalize();
    if (terms_.rbegin()->second < 0)
        factor = -factor;
    return *this * factor;
}

Polynomial Polynomial::extended(int nvars) const
{
    if (nvars < nvars_)
        throw Error(ErrorKind::DimensionMismatch, "cannot shrink polynomial ring");
    Polynomial r(nvars);
    for (const auto& [e, c] : terms_) {
        Exponents x = e;
        x.resize(static_cast<std::size_t>(nvars), 0);
        r.add_term(x, c);
    }
    return r;
}

std::vector<Polynomial> Polynomial::coefficients_in(int var) const
{
    std::vector<Polynomial> out(static_cast<std::size_t>(std::max(degree_in(var), 0) + 1), Polynomial(nvars_));
    for (const auto& [e, c] : terms_) {
        Exponents rest = e;
        const int k = rest[static_cast<std::size_t>(var)];
        rest[static_cast<std::size_t>(var)] = 0;
        out[static_cast<std::size_t>(k)].add_term(rest, c);
    }
    return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        bool has_var = false;
        std::ostringstream vars;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (has_var)
                vars << "*";
            has_var = true;
            vars << names.at(i);
            if (e[i] > 1)
                vars << "^" << e[i];
        }
        if (!has_var)
            os << mag.get_str();
        else if (mag == 1)
            os << vars.str();
        else
            os << mag.get_str() << "*" << vars.str();
    }
    return os.str();
}

std::map<std::string, int> chart_variables(int n)
{
    std::map<std::string, int> vars;
    for (int i = 0; i < n; ++i)
        vars["y" + std::to_string(i + 1)] = i;
    if (n == 1)
        vars["y"] = 0;
    return vars;
}

namespace {

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, const std::map<std::string, int>& vars, int nvars)
        : text_(text), vars_(vars), nvars_(nvars)
    {
    }

    Polynomial parse()
    {
        Polynomial p = expression();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorKind::Parse, "polynomial '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expression()
    {
        Polynomial acc = term();
        while (true) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    Polynomial term()
    {
        Polynomial acc = unary();
        while (true) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                Polynomial d = unary();
                if (!d.is_constant() || d.is_zero())
                    fail("division only by non-zero constants");
                acc *= Rational(1) / d.terms().begin()->second;
            } else {
                return acc;
            }
        }
    }

    Polynomial unary()
    {
        if (accept('-'))
            return -unary();
        if (accept('+'))
            return unary();
        return power();
    }

    Polynomial power()
    {
        Polynomial base = primary();
        if (accept('^')) {
            skip_space();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (start == pos_)
                fail("expected a non-negative integer exponent");
            return base.pow(std::stoi(std::string(text_.substr(start, pos_ - start))));
        }
        return base;
    }

    Polynomial primary()
    {
        skip_space();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expression();
            if (!accept(')'))
                fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
                fail("decimal literals are not accepted; write rationals as a/b");
            return Polynomial::constant(nvars_, Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
        }
        if (c == '.')
            fail("decimal literals are not accepted; write rationals as a/b");
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            auto it = vars_.find(name);
            if (it == vars_.end())
                fail("unknown variable '" + name + "'");
            return Polynomial::variable(nvars_, it->second);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const std::map<std::string, int>& vars_;
    int nvars_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::map<std::string, int>& vars, int nvars)
{
    return ExpressionParser(text, vars, nvars).parse();
}

}  // namespace padicwf
