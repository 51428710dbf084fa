#include <vcoarse/errors.hpp>
#include <vcoarse/rational.hpp>

#include <cctype>
#include <string>

namespace vcoarse
{

namespace
{

bool valid_integer_text(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
        i = 1;
    }
    if (i == s.size()) {
        return false;
    }
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    return true;
}

std::string strip_plus(std::string_view s)
{
    if (!s.empty() && s[0] == '+') {
        s.remove_prefix(1);
    }
    return std::string(s);
}

} // namespace

Rational parse_rational(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    const auto slash = text.find('/');
    const auto num_text = text.substr(0, slash);
    if (!valid_integer_text(num_text)) {
        throw StructuralError("malformed rational '" + std::string(text) + "'");
    }
    Integer num(strip_plus(num_text));
    Integer den(1);
    if (slash != std::string_view::npos) {
        const auto den_text = text.substr(slash + 1);
        if (!valid_integer_text(den_text) || den_text[0] == '-') {
            throw StructuralError("malformed rational '" + std::string(text) + "'");
        }
        den = Integer(strip_plus(den_text));
        if (den == 0) {
            throw StructuralError("zero denominator in '" + std::string(text) + "'");
        }
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational &r)
{
    if (r.get_den() == 1) {
        return r.get_num().get_str();
    }
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Integer integer_pow(long base, unsigned long exponent)
{
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base < 0 ? -base : base), exponent);
    if (base < 0 && (exponent % 2) == 1) {
        out = -out;
    }
    return out;
}

Rational rational_pow(const Rational &base, long exponent)
{
    Integer num, den;
    const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
    Rational r = exponent >= 0 ? Rational(num, den) : Rational(den, num);
    r.canonicalize();
    return r;
}

bool is_prime(long n)
{
    if (n < 2) {
        return false;
    }
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

long p_adic_valuation(const Rational &r, long p)
{
    if (r == 0) {
        throw DegenerateInputError("p-adic valuation of zero");
    }
    auto count = [p](Integer z) {
        long n = 0;
        z = abs(z);
        while (z % p == 0) {
            z /= p;
            ++n;
        }
        return n;
    };
    return count(r.get_num()) - count(r.get_den());
}

bool is_integer(const Rational &r)
{
    return r.get_den() == 1;
}

bool denominator_is_p_power(const Rational &r, long p)
{
    Integer d = r.get_den();
    while (d % p == 0) {
        d /= p;
    }
    return d == 1;
}

} // namespace vcoarse
