#include <vcoarse/errors.hpp>
#include <vcoarse/finite_field.hpp>
#include <vcoarse/rational.hpp>

namespace vcoarse
{

namespace
{

using Poly = std::vector<unsigned>; // coefficients mod p, lowest degree first

Poly digits(unsigned code, unsigned p, unsigned m)
{
    Poly out(m);
    for (unsigned i = 0; i < m; ++i) {
        out[i] = code % p;
        code /= p;
    }
    return out;
}

unsigned encode(const Poly &c, unsigned p)
{
    unsigned code = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        code = code * p + c[i];
    }
    return code;
}

// Product of a and b reduced modulo the monic polynomial `mod` of degree m.
Poly mulmod(const Poly &a, const Poly &b, const Poly &mod, unsigned p)
{
    const std::size_t m = mod.size() - 1;
    Poly prod(2 * m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
        }
    }
    for (std::size_t d = prod.size(); d-- > m;) {
        const unsigned lead = prod[d];
        if (lead == 0) {
            continue;
        }
        for (std::size_t k = 0; k <= m; ++k) {
            prod[d - m + k] = (prod[d - m + k] + p * p - lead * mod[k] % p) % p;
        }
    }
    prod.resize(m);
    return prod;
}

// Monic polynomial of degree m without roots or factors: brute-force trial division by
// every monic polynomial of degree 1..m/2.
bool irreducible(const Poly &f, unsigned p)
{
    const std::size_t m = f.size() - 1;
    for (std::size_t d = 1; d <= m / 2; ++d) {
        unsigned count = 1;
        for (std::size_t i = 0; i < d; ++i) {
            count *= p;
        }
        for (unsigned code = 0; code < count; ++code) {
            Poly g = digits(code, p, static_cast<unsigned>(d));
            g.push_back(1);
            // Remainder of f by g.
            Poly r = f;
            for (std::size_t k = r.size(); k-- > d;) {
                const unsigned lead = r[k];
                if (lead == 0) {
                    continue;
                }
                for (std::size_t j = 0; j <= d; ++j) {
                    r[k - d + j] = (r[k - d + j] + p * p - lead * g[j] % p) % p;
                }
            }
            bool zero = true;
            for (std::size_t j = 0; j < d; ++j) {
                zero = zero && r[j] == 0;
            }
            if (zero) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

FiniteField::FiniteField(unsigned p, unsigned m) : p_(p), m_(m), q_(1)
{
    if (!is_prime(static_cast<long>(p))) {
        throw StructuralError("finite field characteristic " + std::to_string(p) + " is not prime");
    }
    if (m == 0) {
        throw StructuralError("finite field degree must be positive");
    }
    for (unsigned i = 0; i < m; ++i) {
        q_ *= p;
        if (q_ > kMaxOrder) {
            throw UnsupportedError("finite fields are limited to order " + std::to_string(kMaxOrder));
        }
    }

    for (unsigned code = 0; code < q_; ++code) {
        Poly f = digits(code, p, m);
        f.push_back(1);
        if (m == 1 || irreducible(f, p)) {
            modulus_ = f;
            break;
        }
    }

    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (unsigned a = 0; a < q_; ++a) {
        const Poly pa = digits(a, p, m);
        Poly na(m);
        for (unsigned i = 0; i < m; ++i) {
            na[i] = (p - pa[i]) % p;
        }
        neg_[a] = static_cast<Coef>(encode(na, p));
        for (unsigned b = 0; b < q_; ++b) {
            const Poly pb = digits(b, p, m);
            Poly s(m);
            for (unsigned i = 0; i < m; ++i) {
                s[i] = (pa[i] + pb[i]) % p;
            }
            add_[a * q_ + b] = static_cast<Coef>(encode(s, p));
            mul_[a * q_ + b] = static_cast<Coef>(encode(mulmod(pa, pb, modulus_, p), p));
        }
    }
    for (unsigned a = 1; a < q_; ++a) {
        for (unsigned b = 1; b < q_; ++b) {
            if (mul_[a * q_ + b] == 1) {
                inv_[a] = static_cast<Coef>(b);
                break;
            }
        }
    }
}

Coef FiniteField::from_int(long v) const
{
    long r = v % static_cast<long>(p_);
    if (r < 0) {
        r += p_;
    }
    return static_cast<Coef>(r);
}

Coef FiniteField::inv(Coef a) const
{
    if (a == 0) {
        throw DegenerateInputError("inverse of zero in F_" + std::to_string(q_));
    }
    return inv_[a];
}

Coef FiniteField::pow(Coef a, unsigned long e) const
{
    Coef result = 1;
    Coef base = a;
    while (e > 0) {
        if (e & 1UL) {
            result = mul(result, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

} // namespace vcoarse
