#ifndef VCOARSE_FINITE_FIELD_HPP
#define VCOARSE_FINITE_FIELD_HPP

#include <cstdint>
#include <vector>

namespace vcoarse
{

// Element of F_q as an integer code 0..q-1: the base-p digits of the code are the
// coefficients of a polynomial in the generator, lowest degree first.
using Coef = std::uint16_t;

// F_q, q = p^m <= 256, with full addition and multiplication tables.
//
// The defining polynomial is the monic irreducible of degree m whose coefficient vector
// is smallest in code order.
class FiniteField
{
public:
    static constexpr unsigned kMaxOrder = 256;

    FiniteField(unsigned p, unsigned m);

    unsigned characteristic() const
    {
        return p_;
    }
    unsigned degree() const
    {
        return m_;
    }
    unsigned order() const
    {
        return q_;
    }

    Coef zero() const
    {
        return 0;
    }
    Coef one() const
    {
        return 1;
    }
    // Code of an integer reduced into the prime field.
    Coef from_int(long v) const;

    Coef add(Coef a, Coef b) const
    {
        return add_[a * q_ + b];
    }
    Coef mul(Coef a, Coef b) const
    {
        return mul_[a * q_ + b];
    }
    Coef neg(Coef a) const
    {
        return neg_[a];
    }
    Coef sub(Coef a, Coef b) const
    {
        return add(a, neg(b));
    }
    // Throws DegenerateInputError on zero.
    Coef inv(Coef a) const;
    Coef pow(Coef a, unsigned long e) const;
    Coef frobenius(Coef a) const
    {
        return pow(a, p_);
    }

    // Defining polynomial coefficients, lowest degree first, leading 1 included.
    const std::vector<unsigned> &modulus() const
    {
        return modulus_;
    }

    friend bool operator==(const FiniteField &a, const FiniteField &b)
    {
        return a.p_ == b.p_ && a.m_ == b.m_;
    }

private:
    unsigned p_;
    unsigned m_;
    unsigned q_;
    std::vector<unsigned> modulus_;
    std::vector<Coef> add_;
    std::vector<Coef> mul_;
    std::vector<Coef> neg_;
    std::vector<Coef> inv_;
};

} // namespace vcoarse

#endif
