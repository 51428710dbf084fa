#ifndef VCOARSE_TESTS_GENERATORS_HPP
#define VCOARSE_TESTS_GENERATORS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include <vcoarse/segment.hpp>

namespace vcoarse::testing
{

// Random values on the lattice (1/p^k)Z, used by the property suites.
class Gen
{
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64 &rng()
    {
        return rng_;
    }

    long integer(long lo, long hi)
    {
        return std::uniform_int_distribution<long>(lo, hi)(rng_);
    }
    bool coin()
    {
        return integer(0, 1) == 1;
    }
    template <typename T>
    const T &pick(const std::vector<T> &v)
    {
        return v[static_cast<std::size_t>(integer(0, static_cast<long>(v.size()) - 1))];
    }

    // Multiple of 1/p^k in [-bound, bound].
    Rational lattice(long p, unsigned k, long bound)
    {
        const long den = integer_pow(p, k).get_si();
        Rational r(integer(-bound * den, bound * den), den);
        r.canonicalize();
        return r;
    }

    // Element of g on the (1/p^k) lattice; Int components get integers.
    GroupElement element(const GroupDescriptor &g, unsigned k, long bound)
    {
        std::vector<Rational> c;
        for (std::size_t i = 0; i < g.rank(); ++i) {
            const Component &comp = g.component(i);
            const Rational x = comp.kind == ComponentKind::Int ? Rational(integer(-bound, bound)) : lattice(g.prime(), k, bound);
            c.push_back(x * comp.unit);
        }
        return GroupElement(std::move(c));
    }

    GroupElement nonzero_element(const GroupDescriptor &g, unsigned k, long bound)
    {
        for (;;) {
            GroupElement x = element(g, k, bound);
            if (!x.is_zero()) {
                return x;
            }
        }
    }

    // Any canonical segment with shift on the (1/p^k) lattice.
    Segment segment(const GroupDescriptor &g, Direction d, unsigned k = 1, long bound = 1)
    {
        const std::size_t level = static_cast<std::size_t>(integer(0, static_cast<long>(g.rank())));
        return Segment(g, d, level, element(g, k, bound), coin());
    }

    // Segment that is neither empty nor whole.
    Segment proper_segment(const GroupDescriptor &g, Direction d, unsigned k = 1, long bound = 1)
    {
        for (;;) {
            Segment s = segment(g, d, k, bound);
            if (!s.is_empty() && !s.is_whole()) {
                return s;
            }
        }
    }

private:
    std::mt19937_64 rng_;
};

} // namespace vcoarse::testing

#endif
