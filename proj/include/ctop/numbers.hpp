#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/functional/hash.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ctop {

// Codes are naturals; they grow without bound under iterated pairing, so they
// live in an arbitrary-precision integer.
using Code = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using Fuel = std::uint64_t;

inline Rat pow2(int e) {
    if (e >= 0) return Rat(Code(1) << e, 1);
    return Rat(1, Code(1) << (-e));
}

inline Code rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Code rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

// Points of the instance spaces are exact rational tuples.
using Point = std::vector<Rat>;

std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

struct CodeHash {
    std::size_t operator()(const Code& c) const {
        return boost::hash<Code>{}(c);
    }
};

}  // namespace ctop
