#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace bundleflow {

// Exact arithmetic throughout the bundle calculus: slopes are rationals over
// arbitrary-precision integers, stored in lowest terms with positive
// denominator (cpp_rational normalizes on construction).
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int rational_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int rational_den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational make_rational(long long num, long long den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(Int(num), Int(den));
}

inline std::string to_string(const Rational& q) {
    std::string s = rational_num(q).str();
    if (rational_den(q) != 1)
        s += "/" + rational_den(q).str();
    return s;
}

} // namespace bundleflow
