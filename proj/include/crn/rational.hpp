#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace crn {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long n, long long d = 1) { return Rat(BigInt(n), BigInt(d)); }

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Renders "3", "-2/5" etc.
inline std::string rat_str(const Rat& r) { return r.str(); }

} // namespace crn
