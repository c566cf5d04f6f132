#ifndef CWP_BIGINT_HPP
#define CWP_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace cwp {

// Value lengths and positions can reach 3^{|G|/3}; all length arithmetic is
// exact and arbitrary precision.
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::size_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return boost::multiprecision::msb(x) + 1;
}

inline std::size_t to_size(const BigInt& x, std::size_t cap) {
  if (x < 0 || x > cap) return cap + 1;
  return static_cast<std::size_t>(x);
}

inline BigInt big_abs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

}  // namespace cwp

#endif
