#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace wreathdp {

using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Integer& v) { return v.str(); }

/// C(n, k) for 0 <= k <= n.
inline Integer binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

}  // namespace wreathdp
