#pragma once

#include "wreathdp/cursor.hpp"

#include <concepts>
#include <string>
#include <vector>

namespace wreathdp {

/// A group context: owns the ambient parameters (ranks) and supplies the
/// group law, the canonical text form of its elements, and its
/// distinguished generators. Elements are values with equality and a
/// canonical total order.
template <class G>
concept GroupContext = requires(const G& grp, const typename G::element_type& x,
                                Cursor& cur) {
  typename G::element_type;
  { grp.identity() } -> std::same_as<typename G::element_type>;
  { grp.multiply(x, x) } -> std::same_as<typename G::element_type>;
  { grp.inverse(x) } -> std::same_as<typename G::element_type>;
  { grp.validate(x) };
  { grp.format_element(x) } -> std::convertible_to<std::string>;
  { grp.parse_element(cur) } -> std::same_as<typename G::element_type>;
  { grp.generators() } -> std::same_as<std::vector<typename G::element_type>>;
  { x == x } -> std::convertible_to<bool>;
  { x < x } -> std::convertible_to<bool>;
};

template <GroupContext G>
typename G::element_type group_commutator(const G& grp,
                                          const typename G::element_type& x,
                                          const typename G::element_type& y) {
  return grp.multiply(grp.multiply(grp.inverse(x), grp.inverse(y)),
                      grp.multiply(x, y));
}

template <GroupContext G>
typename G::element_type group_power(const G& grp, typename G::element_type x,
                                     std::int64_t k) {
  if (k < 0) {
    x = grp.inverse(x);
    k = -k;
  }
  auto result = grp.identity();
  while (k > 0) {
    if (k & 1) result = grp.multiply(result, x);
    k >>= 1;
    if (k > 0) x = grp.multiply(x, x);
  }
  return result;
}

}  // namespace wreathdp
