// SPDX-License-Identifier: Apache-2.0
//
// macrodiv: closed-form SINR analysis for dual-user macrodiversity MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// The few elementary functions and constants the templated closed forms
// need, for the built-in floating types and for the 113-bit __float128 of
// GCC/Clang (via libquadmath).

#include <cmath>
#include <limits>
#include <numbers>
#include <type_traits>

#if defined(__SIZEOF_FLOAT128__) && !defined(MACRODIV_NO_FLOAT128)
#include <quadmath.h>
#define MACRODIV_HAS_FLOAT128 1
#endif

namespace macrodiv {

#ifdef MACRODIV_HAS_FLOAT128
using quad = __float128;
#else
using quad = long double;
#endif

/// Working type of the jittered CDF sums: the widest one available.
using wide_real = quad;

namespace math {

template <class R>
  requires std::is_floating_point_v<R>
R exp(R x) { return std::exp(x); }
template <class R>
  requires std::is_floating_point_v<R>
R log(R x) { return std::log(x); }
template <class R>
  requires std::is_floating_point_v<R>
R abs(R x) { return std::abs(x); }
template <class R>
  requires std::is_floating_point_v<R>
R expm1(R x) { return std::expm1(x); }

template <class R>
R epsilon() { return std::numeric_limits<R>::epsilon(); }
template <class R>
R min_normal() { return std::numeric_limits<R>::min(); }
template <class R>
R egamma() { return std::numbers::egamma_v<R>; }

#ifdef MACRODIV_HAS_FLOAT128
inline quad exp(quad x) { return expq(x); }
inline quad log(quad x) { return logq(x); }
inline quad abs(quad x) { return fabsq(x); }
inline quad expm1(quad x) { return expm1q(x); }

template <>
inline quad epsilon<quad>() { return ldexpq(1, -112); }
template <>
inline quad min_normal<quad>() { return ldexpq(1, -16382); }
template <>
inline quad egamma<quad>() {
  static const quad g = strtoflt128("0.577215664901532860606512090082402431", nullptr);
  return g;
}
#endif

}  // namespace math
}  // namespace macrodiv
