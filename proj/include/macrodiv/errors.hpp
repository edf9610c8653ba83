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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace macrodiv {

/// Argument outside the mathematical domain of a function (E1 at x <= 0, a <= 0, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Malformed input (empty sample sets, unsorted grids, bad sizes).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class InvalidModulation : public ArgumentError {
public:
  using ArgumentError::ArgumentError;
};

/// A closed form would divide by a quantity that is (numerically) zero.
/// Carries the offending antenna pair, zero-based, when one is known.
class DegeneracyError : public std::runtime_error {
public:
  DegeneracyError(const std::string& what, std::size_t i = npos, std::size_t k = npos)
      : std::runtime_error(what), i_(i), k_(k) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t first() const noexcept { return i_; }
  std::size_t second() const noexcept { return k_; }
  bool has_pair() const noexcept { return i_ != npos; }

private:
  std::size_t i_;
  std::size_t k_;
};

/// Adaptive quadrature ran out of subdivisions. The best estimate is kept.
class AccuracyError : public std::runtime_error {
public:
  AccuracyError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

private:
  double estimate_;
  double error_;
};

/// A computed probability fell outside [0, 1] by more than round-off allows.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace macrodiv
