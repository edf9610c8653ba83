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

// Everything except the command line layer.

#include "macrodiv/errors.hpp"
#include "macrodiv/real.hpp"
#include "macrodiv/core_types.hpp"
#include "macrodiv/special_fn.hpp"
#include "macrodiv/asymptotic_coefficients.hpp"
#include "macrodiv/closed_form_integrals.hpp"
#include "macrodiv/cdf_analytic.hpp"
#include "macrodiv/montecarlo.hpp"
#include "macrodiv/ser.hpp"
#include "macrodiv/scenarios.hpp"
