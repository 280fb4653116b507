// SPDX-License-Identifier: Apache-2.0
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

#include <stdexcept>
#include <string>

namespace dmasim {

// Base of every error the library throws. The CLI maps the two families to
// exit codes 2 (input) and 3 (numerical).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration, out-of-range parameters, inconsistent dimensions.
class InvalidInput : public Error {
public:
  using Error::Error;
};

// Singular blocks, cavity resonances, non-PSD covariances, quadrature that
// fails to converge.
class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace dmasim
