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

#include <filesystem>
#include <string>

#include "json.hpp"

#include "dmasim/model.hpp"

namespace dmasim {

/// Builds and validates a Scenario from the structured config.
///
/// Recognized keys (lengths in metres, or {"lambda": x} for multiples of the
/// free-space wavelength; complex values as [re, im] or a plain real):
///
///   medium.frequency_hz, medium.relative_permittivity, medium.relative_permeability
///   waveguide.{a, b, S, feed_z, origin}
///   layout.{n_waveguides, waveguide_spacing, elements_per_guide, element_spacing,
///           element_placement}
///   terminations.Y_s        scalar broadcast or per-element list
///   users.positions         list of [x, y, z]
///   users.Y_r               scalar broadcast or per-user list
///   connector.Y_0           real, or "auto" for the semi-infinite-guide match
///
/// element_placement is "centered" (default), a list of x offsets applied to
/// every guide, or a list of {"waveguide", "x", "z"} objects. Guide n sits at
/// origin + (0, 0, n * waveguide_spacing); elements default to z = a/2 on the
/// upper wall y = b.
Scenario build_scenario(const nlohmann::json& config);

Scenario load_scenario(const std::filesystem::path& path);

/// Parses [re, im] or a real number.
cplx parse_complex(const nlohmann::json& value, const std::string& what);

} // namespace dmasim
