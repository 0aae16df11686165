// Copyright 2026 The iontrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IONTRAP_CONSTANTS_HPP
#define IONTRAP_CONSTANTS_HPP

#include <numbers>

// CODATA 2018, SI.
namespace iontrap::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double h = 6.62607015e-34;
inline constexpr double kB = 1.380649e-23;
inline constexpr double e = 1.602176634e-19;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double c = 299792458.0;
inline constexpr double amu = 1.66053906660e-27;
inline constexpr double m_proton = 1.67262192369e-27;
inline constexpr double mu_B = 9.2740100783e-24;
inline constexpr double a0 = 5.29177210903e-11;

inline constexpr double two_pi = 2.0 * pi;

}  // namespace iontrap::constants

#endif
