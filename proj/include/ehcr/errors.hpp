// Copyright 2026 The ehcr Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ehcr {

/// Raised when a model input violates its domain (probability outside [0,1],
/// non-positive bandwidth, ...).
class InvalidArgument : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

/// The primary queue has no stationary distribution: lambda_p is not below
/// the service rate (or below eta for the feedback chain).
class UnstableError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incomplete run configuration.
class ConfigError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

// Tolerance for accepting a probability that drifted just outside [0,1].
inline constexpr double kProbTolerance = 1e-12;

// Stability margin: lambda_p must satisfy lambda_p <= mu_p - kStabilityMargin.
inline constexpr double kStabilityMargin = 1e-9;

/// Validates p in [0,1] (with kProbTolerance slack) and clamps it into range.
double checked_probability(double p, const std::string& name);

}  // namespace ehcr
