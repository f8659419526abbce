/*
 * Copyright 2026 The Graybox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace graybox {

/// Malformed or missing benchmark files.
class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller passed an out-of-range budget, size, fraction, etc.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A raw configuration value lies outside its declared domain.
class EncodingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The kernel matrix could not be factorized even with the largest jitter.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was invoked on state that violates its precondition
/// (empty history, config already at max budget, ...).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace graybox
