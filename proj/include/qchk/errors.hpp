/*
 * Copyright 2026 The qchk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
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

namespace qchk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its domain (sqrt of a negative, chart bound exceeded, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Integration or linear-algebra failure (step underflow, singular metric, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qchk
