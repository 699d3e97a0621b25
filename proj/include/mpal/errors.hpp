// Copyright 2026 The mpal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mpal {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configurations or boxes with mismatched particle count / lattice dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A potential map that lacks a value for some single-particle site.
class IncompletePotentialError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

/// Energy within the resolvent floor of the spectrum.
class ResonantEnergyError : public Error {
 public:
  using Error::Error;
};

/// Factor boxes that interact, or a hopping rule that does not split as a Kronecker sum.
class NotPIError : public Error {
 public:
  using Error::Error;
};

class NonpositiveMassError : public Error {
 public:
  using Error::Error;
};

class CandidateExplosionError : public Error {
 public:
  using Error::Error;
};

class InsufficientShellsError : public Error {
 public:
  using Error::Error;
};

/// Failure inside one disorder realisation of a Monte Carlo sweep.
class RealizationError : public SolverError {
 public:
  RealizationError(const std::string& what, unsigned long long index)
      : SolverError(what), index_(index) {}
  unsigned long long index() const noexcept { return index_; }

 private:
  unsigned long long index_;
};

/// Invalid experiment configuration; carries the offending line (0 if unknown).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace mpal
