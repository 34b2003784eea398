// Copyright 2026 The csg-solver Authors
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

#ifndef CSG_ERRORS_H_
#define CSG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace csg {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidPlayer : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Malformed or schema-violating input documents.
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A countable model cannot be truncated as requested.
class InvalidModel : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A linear solve or evaluation failed its residual check.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The simplex solver hit its iteration guard or failed certification.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace csg

#endif  // CSG_ERRORS_H_
