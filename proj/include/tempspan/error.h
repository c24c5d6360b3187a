// Copyright 2026 The tempspan Authors.
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

#ifndef TEMPSPAN_ERROR_H_
#define TEMPSPAN_ERROR_H_

#include <stdexcept>
#include <string>

namespace tempspan {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A record or file did not follow its schema. Lenient readers count and skip
// these; strict readers throw.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Bad arguments: offsets out of range, invalid configuration, dangling ids.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace tempspan

#endif  // TEMPSPAN_ERROR_H_
