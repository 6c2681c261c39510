// Copyright 2026 The SICM Authors. All Rights Reserved.
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

#ifndef SICM_ERROR_HPP_
#define SICM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sicm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor or image dimensions incompatible with an operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid model or training configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed container, checkpoint, mask or image file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class TruncatedStream : public FormatError {
 public:
  using FormatError::FormatError;
};

// Bitstream and checkpoints disagree (hash, config, group counts).
class ModelMismatchError : public Error {
 public:
  using Error::Error;
};

// Human-layer decode requested on a base-only stream.
class LayerMissingError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sicm

#endif  // SICM_ERROR_HPP_
