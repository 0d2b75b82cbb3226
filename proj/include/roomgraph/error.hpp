/*
 * Copyright 2026 The RoomGraph Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef ROOMGRAPH_ERROR_HPP_
#define ROOMGRAPH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace roomgraph {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kFormat,
  kValidation,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  static Error invalid_argument(const std::string& m) {
    return Error(ErrorCode::kInvalidArgument, m);
  }
  static Error io(const std::string& m) { return Error(ErrorCode::kIo, m); }
  static Error format(const std::string& m) {
    return Error(ErrorCode::kFormat, m);
  }
  static Error validation(const std::string& m) {
    return Error(ErrorCode::kValidation, m);
  }
  static Error internal(const std::string& m) {
    return Error(ErrorCode::kInternal, m);
  }

 private:
  ErrorCode code_;
};

}  // namespace roomgraph

#endif  // ROOMGRAPH_ERROR_HPP_
