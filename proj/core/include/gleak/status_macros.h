// Copyright 2026 The gleak Authors
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

#ifndef GLEAK_STATUS_MACROS_H_
#define GLEAK_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define GLEAK_CONCAT_INNER_(a, b) a##b
#define GLEAK_CONCAT_(a, b) GLEAK_CONCAT_INNER_(a, b)

#define GLEAK_RETURN_IF_ERROR(expr)            \
  do {                                         \
    const ::absl::Status _gleak_status = (expr); \
    if (!_gleak_status.ok()) return _gleak_status; \
  } while (0)

#define GLEAK_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                 \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = std::move(tmp).value()

// Evaluates an absl::StatusOr expression, returning its status on error and
// otherwise moving the value into `lhs`.
#define GLEAK_ASSIGN_OR_RETURN(lhs, rexpr) \
  GLEAK_ASSIGN_OR_RETURN_IMPL_(GLEAK_CONCAT_(_gleak_statusor_, __LINE__), lhs, rexpr)

#endif  // GLEAK_STATUS_MACROS_H_
