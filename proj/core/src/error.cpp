// Copyright 2026 The Platinum Authors.
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

#include "platinum/error.hpp"

namespace platinum {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kLogic: return "logic error";
    case ErrorKind::kNumeric: return "numeric error";
    case ErrorKind::kSampling: return "sampling error";
    case ErrorKind::kSize: return "size error";
    case ErrorKind::kData: return "data error";
  }
  return "error";
}

}  // namespace platinum
