// Copyright 2026 The whatif Authors.
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

// Adapters over absl string utilities for std::string_view arguments. The
// system absl is built with its own string_view type.

#ifndef WHATIF_SRC_STRINGS_H_
#define WHATIF_SRC_STRINGS_H_

#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"

namespace whatif::strings {

inline absl::string_view ToAbsl(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

template <typename T>
decltype(auto) Piece(const T& value) {
  if constexpr (std::is_arithmetic_v<T>) {
    return value;
  } else {
    return ToAbsl(std::string_view(value));
  }
}

template <typename... Args>
std::string Cat(const Args&... args) {
  return absl::StrCat(Piece(args)...);
}

template <typename Range>
std::string Join(const Range& parts, std::string_view separator) {
  std::vector<absl::string_view> pieces;
  for (const auto& p : parts) pieces.push_back(ToAbsl(std::string_view(p)));
  return absl::StrJoin(pieces, ToAbsl(separator));
}

inline std::vector<std::string_view> SplitSkipEmpty(std::string_view text,
                                                     char separator) {
  std::vector<std::string_view> out;
  for (absl::string_view p :
       absl::StrSplit(ToAbsl(text), separator, absl::SkipEmpty())) {
    out.emplace_back(p.data(), p.size());
  }
  return out;
}

}  // namespace whatif::strings

#endif  // WHATIF_SRC_STRINGS_H_
