// Copyright 2026 The dapt Authors.
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

#ifndef DAPT_TEXT_HPP_
#define DAPT_TEXT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dapt {

enum class TokenizeMode {
  /// Lowercased, edge punctuation stripped, punctuation-only and digit-only
  /// tokens dropped. Used for vocabularies, embeddings and the n-gram LM.
  kAnalysis,
  /// Plain whitespace split; case and punctuation preserved.
  kSequence,
};

/// Decodes one code point starting at `pos`; sets `len` to its byte length.
/// Malformed bytes decode as U+FFFD with length 1.
char32_t decode_utf8(std::string_view s, std::size_t pos, std::size_t& len);

bool is_valid_utf8(std::string_view s);
bool is_unicode_space(char32_t cp);

/// Strips leading and trailing Unicode whitespace.
std::string_view trim(std::string_view s);

std::vector<std::string> tokenize(std::string_view text, TokenizeMode mode);

}  // namespace dapt

#endif  // DAPT_TEXT_HPP_
