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

#include "dapt/text.hpp"

#include <algorithm>

namespace dapt {

namespace {

bool is_edge_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2f) || (cp >= 0x3a && cp <= 0x40) ||
           (cp >= 0x5b && cp <= 0x60) || (cp >= 0x7b && cp <= 0x7e);
  }
  switch (cp) {
    case 0x00a1: case 0x00ab: case 0x00bb: case 0x00bf:
    case 0x2013: case 0x2014: case 0x2018: case 0x2019:
    case 0x201c: case 0x201d: case 0x2026:
      return true;
    default:
      return false;
  }
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  // Latin-1 supplement uppercase block, minus the multiplication sign.
  if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 0x20;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = std::string_view::npos;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t len = 0;
    const char32_t cp = decode_utf8(text, pos, len);
    if (is_unicode_space(cp)) {
      if (start != std::string_view::npos) {
        out.push_back(text.substr(start, pos - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = pos;
    }
    pos += len;
  }
  if (start != std::string_view::npos) out.push_back(text.substr(start));
  return out;
}

std::string analysis_form(std::string_view raw) {
  std::vector<char32_t> cps;
  for (std::size_t pos = 0; pos < raw.size();) {
    std::size_t len = 0;
    cps.push_back(decode_utf8(raw, pos, len));
    pos += len;
  }
  auto first = cps.begin();
  auto last = cps.end();
  while (first != last && is_edge_punct(*first)) ++first;
  while (last != first && is_edge_punct(*(last - 1))) --last;
  if (first == last) return {};
  if (std::all_of(first, last, [](char32_t c) { return c >= '0' && c <= '9'; }))
    return {};
  std::string out;
  for (auto it = first; it != last; ++it) append_utf8(out, to_lower(*it));
  return out;
}

}  // namespace

char32_t decode_utf8(std::string_view s, std::size_t pos, std::size_t& len) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  len = 1;
  if (b0 < 0x80) return b0;
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xe0) == 0xc0) {
    extra = 1;
    cp = b0 & 0x1f;
  } else if ((b0 & 0xf0) == 0xe0) {
    extra = 2;
    cp = b0 & 0x0f;
  } else if ((b0 & 0xf8) == 0xf0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    return 0xfffd;
  }
  if (pos + extra >= s.size()) return 0xfffd;
  for (int i = 1; i <= extra; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xc0) != 0x80) return 0xfffd;
    cp = (cp << 6) | (b & 0x3f);
  }
  static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
  if (cp < kMin[extra] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff))
    return 0xfffd;
  len = static_cast<std::size_t>(extra) + 1;
  return cp;
}

bool is_valid_utf8(std::string_view s) {
  for (std::size_t pos = 0; pos < s.size();) {
    std::size_t len = 0;
    const char32_t cp = decode_utf8(s, pos, len);
    // A genuine U+FFFD is three bytes; a decode failure reports length 1.
    if (cp == 0xfffd && len == 1) return false;
    pos += len;
  }
  return true;
}

bool is_unicode_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0d) || cp == 0x20 || cp == 0x85 ||
         cp == 0xa0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200a) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202f || cp == 0x205f ||
         cp == 0x3000;
}

std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  while (begin < s.size()) {
    std::size_t len = 0;
    if (!is_unicode_space(decode_utf8(s, begin, len))) break;
    begin += len;
  }
  std::size_t end = begin;
  for (std::size_t pos = begin; pos < s.size();) {
    std::size_t len = 0;
    if (!is_unicode_space(decode_utf8(s, pos, len))) end = pos + len;
    pos += len;
  }
  return s.substr(begin, end - begin);
}

std::vector<std::string> tokenize(std::string_view text, TokenizeMode mode) {
  std::vector<std::string> out;
  for (std::string_view raw : split_ws(text)) {
    if (mode == TokenizeMode::kSequence) {
      out.emplace_back(raw);
      continue;
    }
    std::string tok = analysis_form(raw);
    if (!tok.empty()) out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace dapt
