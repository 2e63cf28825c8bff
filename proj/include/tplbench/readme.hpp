// Copyright 2026 The tpl-bench Authors
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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace tplbench {

namespace detail {

// Drops ```fenced``` regions, fence markers included. An unpaired opening
// fence is left in place; the inline-span pass below degrades it safely.
inline std::string strip_fenced_blocks(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find("```", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    const std::size_t close = text.find("```", open + 3);
    if (close == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    pos = close + 3;
  }
  return out;
}

// Drops `inline code` spans, backticks included. A lone backtick survives.
inline std::string strip_inline_code(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find('`', pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    const std::size_t close = text.find('`', open + 1);
    if (close == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    pos = close + 1;
  }
  return out;
}

inline bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline std::string to_lower_ascii_prefix(std::string_view text,
                                         std::size_t max) {
  std::string out(text.substr(0, max < text.size() ? max : text.size()));
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Drops whitespace-delimited tokens whose lowercase form starts with an
// http:// or https:// scheme.
inline std::string strip_url_tokens(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (is_space_char(text[pos])) {
      out.push_back(text[pos]);
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !is_space_char(text[end])) ++end;
    std::string_view token = text.substr(pos, end - pos);
    const std::string lowered = to_lower_ascii_prefix(token, 8);
    const bool is_url = lowered.rfind("http://", 0) == 0 ||
                        lowered.rfind("https://", 0) == 0;
    if (!is_url) out.append(token);
    pos = end;
  }
  return out;
}

// True for code points kept by the character filter: the letter, digit,
// punctuation and space classes of the Basic Multilingual Plane. Emoji,
// symbol blocks, format controls, and anything outside the BMP are dropped.
inline bool keep_code_point(char32_t cp) {
  if (cp == U'\n' || cp == U'\r' || cp == U'\t' || cp == U' ') return true;
  if (cp < 0x20 || cp == 0x7F) return false;  // other controls
  if (cp <= 0x7E) return true;                // printable ASCII
  if (cp > 0xFFFF) return false;              // outside the BMP
  // Symbol and format blocks within the BMP.
  if (cp >= 0x200B && cp <= 0x200F) return false;  // zero-width, marks
  if (cp >= 0x202A && cp <= 0x202E) return false;  // bidi controls
  if (cp >= 0x2060 && cp <= 0x206F) return false;  // invisible format
  if (cp >= 0x20A0 && cp <= 0x20CF) return false;  // currency symbols
  if (cp == 0x20E3) return false;                  // keycap combiner
  if (cp >= 0x2100 && cp <= 0x214F) return false;  // letterlike symbols
  if (cp >= 0x2190 && cp <= 0x2BFF) return false;  // arrows .. misc symbols
  if (cp >= 0xFE00 && cp <= 0xFE0F) return false;  // variation selectors
  if (cp >= 0xFFF0) return false;                  // specials
  return true;
}

// Minimal UTF-8 walk; malformed bytes are dropped.
template <typename Fn>
inline void for_each_code_point(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  while (i < text.size()) {
    const unsigned char b0 = bytes[i];
    std::size_t len;
    char32_t cp;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      ++i;
      continue;
    }
    if (i + len > text.size()) break;
    bool valid = true;
    for (std::size_t k = 1; k < len; ++k) {
      if ((bytes[i + k] & 0xC0) != 0x80) {
        valid = false;
        break;
      }
      cp = (cp << 6) | (bytes[i + k] & 0x3F);
    }
    if (valid) fn(cp, text.substr(i, len));
    i += valid ? len : 1;
  }
}

inline std::string filter_code_points(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for_each_code_point(text, [&](char32_t cp, std::string_view raw) {
    if (keep_code_point(cp)) out.append(raw);
  });
  return out;
}

inline std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space_char(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

// Deterministic README cleanup for prompt context: code blocks, inline code
// spans, URL tokens and non-text symbols are removed, then all whitespace is
// collapsed to single spaces. Idempotent.
inline std::string clean_readme(std::string_view raw) {
  std::string text = detail::strip_fenced_blocks(raw);
  text = detail::strip_inline_code(text);
  text = detail::filter_code_points(text);
  text = detail::strip_url_tokens(text);
  return detail::normalize_whitespace(text);
}

// Word-boundary-safe truncation used to cap prompt context length. Cuts at
// the last space at or before `max_chars`; falls back to a hard cut on a
// UTF-8 boundary when the text has no usable space.
inline std::string truncate_context(std::string_view text,
                                    std::size_t max_chars = 1500) {
  if (text.size() <= max_chars) return std::string(text);
  std::string_view head = text.substr(0, max_chars);
  if (text[max_chars] != ' ') {  // the cut would land mid-word
    const std::size_t cut = head.find_last_of(' ');
    if (cut != std::string_view::npos && cut > 0) {
      head = head.substr(0, cut);
    } else {
      // No space to cut at; back off to a code point boundary.
      std::size_t end = head.size();
      while (end > 0 &&
             (static_cast<unsigned char>(text[end]) & 0xC0) == 0x80) {
        --end;
      }
      head = head.substr(0, end);
    }
  }
  while (!head.empty() && head.back() == ' ') head.remove_suffix(1);
  return std::string(head);
}

}  // namespace tplbench
