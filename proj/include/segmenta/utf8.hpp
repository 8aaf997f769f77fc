#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "segmenta/error.hpp"

namespace segmenta::utf8 {

using Codepoint = std::uint32_t;

// Decodes the scalar value starting at `pos` and advances `pos` past it.
// Rejects truncated sequences, stray continuation bytes, overlong forms,
// surrogates, and values above U+10FFFF.
inline Codepoint decode_at(std::string_view s, std::size_t& pos) {
    const auto at = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    if (pos >= s.size()) {
        throw DecodeError("unexpected end of input", pos);
    }
    const std::size_t start = pos;
    const unsigned char b0 = at(pos);

    std::size_t len = 0;
    Codepoint cp = 0;
    Codepoint min = 0;
    if (b0 < 0x80) {
        pos += 1;
        return b0;
    } else if ((b0 & 0xE0) == 0xC0) {
        len = 2; cp = b0 & 0x1Fu; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3; cp = b0 & 0x0Fu; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4; cp = b0 & 0x07u; min = 0x10000;
    } else {
        throw DecodeError("invalid UTF-8 lead byte", start);
    }

    if (start + len > s.size()) {
        throw DecodeError("truncated UTF-8 sequence", start);
    }
    for (std::size_t i = 1; i < len; ++i) {
        const unsigned char b = at(start + i);
        if ((b & 0xC0) != 0x80) {
            throw DecodeError("invalid UTF-8 continuation byte", start + i);
        }
        cp = (cp << 6) | (b & 0x3Fu);
    }
    if (cp < min) {
        throw DecodeError("overlong UTF-8 encoding", start);
    }
    if (cp >= 0xD800 && cp <= 0xDFFF) {
        throw DecodeError("UTF-8 encoded surrogate", start);
    }
    if (cp > 0x10FFFF) {
        throw DecodeError("code point out of range", start);
    }
    pos = start + len;
    return cp;
}

inline std::string encode(Codepoint cp) {
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

inline std::vector<Codepoint> decode(std::string_view s) {
    std::vector<Codepoint> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        out.push_back(decode_at(s, pos));
    }
    return out;
}

// One string per Unicode scalar, in order.
inline std::vector<std::string> split_scalars(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t start = pos;
        decode_at(s, pos);
        out.emplace_back(s.substr(start, pos - start));
    }
    return out;
}

inline std::size_t scalar_count(std::string_view s) {
    std::size_t pos = 0, n = 0;
    while (pos < s.size()) {
        decode_at(s, pos);
        ++n;
    }
    return n;
}

// Throws DecodeError if `s` is not well-formed UTF-8.
inline void validate(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        decode_at(s, pos);
    }
}

inline bool is_whitespace(Codepoint cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// ASCII plus Latin-1 letters; everything else is left as-is, which keeps
// the mapping idempotent.
inline Codepoint to_lower(Codepoint cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    return cp;
}

inline bool is_punctuation(Codepoint cp) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

} // namespace segmenta::utf8
