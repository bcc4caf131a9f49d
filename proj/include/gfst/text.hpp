// text.hpp -- UTF-8 conversion and literal escaping used by the parser, the
// artifact format and the command line front end.

#ifndef GFST_TEXT_HPP
#define GFST_TEXT_HPP

#include <string>
#include <string_view>

#include "core.hpp"

namespace gfst {

inline void append_utf8(std::string& dst, Symbol s) {
    if (s < 0x80) {
        dst += static_cast<char>(s);
    } else if (s < 0x800) {
        dst += static_cast<char>(0xC0 | (s >> 6));
        dst += static_cast<char>(0x80 | (s & 0x3F));
    } else if (s < 0x10000) {
        dst += static_cast<char>(0xE0 | (s >> 12));
        dst += static_cast<char>(0x80 | ((s >> 6) & 0x3F));
        dst += static_cast<char>(0x80 | (s & 0x3F));
    } else {
        dst += static_cast<char>(0xF0 | (s >> 18));
        dst += static_cast<char>(0x80 | ((s >> 12) & 0x3F));
        dst += static_cast<char>(0x80 | ((s >> 6) & 0x3F));
        dst += static_cast<char>(0x80 | (s & 0x3F));
    }
}

inline std::string encode_utf8(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (Symbol s : text) append_utf8(out, s);
    return out;
}

/// Strict decoder: rejects overlong forms, surrogates and truncated sequences.
inline std::u32string decode_utf8(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    auto fail = [&](const char* why) {
        return Error(std::string("invalid UTF-8 at byte ") + std::to_string(i) + ": " + why);
    };
    while (i < bytes.size()) {
        auto b0 = static_cast<unsigned char>(bytes[i]);
        if (b0 < 0x80) {
            out += static_cast<Symbol>(b0);
            ++i;
            continue;
        }
        std::size_t len;
        Symbol cp;
        Symbol min;
        if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; min = 0x80; }
        else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; min = 0x800; }
        else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; min = 0x10000; }
        else throw fail("bad lead byte");
        if (i + len > bytes.size()) throw fail("truncated sequence");
        for (std::size_t k = 1; k < len; ++k) {
            auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) throw fail("bad continuation byte");
            cp = (cp << 6) | (b & 0x3F);
        }
        if (cp < min) throw fail("overlong encoding");
        if (!is_scalar_value(cp)) throw fail("not a Unicode scalar value");
        out += cp;
        i += len;
    }
    return out;
}

namespace detail {

inline void append_hex_escape(std::string& dst, Symbol s) {
    static constexpr char digits[] = "0123456789ABCDEF";
    dst += "\\u";
    for (int shift = 12; shift >= 0; shift -= 4) dst += digits[(s >> shift) & 0xF];
}

/// Escapes one symbol; `specials` lists ASCII characters that need a backslash.
inline void append_escaped(std::string& dst, Symbol s, std::string_view specials) {
    if (s == '\n') { dst += "\\n"; return; }
    if (s == '\t') { dst += "\\t"; return; }
    if (s < 0x80 && specials.find(static_cast<char>(s)) != std::string_view::npos) {
        dst += '\\';
        dst += static_cast<char>(s);
        return;
    }
    if (s < 0x20 || s == 0x7F) { append_hex_escape(dst, s); return; }
    append_utf8(dst, s);
}

} // namespace detail

/// Renders `text` as a single-quoted literal: `'...'` with \n \t \\ \' and
/// \uXXXX escapes. The empty string renders as `''`.
inline std::string quote_literal(std::u32string_view text) {
    std::string out = "'";
    for (Symbol s : text) detail::append_escaped(out, s, "\\'");
    out += '\'';
    return out;
}

/// Renders a symbol for use inside a `[lo-hi]` class.
inline std::string class_char(Symbol s) {
    std::string out;
    detail::append_escaped(out, s, "\\'[]-");
    return out;
}

inline std::string describe(const Effect& e) {
    return "(" + quote_literal(e.out) + ", " + std::to_string(e.weight) + ")";
}

inline bool is_ident_start(Symbol c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

inline bool is_ident_char(Symbol c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_identifier(std::string_view s) {
    if (s.empty() || !is_ident_start(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!is_ident_char(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace gfst

#endif // GFST_TEXT_HPP
