#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stylecast {

// Lenient UTF-8 decoding: malformed bytes decode to U+FFFD and advance one byte.
inline std::vector<char32_t> decode_utf8(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    while (i < text.size()) {
        unsigned char b0 = byte(i);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xe0) == 0xc0) {
            len = 2;
            cp = b0 & 0x1f;
        } else if ((b0 & 0xf0) == 0xe0) {
            len = 3;
            cp = b0 & 0x0f;
        } else if ((b0 & 0xf8) == 0xf0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(0xfffd);
            ++i;
            continue;
        }
        if (i + static_cast<std::size_t>(len) > text.size()) {
            out.push_back(0xfffd);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            unsigned char bk = byte(i + static_cast<std::size_t>(k));
            if ((bk & 0xc0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (bk & 0x3f);
        }
        if (!ok || cp > 0x10ffff) {
            out.push_back(0xfffd);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += static_cast<std::size_t>(len);
    }
    return out;
}

inline std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size() * 3);
    for (char32_t cp : cps) {
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
    return out;
}

inline bool is_space_cp(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' ||
           cp == U'\v' || cp == 0x3000 || cp == 0xa0;  // ideographic space, nbsp
}

// Comment length in Chinese: non-whitespace Unicode scalars.
inline std::size_t count_scalars_no_ws(std::string_view text) {
    std::size_t n = 0;
    for (char32_t cp : decode_utf8(text))
        if (!is_space_cp(cp)) ++n;
    return n;
}

inline std::size_t count_scalars(std::string_view text) { return decode_utf8(text).size(); }

// Comment length in English: whitespace-delimited words.
inline std::size_t count_words(std::string_view text) {
    std::size_t n = 0;
    bool in_word = false;
    for (char32_t cp : decode_utf8(text)) {
        if (is_space_cp(cp)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++n;
        }
    }
    return n;
}

inline bool is_emoji_cp(char32_t cp) {
    return (cp >= 0x1f300 && cp <= 0x1faff) ||  // pictographs, emoticons, symbols
           (cp >= 0x2600 && cp <= 0x27bf) ||    // misc symbols + dingbats
           cp == 0x2764 || cp == 0xfe0f || (cp >= 0x1f000 && cp <= 0x1f2ff);
}

enum class PunctClass {
    period,
    exclaim,
    question,
    comma,
    ellipsis,
    other,
    none,
};

inline PunctClass punct_class(char32_t cp) {
    switch (cp) {
        case U'.':
        case 0x3002:  // 。
            return PunctClass::period;
        case U'!':
        case 0xff01:  // ！
            return PunctClass::exclaim;
        case U'?':
        case 0xff1f:  // ？
            return PunctClass::question;
        case U',':
        case 0xff0c:  // ，
        case 0x3001:  // 、
        case U';':
        case 0xff1b:  // ；
            return PunctClass::comma;
        case 0x2026:  // …
            return PunctClass::ellipsis;
        default:
            break;
    }
    if ((cp >= 0x21 && cp <= 0x2f) || (cp >= 0x3a && cp <= 0x40) || (cp >= 0x5b && cp <= 0x60) ||
        (cp >= 0x7b && cp <= 0x7e) || cp == 0x201c || cp == 0x201d || cp == 0x2018 ||
        cp == 0x2019 || cp == 0x300a || cp == 0x300b || cp == 0x300c || cp == 0x300d ||
        cp == 0xff08 || cp == 0xff09 || cp == 0xff5e)
        return PunctClass::other;
    return PunctClass::none;
}

inline bool is_sentence_end_cp(char32_t cp) {
    PunctClass c = punct_class(cp);
    return c == PunctClass::period || c == PunctClass::exclaim || c == PunctClass::question ||
           c == PunctClass::ellipsis;
}

}  // namespace stylecast
