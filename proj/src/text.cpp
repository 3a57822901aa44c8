#include "satbot/text.hpp"

#include <memory>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace satbot::text {

namespace {

UChar32 fold_letter(UChar32 c) {
    switch (c) {
        case 0x064A:  // ARABIC LETTER YEH
        case 0x0649:  // ARABIC LETTER ALEF MAKSURA
            return 0x06CC;  // FARSI YEH
        case 0x0643:  // ARABIC LETTER KAF
            return 0x06A9;  // KEHEH
        default:
            return c;
    }
}

bool is_separator(UChar32 c) {
    const int8_t type = u_charType(c);
    return u_isUWhiteSpace(c) || u_ispunct(c) || type == U_MATH_SYMBOL || type == U_CURRENCY_SYMBOL ||
           type == U_MODIFIER_SYMBOL || type == U_OTHER_SYMBOL || type == U_CONTROL_CHAR;
}

bool is_dropped(UChar32 c) {
    const int8_t type = u_charType(c);
    // Mn/Me cover Latin accents and Arabic harakat; Cf covers ZWNJ/ZWJ/bidi marks.
    return type == U_NON_SPACING_MARK || type == U_ENCLOSING_MARK || type == U_FORMAT_CHAR ||
           c == 0x0640;  // tatweel
}

icu::UnicodeString normalize_unicode(std::string_view utf8) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) return {};

    icu::UnicodeString src = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    src.toLower(icu::Locale::getRoot());
    icu::UnicodeString decomposed = nfd->normalize(src, status);
    if (U_FAILURE(status)) return {};

    icu::UnicodeString cleaned;
    bool pending_space = false;
    for (int32_t i = 0; i < decomposed.length();) {
        const UChar32 c = decomposed.char32At(i);
        i += U16_LENGTH(c);
        if (is_dropped(c)) continue;
        if (is_separator(c)) {
            pending_space = !cleaned.isEmpty();
            continue;
        }
        if (pending_space) {
            cleaned.append(static_cast<UChar>(u' '));
            pending_space = false;
        }
        cleaned.append(fold_letter(c));
    }
    icu::UnicodeString composed = nfc->normalize(cleaned, status);
    if (U_FAILURE(status)) return cleaned;
    return composed;
}

std::string to_utf8(const icu::UnicodeString& s) {
    std::string out;
    s.toUTF8String(out);
    return out;
}

}  // namespace

std::string normalize(std::string_view utf8) { return to_utf8(normalize_unicode(utf8)); }

std::vector<std::string> tokenize(std::string_view utf8) {
    const icu::UnicodeString norm = normalize_unicode(utf8);
    std::vector<std::string> tokens;
    if (norm.isEmpty()) return tokens;

    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> it(icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status)) return tokens;
    it->setText(norm);

    int32_t start = it->first();
    for (int32_t end = it->next(); end != icu::BreakIterator::DONE; start = end, end = it->next()) {
        if (it->getRuleStatus() < UBRK_WORD_NONE_LIMIT) continue;
        icu::UnicodeString piece;
        norm.extract(start, end - start, piece);
        tokens.push_back(to_utf8(piece));
    }
    return tokens;
}

std::size_t char_length(std::string_view utf8) {
    std::size_t n = 0;
    for (unsigned char c : utf8) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string truncate_chars(std::string_view utf8, std::size_t max_chars) {
    std::size_t seen = 0;
    for (std::size_t i = 0; i < utf8.size(); ++i) {
        if ((static_cast<unsigned char>(utf8[i]) & 0xC0) != 0x80) {
            if (seen == max_chars) return std::string(utf8.substr(0, i));
            ++seen;
        }
    }
    return std::string(utf8);
}

}  // namespace satbot::text
