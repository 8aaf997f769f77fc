#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "segmenta/error.hpp"
#include "segmenta/utf8.hpp"

namespace segmenta {

enum class SegOrigin { chars, bytes, bpe, reference, external };

enum class MarkerPosition { none, end_of_word };

// Policy for the distinguished end-of-word symbol. The symbol must be a
// single Unicode scalar and must not occur in raw corpus words (checked
// when a merge table is trained).
struct MarkerPolicy {
    std::string symbol = "\xc2\xb7"; // '·'
    MarkerPosition position = MarkerPosition::none;

    static MarkerPolicy end_of_word(std::string sym = "\xc2\xb7") {
        return MarkerPolicy{std::move(sym), MarkerPosition::end_of_word};
    }
    static MarkerPolicy disabled() { return MarkerPolicy{}; }

    bool enabled() const { return position == MarkerPosition::end_of_word; }

    bool operator==(const MarkerPolicy&) const = default;
};

inline void check_marker(const MarkerPolicy& marker) {
    if (marker.enabled() && utf8::scalar_count(marker.symbol) != 1) {
        throw DomainError("marker symbol must be a single scalar: '" + marker.symbol + "'");
    }
}

// A word together with an ordered list of segments. Reassembling the
// segments (and, for the byte origin, un-hexing them) recovers the word.
struct Segmentation {
    std::string word;
    std::vector<std::string> segments;
    MarkerPolicy marker;
    SegOrigin origin = SegOrigin::external;

    bool operator==(const Segmentation&) const = default;
};

// One segment per Unicode scalar; the marker is appended as its own final
// segment when the policy asks for one.
inline Segmentation segment_chars(std::string_view word, const MarkerPolicy& marker) {
    if (word.empty()) throw EmptyInputError("cannot segment an empty word");
    check_marker(marker);
    Segmentation seg;
    seg.word = std::string(word);
    seg.segments = utf8::split_scalars(word);
    if (marker.enabled()) seg.segments.push_back(marker.symbol);
    seg.marker = marker;
    seg.origin = SegOrigin::chars;
    return seg;
}

// One segment per byte of the UTF-8 encoding, rendered as a lowercase hex
// pair. The segment alphabet is therefore bounded by 256.
inline Segmentation segment_bytes(std::string_view word) {
    if (word.empty()) throw EmptyInputError("cannot segment an empty word");
    utf8::validate(word);
    static const char* digits = "0123456789abcdef";
    Segmentation seg;
    seg.word = std::string(word);
    seg.segments.reserve(word.size());
    for (unsigned char b : word) {
        std::string hex;
        hex.push_back(digits[b >> 4]);
        hex.push_back(digits[b & 0x0F]);
        seg.segments.push_back(std::move(hex));
    }
    seg.origin = SegOrigin::bytes;
    return seg;
}

namespace detail {

inline int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

// Removes every occurrence of the marker scalar from `s`.
inline std::string strip_marker(std::string_view s, const MarkerPolicy& marker) {
    if (!marker.enabled()) return std::string(s);
    std::string out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t start = pos;
        utf8::decode_at(s, pos);
        std::string_view scalar = s.substr(start, pos - start);
        if (scalar != marker.symbol) out.append(scalar);
    }
    return out;
}

} // namespace detail

// Inverse of every segmenter: reassembles the original word. Under an
// end-of-word policy the marker may only occur as the final scalar of the
// concatenation; anywhere else is an integrity error.
inline std::string join(const Segmentation& seg) {
    for (const auto& s : seg.segments) {
        if (s.empty()) throw IntegrityError("segmentation contains an empty segment");
    }
    if (seg.origin == SegOrigin::bytes) {
        std::string word;
        for (const auto& s : seg.segments) {
            if (s.size() != 2) throw IntegrityError("byte segment is not a hex pair: '" + s + "'");
            const int hi = detail::hex_value(s[0]);
            const int lo = detail::hex_value(s[1]);
            if (hi < 0 || lo < 0) throw IntegrityError("byte segment is not a hex pair: '" + s + "'");
            word.push_back(static_cast<char>((hi << 4) | lo));
        }
        return word;
    }
    std::string concat;
    for (const auto& s : seg.segments) concat += s;
    if (!seg.marker.enabled()) return concat;
    check_marker(seg.marker);

    std::string word;
    std::size_t pos = 0;
    while (pos < concat.size()) {
        const std::size_t start = pos;
        utf8::decode_at(concat, pos);
        std::string_view scalar = std::string_view(concat).substr(start, pos - start);
        if (scalar == seg.marker.symbol) {
            if (pos != concat.size()) {
                throw IntegrityError("marker symbol occurs before the end of the segmentation");
            }
        } else {
            word.append(scalar);
        }
    }
    return word;
}

// Segments with marker symbols removed; segments that consist solely of
// the marker are dropped. Useful for display and boundary computation.
inline std::vector<std::string> display_segments(const Segmentation& seg) {
    if (!seg.marker.enabled() || seg.origin == SegOrigin::bytes) return seg.segments;
    std::vector<std::string> out;
    for (const auto& s : seg.segments) {
        std::string stripped = detail::strip_marker(s, seg.marker);
        if (!stripped.empty()) out.push_back(std::move(stripped));
    }
    return out;
}

// Internal cut positions of a segmentation, i.e. cumulative segment
// lengths excluding the end of the word. Positions count Unicode scalars,
// except for byte segmentations where the atomic unit is the byte.
inline std::set<std::size_t> boundary_positions(const Segmentation& seg) {
    const std::vector<std::string> segs = display_segments(seg);
    std::set<std::size_t> cuts;
    std::size_t offset = 0;
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        offset += seg.origin == SegOrigin::bytes ? 1 : utf8::scalar_count(segs[i]);
        cuts.insert(offset);
    }
    return cuts;
}

struct BoundaryScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::set<std::size_t> candidate_boundaries;
    std::set<std::size_t> reference_boundaries;
};

// Boundary precision/recall/F1 of `candidate` against `reference`. An
// empty boundary set scores vacuously perfect on its own side, so two
// unsplit words agree with F1 = 1.
inline BoundaryScore compare_segmentations(const Segmentation& candidate,
                                           const Segmentation& reference) {
    const std::string cand_word = detail::strip_marker(candidate.word, candidate.marker);
    const std::string ref_word = detail::strip_marker(reference.word, reference.marker);
    if (cand_word != ref_word) {
        throw ComparisonError("segmentations of different words: '" + cand_word +
                              "' vs '" + ref_word + "'");
    }
    BoundaryScore score;
    score.candidate_boundaries = boundary_positions(candidate);
    score.reference_boundaries = boundary_positions(reference);

    std::size_t hits = 0;
    for (std::size_t b : score.candidate_boundaries) {
        hits += score.reference_boundaries.count(b);
    }
    score.precision = score.candidate_boundaries.empty()
                          ? 1.0
                          : static_cast<double>(hits) / static_cast<double>(score.candidate_boundaries.size());
    score.recall = score.reference_boundaries.empty()
                       ? 1.0
                       : static_cast<double>(hits) / static_cast<double>(score.reference_boundaries.size());
    score.f1 = score.precision + score.recall == 0.0
                   ? 0.0
                   : 2.0 * score.precision * score.recall / (score.precision + score.recall);
    return score;
}

// Segmentation text format: `word<TAB>seg1 seg2 ...`, one word per line.
// Loaded entries carry origin=reference and no marker.
inline std::vector<Segmentation> load_segmentation_file(std::istream& in) {
    std::vector<Segmentation> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected word<TAB>segments", lineno);
        Segmentation seg;
        seg.word = line.substr(0, tab);
        if (seg.word.empty()) throw ParseError("empty word", lineno);
        std::string rest = line.substr(tab + 1);
        std::size_t start = 0;
        while (start <= rest.size()) {
            std::size_t end = rest.find(' ', start);
            if (end == std::string::npos) end = rest.size();
            if (end > start) seg.segments.push_back(rest.substr(start, end - start));
            start = end + 1;
        }
        if (seg.segments.empty()) throw ParseError("no segments", lineno);
        seg.origin = SegOrigin::reference;
        try {
            utf8::validate(line);
        } catch (const DecodeError& e) {
            throw ParseError(std::string("bad encoding: ") + e.what(), lineno);
        }
        if (join(seg) != seg.word) {
            throw ParseError("segments do not reassemble the word '" + seg.word + "'", lineno);
        }
        out.push_back(std::move(seg));
    }
    return out;
}

inline void save_segmentation_file(const std::vector<Segmentation>& segs, std::ostream& out) {
    for (const auto& seg : segs) {
        out << seg.word << '\t';
        for (std::size_t i = 0; i < seg.segments.size(); ++i) {
            if (i) out << ' ';
            out << seg.segments[i];
        }
        out << '\n';
    }
}

// Pipe-joined display form without markers, e.g. "low|er".
inline std::string format_pipes(const Segmentation& seg) {
    const std::vector<std::string> segs = display_segments(seg);
    std::string out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (i) out += '|';
        out += segs[i];
    }
    return out;
}

} // namespace segmenta
