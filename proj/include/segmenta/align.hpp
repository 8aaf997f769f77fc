#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "segmenta/error.hpp"
#include "segmenta/segmentation.hpp"
#include "segmenta/utf8.hpp"

namespace segmenta {

// Externally supplied attention weights: one row per target segment, one
// column per source segment. Weights are nonnegative and every row has at
// least one positive entry.
struct AttentionMatrix {
    Segmentation source_segments;
    Segmentation target_segments;
    std::vector<std::vector<double>> weights; // [target][source]
};

struct AlignmentLink {
    std::size_t target_index = 0;
    std::size_t source_index = 0;

    bool operator==(const AlignmentLink&) const = default;
};

// Hard alignment: exactly one link per target index.
struct Alignment {
    std::vector<AlignmentLink> links;

    bool operator==(const Alignment&) const = default;
};

inline void validate_attention(const AttentionMatrix& am) {
    const std::size_t n_src = am.source_segments.segments.size();
    const std::size_t n_tgt = am.target_segments.segments.size();
    if (n_src == 0 || n_tgt == 0) throw IntegrityError("attention matrix needs segments on both sides");
    if (am.weights.size() != n_tgt) {
        throw IntegrityError("weight row count does not match target segment count");
    }
    for (std::size_t t = 0; t < n_tgt; ++t) {
        if (am.weights[t].size() != n_src) {
            throw IntegrityError("weight column count does not match source segment count");
        }
        bool positive = false;
        for (double w : am.weights[t]) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw IntegrityError("attention weights must be finite and nonnegative");
            }
            if (w > 0.0) positive = true;
        }
        if (!positive) {
            throw IntegrityError("degenerate all-zero row for target segment '" +
                                 am.target_segments.segments[t] + "'");
        }
    }
}

// Links each target segment to the argmax of its weight row; ties break
// toward the smallest source index.
inline Alignment hard_align(const AttentionMatrix& am) {
    validate_attention(am);
    Alignment al;
    al.links.reserve(am.weights.size());
    for (std::size_t t = 0; t < am.weights.size(); ++t) {
        std::size_t best = 0;
        for (std::size_t s = 1; s < am.weights[t].size(); ++s) {
            if (am.weights[t][s] > am.weights[t][best]) best = s;
        }
        al.links.push_back({t, best});
    }
    return al;
}

// Matrix file format: line 1 source segments (space-separated), line 2
// target segments, then one row of decimal weights per target segment.
inline AttentionMatrix load_attention(std::istream& in) {
    AttentionMatrix am;
    std::string line;
    std::size_t lineno = 0;

    const auto read_segments = [&](const char* side) {
        if (!std::getline(in, line)) throw ParseError(std::string("missing ") + side + " segments", lineno + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        try {
            utf8::validate(line);
        } catch (const DecodeError& e) {
            throw ParseError(std::string("bad encoding: ") + e.what(), lineno);
        }
        Segmentation seg;
        std::istringstream split(line);
        std::string tok;
        while (split >> tok) {
            seg.segments.push_back(tok);
            seg.word += tok;
        }
        if (seg.segments.empty()) throw ParseError(std::string("no ") + side + " segments", lineno);
        seg.origin = SegOrigin::external;
        return seg;
    };
    am.source_segments = read_segments("source");
    am.target_segments = read_segments("target");

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream split(line);
        std::vector<double> row;
        std::string tok;
        while (split >> tok) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw ParseError("bad weight '" + tok + "'", lineno);
            }
        }
        if (row.size() != am.source_segments.segments.size()) {
            throw ParseError("expected one weight per source segment", lineno);
        }
        am.weights.push_back(std::move(row));
    }
    if (am.weights.size() != am.target_segments.segments.size()) {
        throw ParseError("expected one weight row per target segment", lineno + 1);
    }
    validate_attention(am);
    return am;
}

namespace detail {

inline void check_renderable(const AttentionMatrix& am, const Alignment& al) {
    validate_attention(am);
    const std::size_t n_tgt = am.target_segments.segments.size();
    const std::size_t n_src = am.source_segments.segments.size();
    if (al.links.size() != n_tgt) {
        throw RenderError("alignment must carry exactly one link per target segment");
    }
    std::vector<bool> seen(n_tgt, false);
    for (const auto& link : al.links) {
        if (link.target_index >= n_tgt || link.source_index >= n_src) {
            throw RenderError("alignment link index out of range");
        }
        if (seen[link.target_index]) throw RenderError("duplicate link for a target segment");
        seen[link.target_index] = true;
    }
}

struct SegLayout {
    std::vector<std::size_t> start;  // column of each segment
    std::vector<std::size_t> center; // column of each segment's midpoint
    std::size_t width = 0;
};

inline SegLayout layout_row(const std::vector<std::string>& segs, std::size_t gap = 3) {
    SegLayout l;
    std::size_t x = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const std::size_t w = utf8::scalar_count(segs[i]);
        l.start.push_back(x);
        l.center.push_back(x + (w - 1) / 2);
        x += w + gap;
    }
    l.width = x > gap ? x - gap : 0;
    return l;
}

// Writes `text` into the character grid `row` starting at column `x`.
inline void put(std::vector<std::string>& row, std::size_t x, const std::vector<std::string>& scalars) {
    for (std::size_t i = 0; i < scalars.size(); ++i) row[x + i] = scalars[i];
}

} // namespace detail

// Two segment rows connected by drawn link lines, e.g.
//
//   period   on   t   ist
//   |  _____/   _/     |
//   | /        /       |
//   par   od   ont   iste
//
// The output is deterministic byte-for-byte for identical inputs.
inline std::string render_text(const AttentionMatrix& am, const Alignment& al) {
    detail::check_renderable(am, al);
    const auto& src = am.source_segments.segments;
    const auto& tgt = am.target_segments.segments;
    const detail::SegLayout src_layout = detail::layout_row(src);
    const detail::SegLayout tgt_layout = detail::layout_row(tgt);
    const std::size_t width = std::max(src_layout.width, tgt_layout.width);
    constexpr std::size_t connector_rows = 3;

    // Grid of single-scalar cells so multibyte segments stay aligned.
    std::vector<std::vector<std::string>> grid(connector_rows + 2,
                                               std::vector<std::string>(width, " "));
    for (std::size_t i = 0; i < src.size(); ++i) {
        detail::put(grid[0], src_layout.start[i], utf8::split_scalars(src[i]));
    }
    for (std::size_t i = 0; i < tgt.size(); ++i) {
        detail::put(grid[connector_rows + 1], tgt_layout.start[i], utf8::split_scalars(tgt[i]));
    }
    for (const auto& link : al.links) {
        const double x0 = static_cast<double>(src_layout.center[link.source_index]);
        const double x1 = static_cast<double>(tgt_layout.center[link.target_index]);
        const char stroke = x1 > x0 ? '\\' : x1 < x0 ? '/' : '|';
        for (std::size_t r = 1; r <= connector_rows; ++r) {
            const double t = static_cast<double>(r) / (connector_rows + 1);
            const auto x = static_cast<std::size_t>(std::lround(x0 + t * (x1 - x0)));
            grid[r][x] = stroke;
        }
    }

    std::string out;
    for (const auto& row : grid) {
        std::string line;
        for (const auto& cell : row) line += cell;
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line;
        out += '\n';
    }
    for (const auto& link : al.links) {
        out += tgt[link.target_index];
        out += " -> ";
        out += src[link.source_index];
        out += '\n';
    }
    return out;
}

// Standalone SVG with one <text> per segment and one <line> per link;
// integer coordinates keep the output byte-stable.
inline std::string render_svg(const AttentionMatrix& am, const Alignment& al) {
    detail::check_renderable(am, al);
    const auto& src = am.source_segments.segments;
    const auto& tgt = am.target_segments.segments;
    const detail::SegLayout src_layout = detail::layout_row(src);
    const detail::SegLayout tgt_layout = detail::layout_row(tgt);
    constexpr std::size_t char_w = 9;
    constexpr std::size_t margin = 10;
    constexpr std::size_t src_y = 30;
    constexpr std::size_t tgt_y = 120;
    const std::size_t width = margin * 2 + char_w * std::max(src_layout.width, tgt_layout.width);
    const std::size_t height = tgt_y + 20;

    const auto escape = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            switch (c) {
                case '&': out += "&amp;"; break;
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                default: out += c;
            }
        }
        return out;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "  <style>text { font-family: monospace; font-size: 14px; }</style>\n";
    for (std::size_t i = 0; i < src.size(); ++i) {
        svg << "  <text x=\"" << margin + char_w * src_layout.start[i] << "\" y=\"" << src_y
            << "\">" << escape(src[i]) << "</text>\n";
    }
    for (std::size_t i = 0; i < tgt.size(); ++i) {
        svg << "  <text x=\"" << margin + char_w * tgt_layout.start[i] << "\" y=\"" << tgt_y
            << "\">" << escape(tgt[i]) << "</text>\n";
    }
    for (const auto& link : al.links) {
        const std::size_t x1 = margin + char_w * src_layout.center[link.source_index] + char_w / 2;
        const std::size_t x2 = margin + char_w * tgt_layout.center[link.target_index] + char_w / 2;
        svg << "  <line x1=\"" << x1 << "\" y1=\"" << src_y + 8 << "\" x2=\"" << x2 << "\" y2=\""
            << tgt_y - 16 << "\" stroke=\"black\" data-t=\"" << link.target_index
            << "\" data-s=\"" << link.source_index << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

enum class RenderFormat { text, svg };

inline std::string render_alignment(const AttentionMatrix& am, const Alignment& al,
                                    RenderFormat format) {
    return format == RenderFormat::text ? render_text(am, al) : render_svg(am, al);
}

} // namespace segmenta
