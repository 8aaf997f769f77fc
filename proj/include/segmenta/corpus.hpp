#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "segmenta/error.hpp"
#include "segmenta/utf8.hpp"

namespace segmenta {

// Token normalization applied while loading raw text. Lowercasing covers
// ASCII and Latin-1 letters; punctuation stripping removes ASCII
// punctuation scalars. Both passes are idempotent.
struct NormConfig {
    bool lowercase = false;
    bool strip_punctuation = false;

    bool operator==(const NormConfig&) const = default;
};

struct WordCount {
    std::string word;
    std::uint64_t count = 0;

    bool operator==(const WordCount&) const = default;
};

// A bag of word types with occurrence counts. `word_types` is kept sorted
// by word and holds no duplicates; counts are strictly positive.
struct Corpus {
    std::vector<WordCount> word_types;
    std::string source_id;
    NormConfig normalization;

    bool empty() const { return word_types.empty(); }

    std::uint64_t total_tokens() const {
        std::uint64_t total = 0;
        for (const auto& wc : word_types) total += wc.count;
        return total;
    }

    const WordCount* find(std::string_view word) const {
        auto it = std::lower_bound(word_types.begin(), word_types.end(), word,
                                   [](const WordCount& wc, std::string_view w) { return wc.word < w; });
        if (it == word_types.end() || it->word != word) return nullptr;
        return &*it;
    }

    bool operator==(const Corpus&) const = default;
};

inline std::string normalize_word(std::string_view raw, const NormConfig& cfg) {
    std::string out;
    for (utf8::Codepoint cp : utf8::decode(raw)) {
        if (cfg.strip_punctuation && utf8::is_punctuation(cp)) continue;
        out += utf8::encode(cfg.lowercase ? utf8::to_lower(cp) : cp);
    }
    return out;
}

// Builds a corpus from explicit counts, enforcing the type invariants.
inline Corpus make_corpus(const std::map<std::string, std::uint64_t>& counts,
                          std::string source_id = "", NormConfig cfg = {}) {
    Corpus c;
    c.source_id = std::move(source_id);
    c.normalization = cfg;
    c.word_types.reserve(counts.size());
    for (const auto& [word, count] : counts) {
        if (word.empty()) throw DomainError("corpus word must be nonempty");
        if (count == 0) throw DomainError("corpus count must be positive: '" + word + "'");
        utf8::validate(word);
        c.word_types.push_back({word, count});
    }
    return c;
}

// Splits `text` on Unicode whitespace, normalizes each token, and counts
// word types. Tokens that normalize to the empty string are dropped.
// Pure function of (input bytes, cfg).
inline Corpus load_corpus(std::string_view text, const NormConfig& cfg = {},
                          std::string source_id = "") {
    std::map<std::string, std::uint64_t> counts;
    std::size_t pos = 0;
    std::string token;
    const auto flush = [&] {
        if (token.empty()) return;
        std::string word = normalize_word(token, cfg);
        token.clear();
        if (!word.empty()) ++counts[word];
    };
    while (pos < text.size()) {
        const std::size_t start = pos;
        const utf8::Codepoint cp = utf8::decode_at(text, pos);
        if (utf8::is_whitespace(cp)) {
            flush();
        } else {
            token.append(text.substr(start, pos - start));
        }
    }
    flush();
    return make_corpus(counts, std::move(source_id), cfg);
}

inline Corpus load_corpus(std::istream& in, const NormConfig& cfg = {},
                          std::string source_id = "") {
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_corpus(buf.str(), cfg, std::move(source_id));
}

// Frequency-table file format: one `word<TAB>count` per line, UTF-8.
inline Corpus load_corpus_tsv(std::istream& in, std::string source_id = "") {
    std::map<std::string, std::uint64_t> counts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected word<TAB>count", lineno);
        std::string word = line.substr(0, tab);
        const std::string count_str = line.substr(tab + 1);
        if (word.empty()) throw ParseError("empty word", lineno);
        try {
            for (utf8::Codepoint cp : utf8::decode(word)) {
                if (utf8::is_whitespace(cp)) {
                    throw ParseError("word contains whitespace: '" + word + "'", lineno);
                }
            }
        } catch (const DecodeError& e) {
            throw ParseError(std::string("bad word: ") + e.what(), lineno);
        }
        std::uint64_t count = 0;
        try {
            std::size_t used = 0;
            count = std::stoull(count_str, &used);
            if (used != count_str.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ParseError("bad count '" + count_str + "'", lineno);
        }
        if (count == 0) throw ParseError("count must be positive", lineno);
        if (counts.count(word)) throw ParseError("duplicate word '" + word + "'", lineno);
        counts[word] = count;
    }
    return make_corpus(counts, std::move(source_id));
}

inline void save_corpus_tsv(const Corpus& c, std::ostream& out) {
    for (const auto& wc : c.word_types) {
        out << wc.word << '\t' << wc.count << '\n';
    }
}

struct ZipfEntry {
    std::size_t rank = 0;
    std::string word;
    std::uint64_t count = 0;
};

// Rank/frequency profile. Ranks are 1-based, sorted by nonincreasing count
// with lexicographic tie-break on the word.
struct ZipfStats {
    std::vector<ZipfEntry> rank_frequency;
    std::uint64_t total_tokens = 0;

    // Fraction of tokens covered by the top-k types; clamps k to the type
    // count, so head_mass(rank_frequency.size()) == 1.
    double head_mass(std::size_t k) const {
        k = std::min(k, rank_frequency.size());
        std::uint64_t covered = 0;
        for (std::size_t i = 0; i < k; ++i) covered += rank_frequency[i].count;
        return static_cast<double>(covered) / static_cast<double>(total_tokens);
    }

    // Number of types occurring at most `t` times.
    std::size_t tail_count(std::uint64_t t) const {
        std::size_t n = 0;
        for (const auto& e : rank_frequency) {
            if (e.count <= t) ++n;
        }
        return n;
    }
};

inline ZipfStats zipf_profile(const Corpus& c) {
    if (c.empty()) throw EmptyInputError("zipf profile of an empty corpus");
    ZipfStats stats;
    stats.total_tokens = c.total_tokens();
    stats.rank_frequency.reserve(c.word_types.size());
    for (const auto& wc : c.word_types) {
        stats.rank_frequency.push_back({0, wc.word, wc.count});
    }
    std::sort(stats.rank_frequency.begin(), stats.rank_frequency.end(),
              [](const ZipfEntry& a, const ZipfEntry& b) {
                  if (a.count != b.count) return a.count > b.count;
                  return a.word < b.word;
              });
    for (std::size_t i = 0; i < stats.rank_frequency.size(); ++i) {
        stats.rank_frequency[i].rank = i + 1;
    }
    return stats;
}

} // namespace segmenta
