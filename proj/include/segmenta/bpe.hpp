#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "segmenta/corpus.hpp"
#include "segmenta/error.hpp"
#include "segmenta/segmentation.hpp"
#include "segmenta/utf8.hpp"

namespace segmenta {

struct MergePair {
    std::string left;
    std::string right;

    std::string merged() const { return left + right; }

    bool operator==(const MergePair&) const = default;
    auto operator<=>(const MergePair&) const = default;
};

// The trained model: an ordered list of pair merges over a seed alphabet.
// Every merge introduces exactly one new vocabulary symbol, so
// |vocab| == |seed_alphabet| + |merges|.
struct MergeTable {
    std::vector<MergePair> merges;
    std::set<std::string> seed_alphabet;
    MarkerPolicy marker;
    std::set<std::string> vocab;

    bool operator==(const MergeTable&) const = default;
};

struct TrainStep {
    MergePair pair;
    std::uint64_t frequency = 0; // weighted pair count at merge time
    std::uint64_t state_hash = 0; // corpus snapshot after the merge
};

struct TrainTrace {
    std::vector<TrainStep> steps;
};

// Budget as either a merge count or a target vocabulary size; the two
// interconvert through the vocabulary arithmetic above.
struct TrainBudget {
    enum class Kind { merge_count, vocab_size };
    Kind kind = Kind::merge_count;
    std::size_t value = 0;

    static TrainBudget merges(std::size_t n) { return {Kind::merge_count, n}; }
    static TrainBudget vocab(std::size_t size) { return {Kind::vocab_size, size}; }
};

struct TrainResult {
    MergeTable table;
    TrainTrace trace;
};

namespace detail {

struct TrainWord {
    std::vector<std::string> symbols;
    std::uint64_t count = 0;
    std::string word;
};

inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char b : data) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t state_hash(const std::vector<TrainWord>& words) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& w : words) {
        h = fnv1a(std::to_string(w.count), h);
        h = fnv1a("|", h);
        for (const auto& s : w.symbols) {
            h = fnv1a(s, h);
            h = fnv1a("\x1e", h);
        }
        h = fnv1a("\n", h);
    }
    return h;
}

// Leftmost-first replacement: scanning resumes after the merged symbol,
// so "a a a" under (a,a) becomes "aa a".
inline std::vector<std::string> replace_pair(const std::vector<std::string>& symbols,
                                             const MergePair& pair) {
    std::vector<std::string> out;
    out.reserve(symbols.size());
    std::size_t i = 0;
    while (i < symbols.size()) {
        if (i + 1 < symbols.size() && symbols[i] == pair.left && symbols[i + 1] == pair.right) {
            out.push_back(pair.merged());
            i += 2;
        } else {
            out.push_back(symbols[i]);
            ++i;
        }
    }
    return out;
}

} // namespace detail

// Learns a merge table from a word-type frequency table.
//
// Words are character-split with the marker appended, then the adjacent
// pair with the highest count (weighted by word counts) is merged
// everywhere, one pair per step, until the budget is exhausted or no pair
// remains. Pairs whose concatenation is already a vocabulary symbol are
// ineligible, which keeps each merge introducing a fresh symbol.
//
// Tie-break: word types are ordered by (descending count, then
// lexicographic word); each word is scanned left to right and the first
// tied pair encountered wins. This makes training deterministic.
inline TrainResult train_bpe(const Corpus& freq, TrainBudget budget,
                             const MarkerPolicy& marker = MarkerPolicy::end_of_word()) {
    if (freq.empty()) throw EmptyInputError("cannot train on an empty corpus");
    check_marker(marker);

    std::vector<detail::TrainWord> words;
    words.reserve(freq.word_types.size());
    for (const auto& wc : freq.word_types) {
        detail::TrainWord tw;
        tw.word = wc.word;
        tw.count = wc.count;
        tw.symbols = utf8::split_scalars(wc.word);
        if (marker.enabled()) {
            for (const auto& s : tw.symbols) {
                if (s == marker.symbol) {
                    throw TrainError("marker symbol '" + marker.symbol +
                                     "' occurs in corpus word '" + wc.word + "'");
                }
            }
            tw.symbols.push_back(marker.symbol);
        }
        words.push_back(std::move(tw));
    }
    std::sort(words.begin(), words.end(), [](const detail::TrainWord& a, const detail::TrainWord& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.word < b.word;
    });

    TrainResult result;
    MergeTable& table = result.table;
    table.marker = marker;
    for (const auto& w : words) {
        table.seed_alphabet.insert(w.symbols.begin(), w.symbols.end());
    }
    table.vocab = table.seed_alphabet;

    std::size_t merge_budget = 0;
    if (budget.kind == TrainBudget::Kind::merge_count) {
        merge_budget = budget.value;
    } else {
        merge_budget = budget.value > table.seed_alphabet.size()
                           ? budget.value - table.seed_alphabet.size()
                           : 0;
    }

    for (std::size_t step = 0; step < merge_budget; ++step) {
        std::map<MergePair, std::uint64_t> pair_counts;
        for (const auto& w : words) {
            for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
                const MergePair p{w.symbols[i], w.symbols[i + 1]};
                if (!table.vocab.count(p.merged())) pair_counts[p] += w.count;
            }
        }
        std::uint64_t best = 0;
        for (const auto& [p, c] : pair_counts) best = std::max(best, c);
        if (best == 0) break;

        MergePair chosen;
        bool found = false;
        for (const auto& w : words) {
            for (std::size_t i = 0; !found && i + 1 < w.symbols.size(); ++i) {
                const MergePair p{w.symbols[i], w.symbols[i + 1]};
                auto it = pair_counts.find(p);
                if (it != pair_counts.end() && it->second == best) {
                    chosen = p;
                    found = true;
                }
            }
            if (found) break;
        }

        for (auto& w : words) {
            w.symbols = detail::replace_pair(w.symbols, chosen);
        }
        table.vocab.insert(chosen.merged());
        table.merges.push_back(chosen);
        result.trace.steps.push_back({chosen, best, detail::state_hash(words)});
    }
    return result;
}

// Replays the learned merges, in learned order, on a character-split word.
// Pure function of (table, word); characters outside the seed alphabet
// simply never merge and pass through as singleton segments. `max_merges`
// limits the replay to the first k merges.
inline Segmentation apply_bpe(const MergeTable& table, std::string_view word,
                              std::size_t max_merges = std::numeric_limits<std::size_t>::max()) {
    if (word.empty()) throw EmptyInputError("cannot segment an empty word");
    check_marker(table.marker);
    Segmentation seg;
    seg.word = std::string(word);
    seg.segments = utf8::split_scalars(word);
    if (table.marker.enabled()) seg.segments.push_back(table.marker.symbol);
    const std::size_t limit = std::min(max_merges, table.merges.size());
    for (std::size_t i = 0; i < limit; ++i) {
        seg.segments = detail::replace_pair(seg.segments, table.merges[i]);
    }
    seg.marker = table.marker;
    seg.origin = SegOrigin::bpe;
    return seg;
}

// Merge-table file format:
//   #segmenta-bpe v1 marker=· position=end
//   #alphabet · d e i l n o r s t w
//   e r
//   er ·
//   ...
// Merges appear one per line as `left<SPACE>right`, in learned order.
inline void save_merge_table(const MergeTable& table, std::ostream& out) {
    const auto check_symbol = [](const std::string& s) {
        if (s.empty() || s.find(' ') != std::string::npos || s.find('\n') != std::string::npos ||
            s.find('\t') != std::string::npos) {
            throw IntegrityError("symbol not serializable: '" + s + "'");
        }
    };
    out << "#segmenta-bpe v1 marker=" << table.marker.symbol << " position="
        << (table.marker.enabled() ? "end" : "none") << '\n';
    out << "#alphabet";
    for (const auto& s : table.seed_alphabet) {
        check_symbol(s);
        out << ' ' << s;
    }
    out << '\n';
    for (const auto& m : table.merges) {
        check_symbol(m.left);
        check_symbol(m.right);
        out << m.left << ' ' << m.right << '\n';
    }
}

inline std::string merge_table_to_string(const MergeTable& table) {
    std::ostringstream out;
    save_merge_table(table, out);
    return out.str();
}

inline MergeTable load_merge_table(std::istream& in) {
    MergeTable table;
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::istringstream header(line);
        std::string magic;
        header >> magic;
        if (magic != "#segmenta-bpe") throw ParseError("not a merge-table file", lineno);
        std::string version;
        header >> version;
        if (version != "v1") throw ParseError("unsupported version '" + version + "'", lineno);
        std::string field;
        std::string marker_symbol;
        std::string position;
        while (header >> field) {
            if (field.rfind("marker=", 0) == 0) {
                marker_symbol = field.substr(7);
            } else if (field.rfind("position=", 0) == 0) {
                position = field.substr(9);
            } else {
                throw ParseError("unknown header field '" + field + "'", lineno);
            }
        }
        if (marker_symbol.empty() || position.empty()) {
            throw ParseError("header must carry marker= and position=", lineno);
        }
        if (position == "end") {
            table.marker = MarkerPolicy::end_of_word(marker_symbol);
        } else if (position == "none") {
            table.marker = MarkerPolicy{marker_symbol, MarkerPosition::none};
        } else {
            throw ParseError("bad position '" + position + "'", lineno);
        }
    }

    if (!std::getline(in, line)) throw ParseError("missing #alphabet line", lineno + 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#alphabet", 0) != 0) throw ParseError("missing #alphabet line", lineno);
    {
        std::istringstream alpha(line.substr(9));
        std::string sym;
        while (alpha >> sym) {
            utf8::validate(sym);
            table.seed_alphabet.insert(sym);
        }
    }
    table.vocab = table.seed_alphabet;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto space = line.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
            line.find(' ', space + 1) != std::string::npos) {
            throw ParseError("expected `left<SPACE>right`", lineno);
        }
        utf8::validate(line);
        MergePair pair{line.substr(0, space), line.substr(space + 1)};
        if (!table.vocab.count(pair.left)) {
            throw IntegrityError("merge constituent '" + pair.left +
                                 "' precedes its definition (line " + std::to_string(lineno) + ")");
        }
        if (!table.vocab.count(pair.right)) {
            throw IntegrityError("merge constituent '" + pair.right +
                                 "' precedes its definition (line " + std::to_string(lineno) + ")");
        }
        const std::string merged = pair.merged();
        if (table.vocab.count(merged)) {
            throw IntegrityError("duplicate vocabulary symbol '" + merged + "' (line " +
                                 std::to_string(lineno) + ")");
        }
        table.vocab.insert(merged);
        table.merges.push_back(std::move(pair));
    }
    return table;
}

} // namespace segmenta
