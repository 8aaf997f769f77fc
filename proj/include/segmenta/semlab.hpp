#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "segmenta/error.hpp"
#include "segmenta/utf8.hpp"

namespace segmenta {

// A finite, total map from strings to opaque meaning identifiers.
// Distinct strings may share a meaning (synonyms are allowed).
struct MeaningFunction {
    std::map<std::string, std::string> entries;
};

// One function-value of the constructed meaning function. A value is
// identified by its defining string s and behaves as a finite map with
// two kinds of entries:
//   - the string s itself, mapped to the original meaning m(s);
//   - each function-value defined by t (with s·t in S), mapped to the
//     function-value defined by s·t.
struct MuValue {
    std::string defining_string;
    std::string self_meaning;
    std::map<std::string, std::string> applications; // t -> s·t, both as defining strings

    bool operator==(const MuValue&) const = default;
};

// The constructed meaning function over a finite string set S. For all
// s, t with s, t, s·t in S:  mu(s·t) = mu(s)(mu(t))  and  mu(s)(s) = m(s).
// Distinct strings always get distinct function-values, even when their
// original meanings coincide.
struct MuFunction {
    std::map<std::string, MuValue> carrier;
    std::string separator; // inserted between s and t when concatenating

    std::string concat(const std::string& s, const std::string& t) const {
        return s + separator + t;
    }
};

inline MuFunction build_mu(const MeaningFunction& m, std::string_view separator = "") {
    MuFunction mu;
    mu.separator = std::string(separator);
    for (const auto& [s, meaning] : m.entries) {
        if (s.empty()) throw DomainError("meaning function defined on an empty string");
        MuValue v;
        v.defining_string = s;
        v.self_meaning = meaning;
        mu.carrier.emplace(s, std::move(v));
    }
    for (const auto& s_entry : m.entries) {
        for (const auto& t_entry : m.entries) {
            const std::string& s = s_entry.first;
            const std::string& t = t_entry.first;
            const std::string st = mu.concat(s, t);
            if (m.entries.count(st)) {
                mu.carrier[s].applications[t] = st;
            }
        }
    }
    return mu;
}

struct MuCheckReport {
    std::size_t strings = 0;
    std::size_t composition_checked = 0; // mu(s·t) = mu(s)(mu(t))
    std::size_t recovery_checked = 0;    // mu(s)(s) = m(s)
    std::vector<std::string> composition_violations;
    std::vector<std::string> recovery_violations;
    bool injective = true;
    std::vector<std::string> injectivity_violations;

    bool ok() const {
        return composition_violations.empty() && recovery_violations.empty() && injective;
    }
};

// Exhaustively verifies both defining equations over all of S, plus
// injectivity of the constructed function. Failures are reported as
// counterexamples, never thrown.
inline MuCheckReport mu_check(const MuFunction& mu, const MeaningFunction& m) {
    MuCheckReport report;
    report.strings = m.entries.size();

    for (const auto& [s, meaning] : m.entries) {
        ++report.recovery_checked;
        auto it = mu.carrier.find(s);
        if (it == mu.carrier.end()) {
            report.recovery_violations.push_back("mu undefined on '" + s + "'");
            continue;
        }
        if (it->second.defining_string != s || it->second.self_meaning != meaning) {
            report.recovery_violations.push_back("mu('" + s + "')('" + s + "') != m('" + s + "')");
        }
    }

    for (const auto& s_entry : m.entries) {
        for (const auto& t_entry : m.entries) {
            const std::string& s = s_entry.first;
            const std::string& t = t_entry.first;
            const std::string st = mu.concat(s, t);
            if (!m.entries.count(st)) continue;
            ++report.composition_checked;
            auto it = mu.carrier.find(s);
            if (it == mu.carrier.end()) {
                report.composition_violations.push_back("mu undefined on '" + s + "'");
                continue;
            }
            auto app = it->second.applications.find(t);
            if (app == it->second.applications.end()) {
                report.composition_violations.push_back("mu('" + s + "') not defined on mu('" + t + "')");
            } else if (app->second != st || !mu.carrier.count(st)) {
                report.composition_violations.push_back("mu('" + s + "')(mu('" + t + "')) != mu('" + st + "')");
            }
        }
    }

    // Function-values are compared extensionally: self entry (string key
    // and meaning) plus all application entries.
    for (auto a = mu.carrier.begin(); a != mu.carrier.end(); ++a) {
        for (auto b = std::next(a); b != mu.carrier.end(); ++b) {
            if (a->second == b->second) {
                report.injective = false;
                report.injectivity_violations.push_back("mu('" + a->first + "') == mu('" +
                                                        b->first + "')");
            }
        }
    }
    return report;
}

// Word meanings plus an optional per-word syllable count.
struct Lexicon {
    std::map<std::string, std::string> entries;
    std::map<std::string, int> syllables;
};

enum class ResidueSide { prefix, suffix };

// The denotation of the unfocused remainder of a word: a partial function
// from segment sounds to whole-word meanings. Sounds are modeled as
// orthographic segment strings; apply() is undefined outside the table.
struct ResidueFunction {
    std::string residue;
    ResidueSide side = ResidueSide::prefix;
    std::map<std::string, std::string> table; // sound -> meaning of residue·sound

    std::optional<std::string> apply(std::string_view sound) const {
        auto it = table.find(std::string(sound));
        if (it == table.end()) return std::nullopt;
        return it->second;
    }
};

// Splits every lexicon word around `residue` (as prefix or suffix) and
// tabulates the leftover sound against the word's meaning. Empty sounds
// are excluded, so a word equal to the residue contributes nothing. No
// matches is a valid empty partial function.
inline ResidueFunction decompose(const Lexicon& lex, std::string_view residue, ResidueSide side) {
    if (residue.empty()) throw EmptyInputError("residue must be nonempty");
    ResidueFunction rf;
    rf.residue = std::string(residue);
    rf.side = side;
    for (const auto& [word, meaning] : lex.entries) {
        if (word.size() <= residue.size()) continue;
        if (side == ResidueSide::prefix) {
            if (word.compare(0, residue.size(), residue) == 0) {
                rf.table[word.substr(residue.size())] = meaning;
            }
        } else {
            if (word.compare(word.size() - residue.size(), residue.size(), residue) == 0) {
                rf.table[word.substr(0, word.size() - residue.size())] = meaning;
            }
        }
    }
    return rf;
}

struct FocusAlternative {
    std::string word;
    std::string meaning;

    bool operator==(const FocusAlternative&) const = default;
};

// The focus alternative set of `word` with the span [span_begin,
// span_end) (in Unicode scalars) focused: every lexicon word of the form
// residue·α where the residue is the word minus the span. Always contains
// the input word. A whole-word span would make the residue empty; by
// default that degenerates to the singleton rather than the whole lexicon.
inline std::vector<FocusAlternative> focus_alternatives(const Lexicon& lex,
                                                        const std::string& word,
                                                        std::size_t span_begin,
                                                        std::size_t span_end,
                                                        bool allow_empty_residue = false) {
    auto word_it = lex.entries.find(word);
    if (word_it == lex.entries.end()) throw LookupError("word not in lexicon: '" + word + "'");
    const std::vector<std::string> scalars = utf8::split_scalars(word);
    if (span_begin >= span_end || span_end > scalars.size()) {
        throw DomainError("focus span out of range");
    }
    std::string prefix, suffix;
    for (std::size_t i = 0; i < span_begin; ++i) prefix += scalars[i];
    for (std::size_t i = span_end; i < scalars.size(); ++i) suffix += scalars[i];

    if (prefix.empty() && suffix.empty() && !allow_empty_residue) {
        return {{word, word_it->second}};
    }
    std::vector<FocusAlternative> out;
    for (const auto& [cand, meaning] : lex.entries) {
        if (cand.size() <= prefix.size() + suffix.size()) continue;
        if (cand.compare(0, prefix.size(), prefix) != 0) continue;
        if (cand.compare(cand.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
        out.push_back({cand, meaning});
    }
    return out;
}

struct CoordExpansion {
    std::string part;
    std::string word;
    std::optional<std::string> meaning; // empty when the expansion is not in the lexicon

    bool resolved() const { return meaning.has_value(); }
};

// Expands coordinated word parts against the shared remainder, e.g.
// parts [ortho, perio] with shared suffix 'dontists'. Every part yields
// one expansion, in order; out-of-lexicon expansions are flagged by an
// absent meaning rather than an error.
inline std::vector<CoordExpansion> coordinate_expand(const std::vector<std::string>& parts,
                                                     std::string_view shared, ResidueSide side,
                                                     const Lexicon& lex) {
    if (parts.empty()) throw EmptyInputError("no coordinated parts");
    if (shared.empty()) throw EmptyInputError("shared word part must be nonempty");
    // The shared part is the residue; each coordinated part is a sound
    // the residue's partial function may be applied to.
    const ResidueFunction rf = decompose(lex, shared, side);
    std::vector<CoordExpansion> out;
    out.reserve(parts.size());
    for (const auto& part : parts) {
        if (part.empty()) throw EmptyInputError("empty coordinated part");
        CoordExpansion exp;
        exp.part = part;
        exp.word = side == ResidueSide::suffix ? part + std::string(shared)
                                               : std::string(shared) + part;
        exp.meaning = rf.apply(part);
        out.push_back(std::move(exp));
    }
    return out;
}

// Heuristic stand-in for the metrical-foot constraint on focusable or
// coordinatable material: a segment passes when it has at least
// `min_syllables` vowel clusters (maximal runs of a, e, i, o, u, y).
// This is an approximation, not a prosodic analysis; callers opt in.
inline bool prosodic_gate(std::string_view segment, int min_syllables = 2) {
    if (segment.empty()) throw EmptyInputError("empty segment");
    const auto is_vowel = [](utf8::Codepoint cp) {
        const utf8::Codepoint c = utf8::to_lower(cp);
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    int clusters = 0;
    bool in_cluster = false;
    for (utf8::Codepoint cp : utf8::decode(segment)) {
        if (is_vowel(cp)) {
            if (!in_cluster) ++clusters;
            in_cluster = true;
        } else {
            in_cluster = false;
        }
    }
    return clusters >= min_syllables;
}

// Lexicon file format: `word<TAB>meaning-id[<TAB>syllables]` per line.
inline Lexicon load_lexicon(std::istream& in) {
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            utf8::validate(line);
        } catch (const DecodeError& e) {
            throw ParseError(std::string("bad encoding: ") + e.what(), lineno);
        }
        const auto tab1 = line.find('\t');
        if (tab1 == std::string::npos || tab1 == 0) throw ParseError("expected word<TAB>meaning", lineno);
        const std::string word = line.substr(0, tab1);
        std::string meaning = line.substr(tab1 + 1);
        const auto tab2 = meaning.find('\t');
        std::optional<int> syllables;
        if (tab2 != std::string::npos) {
            const std::string syl = meaning.substr(tab2 + 1);
            meaning = meaning.substr(0, tab2);
            try {
                std::size_t used = 0;
                const int v = std::stoi(syl, &used);
                if (used != syl.size() || v < 0) throw std::invalid_argument("bad");
                syllables = v;
            } catch (const std::exception&) {
                throw ParseError("bad syllable count '" + syl + "'", lineno);
            }
        }
        if (meaning.empty()) throw ParseError("empty meaning", lineno);
        if (lex.entries.count(word)) throw ParseError("duplicate word '" + word + "'", lineno);
        lex.entries[word] = meaning;
        if (syllables) lex.syllables[word] = *syllables;
    }
    return lex;
}

// Meaning-function files share the lexicon layout (strings may contain
// spaces; fields are tab-separated).
inline MeaningFunction load_meaning_function(std::istream& in) {
    const Lexicon lex = load_lexicon(in);
    MeaningFunction m;
    m.entries = lex.entries;
    return m;
}

} // namespace segmenta
