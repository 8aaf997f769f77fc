#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "segmenta/corpus.hpp"
#include "segmenta/error.hpp"

namespace segmenta {

// Embedding-matrix size bookkeeping: one column per vocabulary item.
struct VocabBudget {
    std::uint64_t vocab_size = 0;
    std::uint64_t embedding_dim = 0;
    std::uint64_t param_count = 0;
    bool exceeds_paper_bound = false;

    static constexpr std::uint64_t bound = 10'000'000ull;
};

inline VocabBudget embedding_param_count(std::int64_t vocab_size, std::int64_t embedding_dim) {
    if (vocab_size <= 0 || embedding_dim <= 0) {
        throw DomainError("vocab size and embedding dim must be positive");
    }
    VocabBudget b;
    b.vocab_size = static_cast<std::uint64_t>(vocab_size);
    b.embedding_dim = static_cast<std::uint64_t>(embedding_dim);
    if (b.vocab_size > UINT64_MAX / b.embedding_dim) {
        throw DomainError("parameter count overflows 64 bits");
    }
    b.param_count = b.vocab_size * b.embedding_dim;
    b.exceeds_paper_bound = b.param_count > VocabBudget::bound;
    return b;
}

struct OovRate {
    double type_rate = 0.0;
    double token_rate = 0.0;
};

// Fraction of evaluation word types (and tokens, weighting by count)
// absent from `vocab`.
inline OovRate oov_rate(const std::set<std::string>& vocab, const Corpus& eval) {
    if (vocab.empty()) throw DomainError("vocabulary must be nonempty");
    if (eval.empty()) throw EmptyInputError("empty evaluation corpus");
    std::uint64_t oov_types = 0, oov_tokens = 0, total_tokens = 0;
    for (const auto& wc : eval.word_types) {
        total_tokens += wc.count;
        if (!vocab.count(wc.word)) {
            ++oov_types;
            oov_tokens += wc.count;
        }
    }
    OovRate r;
    r.type_rate = static_cast<double>(oov_types) / static_cast<double>(eval.word_types.size());
    r.token_rate = static_cast<double>(oov_tokens) / static_cast<double>(total_tokens);
    return r;
}

// Add-k n-gram model over token sequences, with begin/end delimiters
// attached to every sequence. k = 0 disables smoothing, in which case
// scoring an unseen event raises OovError.
struct NGramLM {
    std::size_t order = 3;
    double add_k = 1.0;
    std::string unit = "words"; // tokenizer tag, carried for file round-trips
    std::set<std::string> vocab; // includes the delimiters
    std::map<std::vector<std::string>, std::map<std::string, std::uint64_t>> contexts;

    static constexpr const char* begin_token = "<s>";
    static constexpr const char* end_token = "</s>";

    std::uint64_t context_total(const std::vector<std::string>& ctx) const {
        auto it = contexts.find(ctx);
        if (it == contexts.end()) return 0;
        std::uint64_t total = 0;
        for (const auto& [tok, c] : it->second) total += c;
        return total;
    }
};

namespace detail {

// The (n-1)-token window ending just before position i, padded with the
// begin delimiter.
inline std::vector<std::string> ngram_context(const std::vector<std::string>& tokens,
                                              std::size_t i, std::size_t order) {
    std::vector<std::string> ctx;
    if (order == 1) return ctx;
    ctx.reserve(order - 1);
    for (std::size_t back = order - 1; back > 0; --back) {
        if (i >= back) {
            ctx.push_back(tokens[i - back]);
        } else {
            ctx.push_back(NGramLM::begin_token);
        }
    }
    return ctx;
}

} // namespace detail

inline NGramLM train_ngram(const std::vector<std::vector<std::string>>& sequences,
                           std::size_t n, double k) {
    if (n < 1) throw DomainError("n-gram order must be >= 1");
    if (k < 0 || !std::isfinite(k)) throw DomainError("add-k must be finite and >= 0");
    bool any = false;
    for (const auto& seq : sequences) {
        if (!seq.empty()) any = true;
    }
    if (!any) throw EmptyInputError("need at least one nonempty training sequence");

    NGramLM lm;
    lm.order = n;
    lm.add_k = k;
    lm.vocab.insert(NGramLM::begin_token);
    lm.vocab.insert(NGramLM::end_token);
    for (const auto& seq : sequences) {
        for (const auto& tok : seq) {
            if (tok.empty()) throw DomainError("empty token in training sequence");
            if (tok == NGramLM::begin_token || tok == NGramLM::end_token) {
                throw DomainError("token collides with sequence delimiter: '" + tok + "'");
            }
            lm.vocab.insert(tok);
        }
        for (std::size_t i = 0; i <= seq.size(); ++i) {
            const std::string& tok = i < seq.size() ? seq[i] : NGramLM::end_token;
            lm.contexts[detail::ngram_context(seq, i, n)][tok] += 1;
        }
    }
    return lm;
}

// p(token | context). The context is truncated to the last n-1 tokens and
// padded in front with the begin delimiter if shorter.
inline double token_probability(const NGramLM& lm, std::vector<std::string> context,
                                const std::string& token) {
    if (lm.order >= 1) {
        while (context.size() > lm.order - 1) context.erase(context.begin());
        while (context.size() < lm.order - 1) {
            context.insert(context.begin(), NGramLM::begin_token);
        }
    }
    std::uint64_t count = 0;
    std::uint64_t total = 0;
    if (auto it = lm.contexts.find(context); it != lm.contexts.end()) {
        for (const auto& [tok, c] : it->second) total += c;
        if (auto jt = it->second.find(token); jt != it->second.end()) count = jt->second;
    }
    if (lm.add_k == 0.0) {
        if (count == 0) {
            throw OovError("zero-probability event: token '" + token +
                           "' unseen in context (smoothing disabled)");
        }
        return static_cast<double>(count) / static_cast<double>(total);
    }
    const double v = static_cast<double>(lm.vocab.size());
    return (static_cast<double>(count) + lm.add_k) /
           (static_cast<double>(total) + lm.add_k * v);
}

// Chain-rule log probability of the sequence with begin/end delimiters
// attached: sum over i of log p(t_i | previous n-1 tokens), including the
// final end-delimiter term. Always <= 0.
inline double sequence_log_prob(const NGramLM& lm, const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw EmptyInputError("cannot score an empty sequence");
    double log_prob = 0.0;
    for (std::size_t i = 0; i <= tokens.size(); ++i) {
        const std::string& tok = i < tokens.size() ? tokens[i] : NGramLM::end_token;
        log_prob += std::log(token_probability(lm, detail::ngram_context(tokens, i, lm.order), tok));
    }
    return log_prob;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

// Model file format:
//   #segmenta-lm v1 n=3 k=1 unit=chars
//   <s> <s><TAB>l<TAB>5
// One `context<TAB>token<TAB>count` per line; context tokens are joined
// with single spaces (empty for order-1 models).
inline void save_ngram(const NGramLM& lm, std::ostream& out) {
    out << "#segmenta-lm v1 n=" << lm.order << " k=" << detail::format_double(lm.add_k)
        << " unit=" << lm.unit << '\n';
    for (const auto& [ctx, dist] : lm.contexts) {
        std::string ctx_str;
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            if (i) ctx_str += ' ';
            ctx_str += ctx[i];
        }
        for (const auto& [tok, count] : dist) {
            out << ctx_str << '\t' << tok << '\t' << count << '\n';
        }
    }
}

inline NGramLM load_ngram(std::istream& in) {
    NGramLM lm;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::istringstream header(line);
        std::string magic, version, field;
        header >> magic >> version;
        if (magic != "#segmenta-lm") throw ParseError("not a language-model file", lineno);
        if (version != "v1") throw ParseError("unsupported version '" + version + "'", lineno);
        bool have_n = false, have_k = false;
        while (header >> field) {
            if (field.rfind("n=", 0) == 0) {
                lm.order = std::stoul(field.substr(2));
                have_n = true;
            } else if (field.rfind("k=", 0) == 0) {
                lm.add_k = std::stod(field.substr(2));
                have_k = true;
            } else if (field.rfind("unit=", 0) == 0) {
                lm.unit = field.substr(5);
            } else {
                throw ParseError("unknown header field '" + field + "'", lineno);
            }
        }
        if (!have_n || !have_k) throw ParseError("header must carry n= and k=", lineno);
        if (lm.order < 1) throw ParseError("n must be >= 1", lineno);
        if (lm.add_k < 0) throw ParseError("k must be >= 0", lineno);
    }
    lm.vocab.insert(NGramLM::begin_token);
    lm.vocab.insert(NGramLM::end_token);
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        if (tab1 == std::string::npos) throw ParseError("expected context<TAB>token<TAB>count", lineno);
        const auto tab2 = line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) throw ParseError("expected context<TAB>token<TAB>count", lineno);
        const std::string ctx_str = line.substr(0, tab1);
        const std::string token = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string count_str = line.substr(tab2 + 1);
        if (token.empty()) throw ParseError("empty token", lineno);
        std::vector<std::string> ctx;
        std::size_t start = 0;
        while (start < ctx_str.size()) {
            std::size_t end = ctx_str.find(' ', start);
            if (end == std::string::npos) end = ctx_str.size();
            if (end > start) ctx.push_back(ctx_str.substr(start, end - start));
            start = end + 1;
        }
        if (ctx.size() != lm.order - 1) {
            throw ParseError("context length does not match order", lineno);
        }
        std::uint64_t count = 0;
        try {
            std::size_t used = 0;
            count = std::stoull(count_str, &used);
            if (used != count_str.size() || count == 0) throw std::invalid_argument("bad");
        } catch (const std::exception&) {
            throw ParseError("bad count '" + count_str + "'", lineno);
        }
        for (const auto& t : ctx) {
            if (t != NGramLM::begin_token) lm.vocab.insert(t);
        }
        if (token != NGramLM::end_token) lm.vocab.insert(token);
        auto& dist = lm.contexts[ctx];
        if (dist.count(token)) throw ParseError("duplicate entry", lineno);
        dist[token] = count;
    }
    return lm;
}

} // namespace segmenta
