#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "segmenta/align.hpp"
#include "segmenta/bpe.hpp"
#include "segmenta/corpus.hpp"
#include "segmenta/error.hpp"
#include "segmenta/lmstats.hpp"
#include "segmenta/segmentation.hpp"
#include "segmenta/semlab.hpp"

namespace segmenta::cli {

namespace detail {

inline std::string fmt(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

inline std::string fmt_hash(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file(const std::string& path, std::istream& stdin_stream) {
    if (path == "-") {
        std::ostringstream buf;
        buf << stdin_stream.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_output(const std::string& path, const std::string& data,
                         std::ostream& stdout_stream) {
    if (path.empty() || path == "-") {
        stdout_stream << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << data;
}

inline Corpus load_corpus_arg(const std::string& path, bool tsv, const NormConfig& cfg,
                              std::istream& stdin_stream) {
    const std::string text = read_file(path, stdin_stream);
    if (tsv) {
        std::istringstream in(text);
        return load_corpus_tsv(in, path);
    }
    return load_corpus(text, cfg, path);
}

inline std::string join_tokens(const std::vector<std::string>& tokens, char sep = ' ') {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += sep;
        out += tokens[i];
    }
    return out;
}

inline std::vector<std::string> whitespace_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

inline MergeTable load_table_file(const std::string& path, std::istream& stdin_stream) {
    std::istringstream in(read_file(path, stdin_stream));
    return load_merge_table(in);
}

// Tokenizes raw corpus text into LM training sequences. `words` treats
// each line as one sequence; `chars` and `bpe` treat each whitespace
// token as one sequence of scalars or merge-table segments.
inline std::vector<std::vector<std::string>> lm_sequences(const std::string& text,
                                                          const std::string& unit,
                                                          const MergeTable* table) {
    std::vector<std::vector<std::string>> sequences;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const std::vector<std::string> tokens = whitespace_tokens(line);
        if (tokens.empty()) continue;
        if (unit == "words") {
            sequences.push_back(tokens);
            continue;
        }
        for (const auto& word : tokens) {
            if (unit == "chars") {
                sequences.push_back(utf8::split_scalars(word));
            } else {
                sequences.push_back(apply_bpe(*table, word).segments);
            }
        }
    }
    return sequences;
}

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

} // namespace detail

// Runs one command-line invocation. `args` excludes the program name.
// Exit codes: 0 success, 1 domain/input errors, 2 usage errors.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
    detail::Streams io{in, out, err};

    CLI::App app{"segmenta - a subword segmentation laboratory"};
    app.require_subcommand(1);

    // --- corpus ---------------------------------------------------------
    auto* corpus_cmd = app.add_subcommand("corpus", "Corpus statistics");
    auto* corpus_stats = corpus_cmd->add_subcommand("stats", "Type/token counts and Zipf head-mass table");
    struct {
        std::string file;
        bool lowercase = false;
        bool strip_punct = false;
        bool tsv = false;
    } corpus_opts;
    corpus_stats->add_option("file", corpus_opts.file, "Text file, or - for stdin")->required();
    corpus_stats->add_flag("--lowercase", corpus_opts.lowercase, "Lowercase tokens");
    corpus_stats->add_flag("--strip-punct", corpus_opts.strip_punct, "Drop ASCII punctuation");
    corpus_stats->add_flag("--tsv", corpus_opts.tsv, "Input is a word<TAB>count table");
    corpus_stats->callback([&] {
        const NormConfig cfg{corpus_opts.lowercase, corpus_opts.strip_punct};
        const Corpus c = detail::load_corpus_arg(corpus_opts.file, corpus_opts.tsv, cfg, io.in);
        io.out << "types\t" << c.word_types.size() << '\n';
        io.out << "tokens\t" << c.total_tokens() << '\n';
        if (c.empty()) return;
        const ZipfStats stats = zipf_profile(c);
        io.out << "rank\tword\tcount\thead_mass\n";
        for (const auto& e : stats.rank_frequency) {
            io.out << e.rank << '\t' << e.word << '\t' << e.count << '\t'
                   << detail::fmt(stats.head_mass(e.rank)) << '\n';
        }
    });

    // --- segment --------------------------------------------------------
    auto* segment_cmd = app.add_subcommand("segment", "Character or byte segmentation");
    struct {
        std::string mode;
        std::string marker;
        std::vector<std::string> words;
    } segment_opts;
    segment_cmd->add_option("--mode", segment_opts.mode, "chars or bytes")
        ->required()
        ->check(CLI::IsMember({"chars", "bytes"}));
    segment_cmd->add_option("--marker", segment_opts.marker,
                            "End-of-word marker symbol (chars mode only)");
    segment_cmd->add_option("words", segment_opts.words, "Words to segment")->required();
    segment_cmd->callback([&] {
        for (const auto& word : segment_opts.words) {
            utf8::validate(word);
            Segmentation seg;
            if (segment_opts.mode == "chars") {
                const MarkerPolicy marker = segment_opts.marker.empty()
                                                ? MarkerPolicy::disabled()
                                                : MarkerPolicy::end_of_word(segment_opts.marker);
                seg = segment_chars(word, marker);
            } else {
                seg = segment_bytes(word);
            }
            io.out << word << '\t' << detail::join_tokens(seg.segments) << '\n';
        }
    });

    // --- compare --------------------------------------------------------
    auto* compare_cmd = app.add_subcommand("compare", "Boundary precision/recall against a reference");
    struct {
        std::string candidate;
        std::string reference;
    } compare_opts;
    compare_cmd->add_option("candidate", compare_opts.candidate, "Candidate segmentation file")->required();
    compare_cmd->add_option("reference", compare_opts.reference, "Reference segmentation file")->required();
    compare_cmd->callback([&] {
        std::istringstream cand_in(detail::read_file(compare_opts.candidate, io.in));
        std::istringstream ref_in(detail::read_file(compare_opts.reference, io.in));
        const std::vector<Segmentation> cand = load_segmentation_file(cand_in);
        const std::vector<Segmentation> ref = load_segmentation_file(ref_in);
        if (cand.empty() || ref.empty()) throw EmptyInputError("no segmentations to compare");
        if (cand.size() != ref.size()) {
            throw ComparisonError("files differ in length: " + std::to_string(cand.size()) +
                                  " vs " + std::to_string(ref.size()) + " entries");
        }
        io.out << "word\tprecision\trecall\tf1\n";
        double p = 0, r = 0, f = 0;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            const BoundaryScore score = compare_segmentations(cand[i], ref[i]);
            io.out << cand[i].word << '\t' << detail::fmt(score.precision) << '\t'
                   << detail::fmt(score.recall) << '\t' << detail::fmt(score.f1) << '\n';
            p += score.precision;
            r += score.recall;
            f += score.f1;
        }
        const auto n = static_cast<double>(cand.size());
        io.out << "mean\t" << detail::fmt(p / n) << '\t' << detail::fmt(r / n) << '\t'
               << detail::fmt(f / n) << '\n';
    });

    // --- bpe ------------------------------------------------------------
    auto* bpe_cmd = app.add_subcommand("bpe", "Byte-pair-encoding training and application");

    auto* bpe_train = bpe_cmd->add_subcommand("train", "Learn a merge table from a corpus");
    struct {
        std::string corpus;
        std::size_t merges = 0;
        std::size_t vocab_size = 0;
        std::string marker = "\xc2\xb7";
        bool no_marker = false;
        bool tsv = false;
        std::string output;
    } train_opts;
    bpe_train->add_option("corpus", train_opts.corpus, "Corpus file, or - for stdin")->required();
    auto* merges_opt = bpe_train->add_option("--merges", train_opts.merges, "Number of merges to learn");
    auto* vocab_opt =
        bpe_train->add_option("--vocab-size", train_opts.vocab_size, "Target vocabulary size");
    merges_opt->excludes(vocab_opt);
    vocab_opt->excludes(merges_opt);
    bpe_train->add_option("--marker", train_opts.marker, "End-of-word marker symbol");
    bpe_train->add_flag("--no-marker", train_opts.no_marker, "Train without an end-of-word marker");
    bpe_train->add_flag("--tsv", train_opts.tsv, "Corpus is a word<TAB>count table");
    bpe_train->add_option("-o,--output", train_opts.output, "Write the table here instead of stdout");
    bpe_train->callback([&] {
        if (merges_opt->count() == 0 && vocab_opt->count() == 0) {
            throw CLI::RequiredError("--merges or --vocab-size");
        }
        const Corpus c = detail::load_corpus_arg(train_opts.corpus, train_opts.tsv, {}, io.in);
        const MarkerPolicy marker = train_opts.no_marker
                                        ? MarkerPolicy::disabled()
                                        : MarkerPolicy::end_of_word(train_opts.marker);
        const TrainBudget budget = merges_opt->count() ? TrainBudget::merges(train_opts.merges)
                                                       : TrainBudget::vocab(train_opts.vocab_size);
        const TrainResult result = train_bpe(c, budget, marker);
        for (std::size_t i = 0; i < result.trace.steps.size(); ++i) {
            const TrainStep& step = result.trace.steps[i];
            io.err << "step " << i + 1 << "\t(" << step.pair.left << ", " << step.pair.right
                   << ") -> " << step.pair.merged() << "\t" << step.frequency << '\t'
                   << detail::fmt_hash(step.state_hash) << '\n';
        }
        detail::write_output(train_opts.output, merge_table_to_string(result.table), io.out);
    });

    auto* bpe_apply = bpe_cmd->add_subcommand("apply", "Segment words with a trained table");
    struct {
        std::string table;
        std::vector<std::string> words;
    } apply_opts;
    bpe_apply->add_option("table", apply_opts.table, "Merge-table file")->required();
    bpe_apply->add_option("words", apply_opts.words, "Words to segment")->required();
    bpe_apply->callback([&] {
        const MergeTable table = detail::load_table_file(apply_opts.table, io.in);
        for (const auto& word : apply_opts.words) {
            utf8::validate(word);
            const Segmentation seg = apply_bpe(table, word);
            io.out << word << '\t' << detail::join_tokens(seg.segments) << '\t'
                   << format_pipes(seg) << '\n';
        }
    });

    auto* bpe_trace = bpe_cmd->add_subcommand("trace", "Print the learned merges in order");
    struct {
        std::string table;
    } trace_opts;
    bpe_trace->add_option("table", trace_opts.table, "Merge-table file")->required();
    bpe_trace->callback([&] {
        const MergeTable table = detail::load_table_file(trace_opts.table, io.in);
        for (const auto& m : table.merges) {
            io.out << '(' << m.left << ", " << m.right << ") -> " << m.merged() << '\n';
        }
    });

    // --- lm ---------------------------------------------------------------
    auto* lm_cmd = app.add_subcommand("lm", "N-gram language model over words, chars, or subwords");

    auto* lm_train = lm_cmd->add_subcommand("train", "Train an add-k n-gram model");
    struct {
        std::string corpus;
        std::size_t n = 3;
        double k = 1.0;
        std::string unit;
        std::string table;
        std::string output;
    } lm_train_opts;
    lm_train->add_option("corpus", lm_train_opts.corpus, "Raw text, one sequence per line")->required();
    lm_train->add_option("--n", lm_train_opts.n, "Model order")->capture_default_str();
    lm_train->add_option("--k", lm_train_opts.k, "Add-k smoothing constant (0 disables)")
        ->capture_default_str();
    lm_train->add_option("--unit", lm_train_opts.unit, "words, chars, bpe, or bpe:<table>")
        ->required();
    lm_train->add_option("--table", lm_train_opts.table, "Merge table (unit=bpe)");
    lm_train->add_option("-o,--output", lm_train_opts.output, "Write the model here instead of stdout");
    lm_train->callback([&] {
        std::string unit = lm_train_opts.unit;
        std::string table_path = lm_train_opts.table;
        if (unit.rfind("bpe:", 0) == 0) {
            table_path = unit.substr(4);
            unit = "bpe";
        }
        if (unit != "words" && unit != "chars" && unit != "bpe") {
            throw CLI::ValidationError("--unit", "expected words, chars, bpe, or bpe:<table>");
        }
        std::unique_ptr<MergeTable> table;
        if (unit == "bpe") {
            if (table_path.empty()) throw CLI::RequiredError("--table (with --unit bpe)");
            table = std::make_unique<MergeTable>(detail::load_table_file(table_path, io.in));
        }
        const std::string text = detail::read_file(lm_train_opts.corpus, io.in);
        utf8::validate(text);
        const auto sequences = detail::lm_sequences(text, unit, table.get());
        NGramLM lm = train_ngram(sequences, lm_train_opts.n, lm_train_opts.k);
        lm.unit = unit;
        std::ostringstream model;
        save_ngram(lm, model);
        detail::write_output(lm_train_opts.output, model.str(), io.out);
    });

    auto* lm_score = lm_cmd->add_subcommand("score", "Chain-rule log probability of text");
    struct {
        std::string model;
        std::string table;
        std::vector<std::string> text;
    } lm_score_opts;
    lm_score->add_option("model", lm_score_opts.model, "Model file")->required();
    lm_score->add_option("--table", lm_score_opts.table, "Merge table (unit=bpe models)");
    lm_score->add_option("text", lm_score_opts.text, "Text to score")->required();
    lm_score->callback([&] {
        std::istringstream model_in(detail::read_file(lm_score_opts.model, io.in));
        const NGramLM lm = load_ngram(model_in);
        std::unique_ptr<MergeTable> table;
        if (lm.unit == "bpe") {
            if (lm_score_opts.table.empty()) throw CLI::RequiredError("--table (unit=bpe model)");
            table = std::make_unique<MergeTable>(detail::load_table_file(lm_score_opts.table, io.in));
        }
        const std::string text = detail::join_tokens(lm_score_opts.text);
        utf8::validate(text);
        const auto sequences = detail::lm_sequences(text, lm.unit, table.get());
        if (sequences.empty()) throw EmptyInputError("nothing to score");
        double total = 0.0;
        for (const auto& seq : sequences) {
            const double lp = sequence_log_prob(lm, seq);
            io.out << "sequence\t" << detail::join_tokens(seq) << '\t' << detail::fmt(lp) << '\n';
            total += lp;
        }
        io.out << "total\t" << detail::fmt(total) << '\n';
    });

    // --- budget -----------------------------------------------------------
    auto* budget_cmd = app.add_subcommand("budget", "Embedding-matrix parameter count");
    struct {
        std::int64_t vocab = 0;
        std::int64_t dim = 0;
    } budget_opts;
    budget_cmd->add_option("vocab", budget_opts.vocab, "Vocabulary size")->required();
    budget_cmd->add_option("dim", budget_opts.dim, "Embedding dimensionality")->required();
    budget_cmd->callback([&] {
        const VocabBudget b = embedding_param_count(budget_opts.vocab, budget_opts.dim);
        io.out << "vocab_size\t" << b.vocab_size << '\n';
        io.out << "embedding_dim\t" << b.embedding_dim << '\n';
        io.out << "param_count\t" << b.param_count << '\n';
        io.out << "exceeds_paper_bound\t" << (b.exceeds_paper_bound ? "true" : "false") << '\n';
    });

    // --- oov --------------------------------------------------------------
    auto* oov_cmd = app.add_subcommand("oov", "Out-of-vocabulary rates of a corpus");
    struct {
        std::string vocab_file;
        std::string corpus;
        std::string segment_bpe;
        bool tsv = false;
    } oov_opts;
    oov_cmd->add_option("vocab", oov_opts.vocab_file, "Vocabulary file, one token per line")->required();
    oov_cmd->add_option("corpus", oov_opts.corpus, "Evaluation corpus")->required();
    oov_cmd->add_option("--segment-bpe", oov_opts.segment_bpe,
                        "Segment corpus words with this merge table and rate their segments");
    oov_cmd->add_flag("--tsv", oov_opts.tsv, "Corpus is a word<TAB>count table");
    oov_cmd->callback([&] {
        std::set<std::string> vocab;
        {
            std::istringstream vocab_in(detail::read_file(oov_opts.vocab_file, io.in));
            std::string vline;
            while (std::getline(vocab_in, vline)) {
                if (!vline.empty() && vline.back() == '\r') vline.pop_back();
                if (!vline.empty()) vocab.insert(vline);
            }
        }
        Corpus eval = detail::load_corpus_arg(oov_opts.corpus, oov_opts.tsv, {}, io.in);
        if (!oov_opts.segment_bpe.empty()) {
            const MergeTable table = detail::load_table_file(oov_opts.segment_bpe, io.in);
            std::map<std::string, std::uint64_t> segment_counts;
            for (const auto& wc : eval.word_types) {
                for (const auto& seg : apply_bpe(table, wc.word).segments) {
                    segment_counts[seg] += wc.count;
                }
            }
            eval = make_corpus(segment_counts, eval.source_id + "#bpe-segments");
        }
        const OovRate rate = oov_rate(vocab, eval);
        io.out << "type_rate\t" << detail::fmt(rate.type_rate) << '\n';
        io.out << "token_rate\t" << detail::fmt(rate.token_rate) << '\n';
    });

    // --- align --------------------------------------------------------------
    auto* align_cmd = app.add_subcommand("align", "Hard alignments from attention-weight matrices");

    auto* align_extract = align_cmd->add_subcommand("extract", "Row-argmax alignment links");
    struct {
        std::string matrix;
    } extract_opts;
    align_extract->add_option("matrix", extract_opts.matrix, "Attention matrix file")->required();
    align_extract->callback([&] {
        std::istringstream matrix_in(detail::read_file(extract_opts.matrix, io.in));
        const AttentionMatrix am = load_attention(matrix_in);
        const Alignment al = hard_align(am);
        for (const auto& link : al.links) {
            io.out << link.target_index << '\t' << link.source_index << '\t'
                   << am.target_segments.segments[link.target_index] << '\t'
                   << am.source_segments.segments[link.source_index] << '\n';
        }
    });

    auto* align_render = align_cmd->add_subcommand("render", "Draw the alignment diagram");
    struct {
        std::string matrix;
        std::string format = "text";
    } render_opts;
    align_render->add_option("matrix", render_opts.matrix, "Attention matrix file")->required();
    align_render->add_option("--format", render_opts.format, "text or svg")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "svg"}));
    align_render->callback([&] {
        std::istringstream matrix_in(detail::read_file(render_opts.matrix, io.in));
        const AttentionMatrix am = load_attention(matrix_in);
        const Alignment al = hard_align(am);
        io.out << render_alignment(am, al,
                                   render_opts.format == "svg" ? RenderFormat::svg
                                                               : RenderFormat::text);
    });

    // --- sem ----------------------------------------------------------------
    auto* sem_cmd = app.add_subcommand("sem", "Executable formal-semantics constructions");

    auto* sem_mu = sem_cmd->add_subcommand("mu-check",
                                           "Build the trivializing meaning function and verify it");
    struct {
        std::string meanings;
        std::string separator;
    } mu_opts;
    sem_mu->add_option("meanings", mu_opts.meanings, "string<TAB>meaning file")->required();
    sem_mu->add_option("--sep", mu_opts.separator,
                       "Separator inserted by concatenation (default: none)");
    sem_mu->callback([&] {
        std::istringstream meanings_in(detail::read_file(mu_opts.meanings, io.in));
        const MeaningFunction m = load_meaning_function(meanings_in);
        if (m.entries.empty()) throw EmptyInputError("no meanings");
        const MuFunction mu = build_mu(m, mu_opts.separator);
        const MuCheckReport report = mu_check(mu, m);
        io.out << "strings\t" << report.strings << '\n';
        io.out << "composition_checked\t" << report.composition_checked << '\n';
        io.out << "composition_violations\t" << report.composition_violations.size() << '\n';
        io.out << "recovery_checked\t" << report.recovery_checked << '\n';
        io.out << "recovery_violations\t" << report.recovery_violations.size() << '\n';
        io.out << "injective\t" << (report.injective ? "true" : "false") << '\n';
        for (const auto& v : report.composition_violations) io.out << "violation\tcomposition\t" << v << '\n';
        for (const auto& v : report.recovery_violations) io.out << "violation\trecovery\t" << v << '\n';
        for (const auto& v : report.injectivity_violations) io.out << "violation\tinjectivity\t" << v << '\n';
    });

    auto* sem_focus = sem_cmd->add_subcommand("focus", "Focus alternative set of a subword span");
    struct {
        std::string lexicon;
        std::string word;
        std::string span;
        bool allow_empty = false;
        int gate = 0;
    } focus_opts;
    sem_focus->add_option("lexicon", focus_opts.lexicon, "Lexicon file")->required();
    sem_focus->add_option("word", focus_opts.word, "Word carrying the focus")->required();
    sem_focus->add_option("span", focus_opts.span, "Focused span as start:end (scalar indices)")
        ->required();
    sem_focus->add_flag("--allow-empty-residue", focus_opts.allow_empty,
                        "Whole-word spans return the entire lexicon");
    sem_focus->add_option("--gate", focus_opts.gate,
                          "Reject spans with fewer vowel clusters than this");
    sem_focus->callback([&] {
        const auto colon = focus_opts.span.find(':');
        std::size_t begin = 0, end = 0;
        try {
            if (colon == std::string::npos) throw std::invalid_argument("no colon");
            std::size_t used = 0;
            begin = std::stoul(focus_opts.span.substr(0, colon), &used);
            end = std::stoul(focus_opts.span.substr(colon + 1), &used);
        } catch (const std::exception&) {
            throw CLI::ValidationError("span", "expected start:end");
        }
        std::istringstream lex_in(detail::read_file(focus_opts.lexicon, io.in));
        const Lexicon lex = load_lexicon(lex_in);
        if (focus_opts.gate > 0) {
            const std::vector<std::string> scalars = utf8::split_scalars(focus_opts.word);
            if (begin >= end || end > scalars.size()) throw DomainError("focus span out of range");
            std::string span_text;
            for (std::size_t i = begin; i < end; ++i) span_text += scalars[i];
            if (!prosodic_gate(span_text, focus_opts.gate)) {
                throw DomainError("focused span '" + span_text + "' fails the prosodic gate");
            }
        }
        const auto alternatives =
            focus_alternatives(lex, focus_opts.word, begin, end, focus_opts.allow_empty);
        for (const auto& alt : alternatives) {
            io.out << alt.word << '\t' << alt.meaning << '\n';
        }
    });

    auto* sem_coord = sem_cmd->add_subcommand("coord", "Expand coordinated word parts");
    struct {
        std::string lexicon;
        std::string shared;
        std::string side = "suffix";
        int gate = 0;
        std::vector<std::string> parts;
    } coord_opts;
    sem_coord->add_option("lexicon", coord_opts.lexicon, "Lexicon file")->required();
    sem_coord->add_option("--shared", coord_opts.shared, "Shared word part")->required();
    sem_coord->add_option("--side", coord_opts.side, "Side the shared part sits on")
        ->capture_default_str()
        ->check(CLI::IsMember({"prefix", "suffix"}));
    sem_coord->add_option("--gate", coord_opts.gate,
                          "Reject parts with fewer vowel clusters than this");
    sem_coord->add_option("parts", coord_opts.parts, "Coordinated parts")->required();
    sem_coord->callback([&] {
        std::istringstream lex_in(detail::read_file(coord_opts.lexicon, io.in));
        const Lexicon lex = load_lexicon(lex_in);
        const ResidueSide side =
            coord_opts.side == "prefix" ? ResidueSide::prefix : ResidueSide::suffix;
        std::vector<std::string> parts;
        std::vector<std::string> gated;
        for (const auto& part : coord_opts.parts) {
            if (coord_opts.gate > 0 && !prosodic_gate(part, coord_opts.gate)) {
                gated.push_back(part);
            } else {
                parts.push_back(part);
            }
        }
        if (!parts.empty()) {
            for (const auto& exp : coordinate_expand(parts, coord_opts.shared, side, lex)) {
                io.out << exp.part << '\t' << exp.word << '\t'
                       << (exp.resolved() ? "ok" : "unresolved") << '\t'
                       << (exp.resolved() ? *exp.meaning : "-") << '\n';
            }
        }
        for (const auto& part : gated) {
            io.out << part << "\t-\tgated\t-\n";
        }
    });

    // ------------------------------------------------------------------------
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace segmenta::cli
