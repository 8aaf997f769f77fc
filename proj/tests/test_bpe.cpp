#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <sstream>

#include "segmenta/bpe.hpp"

using namespace segmenta;

namespace {

Corpus toy_corpus() {
    return make_corpus({{"low", 5}, {"lowest", 2}, {"newer", 6}, {"wider", 3}, {"new", 2}});
}

constexpr const char* kMarker = "\xc2\xb7"; // '·'

std::vector<MergePair> toy_merges() {
    return {
        {"e", "r"},   {"er", kMarker}, {"n", "e"},          {"ne", "w"},
        {"l", "o"},   {"lo", "w"},     {"new", "er\xc2\xb7"}, {"low", kMarker},
    };
}

std::set<std::string> toy_vocabulary() {
    return {kMarker, "d",  "e",  "i",   "l",   "n",       "o",         "r",       "s", "t",
            "w",     "er", "er\xc2\xb7", "ne", "new", "lo", "low", "newer\xc2\xb7", "low\xc2\xb7"};
}

Corpus random_corpus(std::mt19937& rng) {
    static const std::string alphabet = "abcdef";
    std::map<std::string, std::uint64_t> counts;
    const auto types = 1 + rng() % 8;
    for (std::size_t i = 0; i < types; ++i) {
        std::string word;
        const auto len = 1 + rng() % 7;
        for (std::size_t j = 0; j < len; ++j) word += alphabet[rng() % alphabet.size()];
        counts[word] += 1 + rng() % 5;
    }
    return make_corpus(counts);
}

} // namespace

TEST_CASE("training the toy corpus reproduces the reference merge sequence") {
    const TrainResult result = train_bpe(toy_corpus(), TrainBudget::merges(8));
    CHECK(result.table.merges == toy_merges());
    CHECK(result.table.vocab == toy_vocabulary());
    CHECK(result.table.vocab.size() == 19);
    CHECK(result.table.seed_alphabet ==
          std::set<std::string>{kMarker, "d", "e", "i", "l", "n", "o", "r", "s", "t", "w"});
    REQUIRE(result.trace.steps.size() == 8);
    // Weighted pair counts at each merge, recomputed by hand from the corpus.
    const std::vector<std::uint64_t> frequencies{9, 9, 8, 8, 7, 7, 6, 5};
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(result.trace.steps[i].pair == toy_merges()[i]);
        CHECK(result.trace.steps[i].frequency == frequencies[i]);
    }
}

TEST_CASE("zero merges leave the seed alphabet") {
    const TrainResult result = train_bpe(toy_corpus(), TrainBudget::merges(0));
    CHECK(result.table.merges.empty());
    CHECK(result.table.vocab ==
          std::set<std::string>{kMarker, "d", "e", "i", "l", "n", "o", "r", "s", "t", "w"});
    CHECK(result.table.vocab.size() == 11);
}

TEST_CASE("training halts when no pair remains") {
    const TrainResult result = train_bpe(make_corpus({{"ab", 1}}), TrainBudget::merges(10));
    CHECK(result.table.merges ==
          std::vector<MergePair>{{"a", "b"}, {"ab", kMarker}});
}

TEST_CASE("a vocabulary-size budget converts to a merge count") {
    const TrainResult by_vocab = train_bpe(toy_corpus(), TrainBudget::vocab(19));
    const TrainResult by_merges = train_bpe(toy_corpus(), TrainBudget::merges(8));
    CHECK(by_vocab.table == by_merges.table);
    // A target at or below the seed size trains nothing.
    CHECK(train_bpe(toy_corpus(), TrainBudget::vocab(11)).table.merges.empty());
    CHECK(train_bpe(toy_corpus(), TrainBudget::vocab(3)).table.merges.empty());
}

TEST_CASE("apply segments the out-of-vocabulary word 'lower'") {
    const MergeTable table = train_bpe(toy_corpus(), TrainBudget::merges(8)).table;
    CHECK(apply_bpe(table, "lower").segments ==
          std::vector<std::string>{"low", "er\xc2\xb7"});
}

TEST_CASE("apply falls back to characters for 'worst'") {
    const MergeTable table = train_bpe(toy_corpus(), TrainBudget::merges(8)).table;
    CHECK(apply_bpe(table, "worst").segments ==
          std::vector<std::string>{"w", "o", "r", "s", "t", kMarker});
}

TEST_CASE("apply splits 'deer' partially") {
    const MergeTable table = train_bpe(toy_corpus(), TrainBudget::merges(8)).table;
    CHECK(apply_bpe(table, "deer").segments ==
          std::vector<std::string>{"d", "e", "er\xc2\xb7"});
}

TEST_CASE("apply reassembles a fully known word") {
    const MergeTable table = train_bpe(toy_corpus(), TrainBudget::merges(8)).table;
    CHECK(apply_bpe(table, "newer").segments == std::vector<std::string>{"newer\xc2\xb7"});
}

TEST_CASE("unknown characters pass through as singleton segments") {
    const MergeTable table = train_bpe(toy_corpus(), TrainBudget::merges(8)).table;
    CHECK(apply_bpe(table, "xyz").segments ==
          std::vector<std::string>{"x", "y", "z", kMarker});
}

TEST_CASE("replay is leftmost-first") {
    MergeTable table;
    table.seed_alphabet = {"a"};
    table.vocab = {"a", "aa"};
    table.merges = {{"a", "a"}};
    table.marker = MarkerPolicy::disabled();
    CHECK(apply_bpe(table, "aaa").segments == std::vector<std::string>{"aa", "a"});
    CHECK(apply_bpe(table, "aaaa").segments == std::vector<std::string>{"aa", "aa"});
}

TEST_CASE("the marker symbol must stay out of corpus words") {
    CHECK_THROWS_AS(train_bpe(make_corpus({{"a\xc2\xb7""b", 1}}), TrainBudget::merges(1)),
                    TrainError);
}

TEST_CASE("training rejects an empty corpus") {
    CHECK_THROWS_AS(train_bpe(Corpus{}, TrainBudget::merges(1)), EmptyInputError);
}

TEST_CASE("merge tables round-trip through their file format") {
    const MergeTable table = train_bpe(toy_corpus(), TrainBudget::merges(8)).table;
    std::stringstream buf;
    save_merge_table(table, buf);
    const MergeTable back = load_merge_table(buf);
    CHECK(back == table);
}

TEST_CASE("a merge used before its definition is an integrity error") {
    std::istringstream in(
        "#segmenta-bpe v1 marker=\xc2\xb7 position=end\n"
        "#alphabet x y z\n"
        "xy z\n"
        "x y\n");
    CHECK_THROWS_AS(load_merge_table(in), IntegrityError);
}

TEST_CASE("a duplicate merge product is an integrity error") {
    std::istringstream in(
        "#segmenta-bpe v1 marker=\xc2\xb7 position=end\n"
        "#alphabet x y xy\n"
        "x y\n");
    CHECK_THROWS_AS(load_merge_table(in), IntegrityError);
}

TEST_CASE("an empty merge section is a valid table") {
    std::istringstream in(
        "#segmenta-bpe v1 marker=\xc2\xb7 position=end\n"
        "#alphabet a b\n");
    const MergeTable table = load_merge_table(in);
    CHECK(table.merges.empty());
    CHECK(table.vocab == std::set<std::string>{"a", "b"});
    CHECK(table.marker == MarkerPolicy::end_of_word());
}

TEST_CASE("merge-table parse errors carry context") {
    std::istringstream bad_header("#not-a-table\n");
    CHECK_THROWS_AS(load_merge_table(bad_header), ParseError);
    std::istringstream bad_merge(
        "#segmenta-bpe v1 marker=\xc2\xb7 position=end\n"
        "#alphabet a b\n"
        "a b c\n");
    CHECK_THROWS_AS(load_merge_table(bad_merge), ParseError);
}

TEST_CASE("training is deterministic") {
    std::string first;
    for (int run = 0; run < 10; ++run) {
        const TrainResult result = train_bpe(toy_corpus(), TrainBudget::merges(8));
        const std::string serialized = merge_table_to_string(result.table);
        if (run == 0) {
            first = serialized;
        } else {
            CHECK(serialized == first);
        }
    }
}

TEST_CASE("training random corpora is deterministic") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 25; ++trial) {
        const Corpus c = random_corpus(rng);
        const auto budget = TrainBudget::merges(rng() % 12);
        const std::string a = merge_table_to_string(train_bpe(c, budget).table);
        const std::string b = merge_table_to_string(train_bpe(c, budget).table);
        CHECK(a == b);
    }
}

TEST_CASE("closure: training words reassemble and stay inside the vocabulary") {
    std::mt19937 rng(808);
    for (int trial = 0; trial < 25; ++trial) {
        const Corpus c = random_corpus(rng);
        const MergeTable table = train_bpe(c, TrainBudget::merges(rng() % 15)).table;
        for (const auto& wc : c.word_types) {
            const Segmentation seg = apply_bpe(table, wc.word);
            CHECK(join(seg) == wc.word);
            for (const auto& s : seg.segments) {
                CHECK(table.vocab.count(s) == 1);
            }
        }
    }
}

TEST_CASE("earlier merge prefixes refine the full segmentation") {
    std::mt19937 rng(1717);
    const auto cuts = [](const Segmentation& seg) {
        std::set<std::size_t> out;
        std::size_t offset = 0;
        for (std::size_t i = 0; i + 1 < seg.segments.size(); ++i) {
            offset += utf8::scalar_count(seg.segments[i]);
            out.insert(offset);
        }
        return out;
    };
    for (int trial = 0; trial < 20; ++trial) {
        const Corpus c = random_corpus(rng);
        const MergeTable table = train_bpe(c, TrainBudget::merges(10)).table;
        for (const auto& wc : c.word_types) {
            const std::set<std::size_t> full = cuts(apply_bpe(table, wc.word));
            for (std::size_t k = 0; k <= table.merges.size(); ++k) {
                const std::set<std::size_t> partial = cuts(apply_bpe(table, wc.word, k));
                // Every cut the full table keeps must already exist after k merges.
                for (std::size_t cut : full) {
                    CHECK(partial.count(cut) == 1);
                }
            }
        }
    }
}

TEST_CASE("vocabulary arithmetic holds on random corpora") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const Corpus c = random_corpus(rng);
        const MergeTable table = train_bpe(c, TrainBudget::merges(rng() % 20)).table;
        CHECK(table.vocab.size() == table.seed_alphabet.size() + table.merges.size());
    }
}

TEST_CASE("training without a marker works") {
    const TrainResult result =
        train_bpe(make_corpus({{"abab", 2}}), TrainBudget::merges(2), MarkerPolicy::disabled());
    CHECK(result.table.merges == std::vector<MergePair>{{"a", "b"}, {"ab", "ab"}});
    CHECK(apply_bpe(result.table, "abab").segments == std::vector<std::string>{"abab"});
}
