#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "segmenta/semlab.hpp"

using namespace segmenta;

namespace {

// The worked five-string lexicon: two verb phrases obtainable by
// concatenating 'chases' with an object, with a space separator.
MeaningFunction chases_lexicon() {
    MeaningFunction m;
    m.entries = {
        {"chases", "CHASE"},
        {"mice", "MICE"},
        {"rainbows", "RAINBOWS"},
        {"chases mice", "CHASE-MICE"},
        {"chases rainbows", "PURSUE-THE-IMPOSSIBLE"},
    };
    return m;
}

Lexicon dental_lexicon() {
    Lexicon lex;
    lex.entries = {
        {"orthodontists", "ORTHODONTISTS"},
        {"periodontists", "PERIODONTISTS"},
    };
    return lex;
}

// Random finite lexicons over a tiny alphabet, seeded with concatenation
// pairs so the composition equation is exercised, plus synonym collisions.
MeaningFunction random_lexicon(std::mt19937& rng) {
    static const std::string alphabet = "abc";
    MeaningFunction m;
    const auto random_word = [&](std::size_t max_len) {
        std::string w;
        const auto len = 1 + rng() % max_len;
        for (std::size_t i = 0; i < len; ++i) w += alphabet[rng() % alphabet.size()];
        return w;
    };
    const auto bases = 2 + rng() % 6;
    std::vector<std::string> words;
    for (std::size_t i = 0; i < bases; ++i) {
        std::string w = random_word(3);
        if (!m.entries.count(w)) {
            m.entries[w] = "M" + std::to_string(rng() % 4); // few ids force synonyms
            words.push_back(w);
        }
    }
    const auto pairs = rng() % 8;
    for (std::size_t i = 0; i < pairs && m.entries.size() < 20; ++i) {
        const std::string s = words[rng() % words.size()];
        const std::string t = words[rng() % words.size()];
        if (s.size() + t.size() <= 6) {
            m.entries.emplace(s + t, "M" + std::to_string(rng() % 4));
        }
    }
    return m;
}

} // namespace

TEST_CASE("the constructed meaning function composes over the chases lexicon") {
    const MeaningFunction m = chases_lexicon();
    const MuFunction mu = build_mu(m, " ");

    REQUIRE(mu.carrier.count("chases") == 1);
    const MuValue& chases = mu.carrier.at("chases");
    CHECK(chases.self_meaning == "CHASE");
    // Applying mu('chases') to mu('mice') lands on mu('chases mice').
    REQUIRE(chases.applications.count("mice") == 1);
    CHECK(chases.applications.at("mice") == "chases mice");
    REQUIRE(chases.applications.count("rainbows") == 1);
    CHECK(chases.applications.at("rainbows") == "chases rainbows");
    CHECK(chases.applications.size() == 2);
    CHECK(mu.carrier.at("mice").applications.empty());

    const MuCheckReport report = mu_check(mu, m);
    CHECK(report.ok());
    CHECK(report.composition_checked == 2);
    CHECK(report.recovery_checked == 5);
    CHECK(report.injective);
}

TEST_CASE("a singleton lexicon has only the self entry") {
    MeaningFunction m;
    m.entries = {{"x", "X"}};
    const MuFunction mu = build_mu(m);
    REQUIRE(mu.carrier.count("x") == 1);
    CHECK(mu.carrier.at("x").self_meaning == "X");
    CHECK(mu.carrier.at("x").applications.empty());
    CHECK(mu_check(mu, m).ok());
}

TEST_CASE("synonyms map to distinct function-values") {
    MeaningFunction m;
    m.entries = {{"a", "SAME"}, {"b", "SAME"}};
    const MuFunction mu = build_mu(m);
    CHECK(m.entries.at("a") == m.entries.at("b"));
    CHECK_FALSE(mu.carrier.at("a") == mu.carrier.at("b"));
    const MuCheckReport report = mu_check(mu, m);
    CHECK(report.injective);
    CHECK(report.ok());
}

TEST_CASE("a corrupted recovery entry is reported as a counterexample") {
    const MeaningFunction m = chases_lexicon();
    MuFunction mu = build_mu(m, " ");
    mu.carrier.at("mice").self_meaning = "WRONG";
    const MuCheckReport report = mu_check(mu, m);
    CHECK_FALSE(report.ok());
    REQUIRE(report.recovery_violations.size() == 1);
    CHECK(report.recovery_violations[0].find("mice") != std::string::npos);
    CHECK(report.composition_violations.empty());
}

TEST_CASE("a corrupted composition entry is reported as a counterexample") {
    const MeaningFunction m = chases_lexicon();
    MuFunction mu = build_mu(m, " ");
    mu.carrier.at("chases").applications.erase("mice");
    const MuCheckReport report = mu_check(mu, m);
    CHECK_FALSE(report.ok());
    CHECK(report.composition_violations.size() == 1);
}

TEST_CASE("a lexicon without concatenations passes vacuously") {
    MeaningFunction m;
    m.entries = {{"cat", "CAT"}, {"dog", "DOG"}};
    const MuCheckReport report = mu_check(build_mu(m), m);
    CHECK(report.composition_checked == 0);
    CHECK(report.ok());
}

TEST_CASE("self-concatenation lands inside the lexicon") {
    MeaningFunction m;
    m.entries = {{"a", "A"}, {"aa", "AA"}};
    const MuFunction mu = build_mu(m);
    CHECK(mu.carrier.at("a").applications.at("a") == "aa");
    CHECK(mu_check(mu, m).ok());
}

TEST_CASE("random lexicons satisfy both equations and injectivity") {
    std::mt19937 rng(5151);
    for (int trial = 0; trial < 100; ++trial) {
        const MeaningFunction m = random_lexicon(rng);
        const MuCheckReport report = mu_check(build_mu(m), m);
        CHECK(report.ok());
    }
}

TEST_CASE("decompose splits the stalag words on the prefix side") {
    Lexicon lex;
    lex.entries = {{"stalagmite", "STALAGMITE"}, {"stalactite", "STALACTITE"}, {"cave", "CAVE"}};
    const ResidueFunction stalag = decompose(lex, "stalag", ResidueSide::prefix);
    CHECK(stalag.table == std::map<std::string, std::string>{{"mite", "STALAGMITE"}});
    CHECK(stalag.apply("mite") == "STALAGMITE");
    // 'stalag' + 'tite' spells 'stalagtite', which is not a word; the
    // orthographic residue leaves it undefined.
    CHECK_FALSE(stalag.apply("tite").has_value());

    // The shared orthographic residue of both words is one letter shorter.
    const ResidueFunction stala = decompose(lex, "stala", ResidueSide::prefix);
    CHECK(stala.table == std::map<std::string, std::string>{{"gmite", "STALAGMITE"},
                                                            {"ctite", "STALACTITE"}});
}

TEST_CASE("a residue equal to a full word matches nothing") {
    Lexicon lex;
    lex.entries = {{"stalag", "CAMP"}};
    const ResidueFunction rf = decompose(lex, "stalag", ResidueSide::prefix);
    CHECK(rf.table.empty());
}

TEST_CASE("decompose splits the dontists words on the suffix side") {
    const ResidueFunction rf = decompose(dental_lexicon(), "dontists", ResidueSide::suffix);
    CHECK(rf.table == std::map<std::string, std::string>{{"ortho", "ORTHODONTISTS"},
                                                         {"perio", "PERIODONTISTS"}});
    CHECK_FALSE(rf.apply("endo").has_value());
}

TEST_CASE("decompose requires a nonempty residue") {
    CHECK_THROWS_AS(decompose(dental_lexicon(), "", ResidueSide::prefix), EmptyInputError);
}

TEST_CASE("decompose then apply recovers every matching lexicon entry") {
    std::mt19937 rng(909);
    static const std::string alphabet = "xyz";
    for (int trial = 0; trial < 50; ++trial) {
        Lexicon lex;
        for (int i = 0; i < 12; ++i) {
            std::string w;
            const auto len = 1 + rng() % 6;
            for (std::size_t j = 0; j < len; ++j) w += alphabet[rng() % alphabet.size()];
            lex.entries.emplace(w, "M" + std::to_string(i));
        }
        std::string residue;
        residue += alphabet[rng() % alphabet.size()];
        if (rng() % 2) residue += alphabet[rng() % alphabet.size()];
        for (ResidueSide side : {ResidueSide::prefix, ResidueSide::suffix}) {
            const ResidueFunction rf = decompose(lex, residue, side);
            for (const auto& [word, meaning] : lex.entries) {
                const bool is_match =
                    word.size() > residue.size() &&
                    (side == ResidueSide::prefix
                         ? word.compare(0, residue.size(), residue) == 0
                         : word.compare(word.size() - residue.size(), residue.size(), residue) == 0);
                if (is_match) {
                    const std::string sound = side == ResidueSide::prefix
                                                  ? word.substr(residue.size())
                                                  : word.substr(0, word.size() - residue.size());
                    CHECK(rf.apply(sound) == meaning);
                }
            }
            for (const auto& [sound, meaning] : rf.table) {
                const std::string word =
                    side == ResidueSide::prefix ? residue + sound : sound + residue;
                CHECK(lex.entries.at(word) == meaning);
            }
        }
    }
}

TEST_CASE("focus alternatives of stalagmite over the gmite span") {
    Lexicon lex;
    lex.entries = {{"stalagmite", "STALAGMITE"}, {"stalactite", "STALACTITE"}, {"cave", "CAVE"}};
    const auto alts = focus_alternatives(lex, "stalagmite", 5, 10);
    REQUIRE(alts.size() == 2);
    CHECK(alts[0] == FocusAlternative{"stalactite", "STALACTITE"});
    CHECK(alts[1] == FocusAlternative{"stalagmite", "STALAGMITE"});
}

TEST_CASE("a whole-word span degenerates to the singleton by default") {
    Lexicon lex;
    lex.entries = {{"mite", "MITE"}, {"tite", "TITE"}};
    const auto alts = focus_alternatives(lex, "mite", 0, 4);
    REQUIRE(alts.size() == 1);
    CHECK(alts[0].word == "mite");
}

TEST_CASE("a whole-word span may be widened to the entire lexicon") {
    Lexicon lex;
    lex.entries = {{"mite", "MITE"}, {"tite", "TITE"}};
    const auto alts = focus_alternatives(lex, "mite", 0, 4, true);
    CHECK(alts.size() == 2);
}

TEST_CASE("a word with no alternatives focuses to itself") {
    Lexicon lex;
    lex.entries = {{"stalagmite", "STALAGMITE"}};
    const auto alts = focus_alternatives(lex, "stalagmite", 6, 10);
    REQUIRE(alts.size() == 1);
    CHECK(alts[0].word == "stalagmite");
}

TEST_CASE("focusing an unknown word is a lookup error") {
    CHECK_THROWS_AS(focus_alternatives(dental_lexicon(), "canines", 0, 3), LookupError);
}

TEST_CASE("focus spans must stay inside the word") {
    Lexicon lex;
    lex.entries = {{"mite", "MITE"}};
    CHECK_THROWS_AS(focus_alternatives(lex, "mite", 2, 9), DomainError);
    CHECK_THROWS_AS(focus_alternatives(lex, "mite", 3, 3), DomainError);
}

TEST_CASE("focus alternatives contain the word and stay inside the lexicon") {
    std::mt19937 rng(333);
    static const std::string alphabet = "pq";
    for (int trial = 0; trial < 50; ++trial) {
        Lexicon lex;
        for (int i = 0; i < 10; ++i) {
            std::string w;
            const auto len = 1 + rng() % 5;
            for (std::size_t j = 0; j < len; ++j) w += alphabet[rng() % alphabet.size()];
            lex.entries.emplace(w, "M" + std::to_string(i));
        }
        const auto it = std::next(lex.entries.begin(), rng() % lex.entries.size());
        const std::string word = it->first;
        const std::size_t begin = rng() % word.size();
        const std::size_t end = begin + 1 + rng() % (word.size() - begin);
        const auto alts = focus_alternatives(lex, word, begin, end);
        bool contains_word = false;
        for (const auto& alt : alts) {
            CHECK(lex.entries.count(alt.word) == 1);
            if (alt.word == word) contains_word = true;
        }
        CHECK(contains_word);
    }
}

TEST_CASE("coordinated parts expand against the shared suffix") {
    const auto expansions =
        coordinate_expand({"ortho", "perio"}, "dontists", ResidueSide::suffix, dental_lexicon());
    REQUIRE(expansions.size() == 2);
    CHECK(expansions[0].word == "orthodontists");
    CHECK(expansions[0].meaning == "ORTHODONTISTS");
    CHECK(expansions[1].word == "periodontists");
    CHECK(expansions[1].meaning == "PERIODONTISTS");
}

TEST_CASE("a single coordinated part degenerates to one word") {
    const auto expansions =
        coordinate_expand({"ortho"}, "dontists", ResidueSide::suffix, dental_lexicon());
    REQUIRE(expansions.size() == 1);
    CHECK(expansions[0].resolved());
}

TEST_CASE("out-of-lexicon expansions are flagged, not fatal") {
    const auto expansions = coordinate_expand({"ortho", "endo", "perio"}, "dontists",
                                              ResidueSide::suffix, dental_lexicon());
    REQUIRE(expansions.size() == 3);
    CHECK(expansions[0].resolved());
    CHECK_FALSE(expansions[1].resolved());
    CHECK(expansions[1].word == "endodontists");
    CHECK(expansions[2].resolved());
}

TEST_CASE("prefix-side coordination builds words the other way round") {
    Lexicon lex;
    lex.entries = {{"stalagmite", "STALAGMITE"}};
    const auto expansions = coordinate_expand({"mite"}, "stalag", ResidueSide::prefix, lex);
    REQUIRE(expansions.size() == 1);
    CHECK(expansions[0].word == "stalagmite");
    CHECK(expansions[0].resolved());
}

TEST_CASE("coordination output length equals the part count") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::string> parts;
        const auto n = 1 + rng() % 6;
        for (std::size_t i = 0; i < n; ++i) parts.push_back("p" + std::to_string(rng() % 4));
        CHECK(coordinate_expand(parts, "dontists", ResidueSide::suffix, dental_lexicon()).size() ==
              parts.size());
    }
}

TEST_CASE("the prosodic gate counts vowel clusters") {
    CHECK(prosodic_gate("phono", 2));
    CHECK(prosodic_gate("nolo", 2));
    CHECK_FALSE(prosodic_gate("s", 2));
    CHECK_FALSE(prosodic_gate("mite", 3)); // i, e -> two clusters only
    CHECK(prosodic_gate("mite", 2));
    CHECK_THROWS_AS(prosodic_gate("", 2), EmptyInputError);
}

TEST_CASE("the prosodic gate is monotone in the threshold") {
    std::mt19937 rng(141);
    static const std::string alphabet = "aeiouybcdfg";
    for (int trial = 0; trial < 100; ++trial) {
        std::string seg;
        const auto len = 1 + rng() % 10;
        for (std::size_t i = 0; i < len; ++i) seg += alphabet[rng() % alphabet.size()];
        for (int k = 2; k <= 5; ++k) {
            if (prosodic_gate(seg, k)) CHECK(prosodic_gate(seg, k - 1));
        }
    }
}

TEST_CASE("lexicon files parse words, meanings, and syllable counts") {
    std::istringstream in(
        "stalagmite\tSTALAGMITE\t3\n"
        "stalactite\tSTALACTITE\n"
        "chases mice\tCHASE-MICE\n");
    const Lexicon lex = load_lexicon(in);
    CHECK(lex.entries.size() == 3);
    CHECK(lex.entries.at("chases mice") == "CHASE-MICE");
    CHECK(lex.syllables.at("stalagmite") == 3);
    CHECK(lex.syllables.count("stalactite") == 0);
}

TEST_CASE("lexicon parse errors carry line numbers") {
    const auto expect_line = [](const std::string& text, std::size_t line) {
        std::istringstream in(text);
        try {
            load_lexicon(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == line);
        }
    };
    expect_line("word-without-meaning\n", 1);
    expect_line("a\tA\na\tB\n", 2);
    expect_line("a\tA\tnot-a-number\n", 1);
}
