#include "newsim/corpus/stopwords.hpp"

#include <map>
#include <unordered_set>

#include "newsim/log.hpp"
#include "newsim/text.hpp"

namespace newsim::corpus {
namespace {

using WordSet = std::unordered_set<std::string_view>;

// Lists are lowercase. Kept short: function words only.
const std::map<std::string_view, WordSet>& lists() {
    static const std::map<std::string_view, WordSet> table{
        {"en",
         {"a",      "about",  "above",   "after",  "again",  "against", "all",    "am",
          "an",     "and",    "any",     "are",    "as",     "at",      "be",     "because",
          "been",   "before", "being",   "below",  "between", "both",   "but",    "by",
          "can",    "could",  "did",     "do",     "does",   "doing",   "down",   "during",
          "each",   "few",    "for",     "from",   "further", "had",    "has",    "have",
          "having", "he",     "her",     "here",   "hers",   "herself", "him",    "himself",
          "his",    "how",    "i",       "if",     "in",     "into",    "is",     "it",
          "its",    "itself", "just",    "me",     "more",   "most",    "my",     "myself",
          "no",     "nor",    "not",     "now",    "of",     "off",     "on",     "once",
          "only",   "or",     "other",   "our",    "ours",   "ourselves", "out",  "over",
          "own",    "same",   "she",     "should", "so",     "some",    "such",   "than",
          "that",   "the",    "their",   "theirs", "them",   "themselves", "then", "there",
          "these",  "they",   "this",    "those",  "through", "to",     "too",    "under",
          "until",  "up",     "very",    "was",    "we",     "were",    "what",   "when",
          "where",  "which",  "while",   "who",    "whom",   "why",     "will",   "with",
          "would",  "you",    "your",    "yours",  "yourself", "yourselves"}},
        {"de",
         {"aber",  "alle",   "als",    "also",   "am",    "an",     "auch",   "auf",
          "aus",   "bei",    "bin",    "bis",    "bist",  "da",     "dadurch", "daher",
          "darum", "das",    "dass",   "dein",   "deine", "dem",    "den",    "der",
          "des",   "dessen", "die",    "dies",   "dieser", "dieses", "doch",  "dort",
          "du",    "durch",  "ein",    "eine",   "einem", "einen",  "einer",  "eines",
          "er",    "es",     "euer",   "eure",   "für",   "hatte",  "hatten", "hattest",
          "hattet", "hier",  "hinter", "ich",    "ihr",   "ihre",   "im",     "in",
          "ist",   "ja",     "jede",   "jedem",  "jeden", "jeder",  "jedes",  "jener",
          "jenes", "jetzt",  "kann",   "kannst", "können", "könnt", "machen", "mein",
          "meine", "mit",    "muß",    "musst",  "müssen", "nach",  "nachdem", "nein",
          "nicht", "nun",    "oder",   "seid",   "sein",  "seine",  "sich",   "sie",
          "sind",  "soll",   "sollen", "sollst", "sollt", "sonst",  "soweit", "sowie",
          "und",   "unser",  "unsere", "unter",  "vom",   "von",    "vor",    "wann",
          "warum", "was",    "weiter", "weitere", "wenn", "wer",    "werde",  "werden",
          "werdet", "weshalb", "wie",  "wieder", "wieso", "wir",    "wird",   "wirst",
          "wo",    "woher",  "wohin",  "zu",     "zum",   "zur",    "über"}},
        {"es",
         {"a",     "al",    "algo",  "algunas", "algunos", "ante",  "antes", "como",
          "con",   "contra", "cual", "cuando",  "de",     "del",   "desde", "donde",
          "durante", "e",   "el",    "ella",    "ellas",  "ellos", "en",    "entre",
          "era",   "erais", "eran",  "eras",    "eres",   "es",    "esa",   "esas",
          "ese",   "eso",   "esos",  "esta",    "estaba", "estado", "estas", "este",
          "esto",  "estos", "fue",   "fueron",  "ha",     "han",   "hasta", "hay",
          "la",    "las",   "le",    "les",     "lo",     "los",   "más",   "me",
          "mi",    "mis",   "mucho", "muchos",  "muy",    "nada",  "ni",    "no",
          "nos",   "nosotros", "o",  "os",      "otra",   "otras", "otro",  "otros",
          "para",  "pero",  "poco",  "por",     "porque", "que",   "quien", "quienes",
          "qué",   "se",    "sea",   "ser",     "si",     "sido",  "sin",   "sobre",
          "su",    "sus",   "también", "tanto", "te",     "tiene", "todo",  "todos",
          "tu",    "tus",   "un",    "una",     "uno",    "unos",  "y",     "ya",
          "yo"}},
        {"fr",
         {"au",   "aux",   "avec",  "ce",    "ces",   "dans",  "de",    "des",
          "du",   "elle",  "en",    "et",    "eux",   "il",    "ils",   "je",
          "la",   "le",    "les",   "leur",  "lui",   "ma",    "mais",  "me",
          "même", "mes",   "moi",   "mon",   "ne",    "nos",   "notre", "nous",
          "on",   "ou",    "par",   "pas",   "pour",  "qu",    "que",   "qui",
          "sa",   "se",    "ses",   "son",   "sur",   "ta",    "te",    "tes",
          "toi",  "ton",   "tu",    "un",    "une",   "vos",   "votre", "vous",
          "c",    "d",     "j",     "l",     "à",     "m",     "n",     "s",
          "t",    "y",     "été",   "était", "est",   "sont",  "ont",   "a",
          "ai",   "as",    "avait", "cette", "cet",   "comme", "plus",  "si",
          "tout", "tous",  "très",  "aussi", "donc",  "entre", "sans",  "sous"}},
        {"it",
         {"a",     "ad",    "al",    "alla",  "alle",  "anche", "che",   "chi",
          "ci",    "come",  "con",   "da",    "dal",   "dalla", "dei",   "del",
          "della", "delle", "di",    "e",     "è",     "ed",    "gli",   "ha",
          "hanno", "i",     "il",    "in",    "io",    "la",    "le",    "lei",
          "lo",    "loro",  "lui",   "ma",    "mi",    "ne",    "nel",   "nella",
          "noi",   "non",   "o",     "per",   "più",   "quale", "quando", "questa",
          "questo", "se",   "si",    "sono",  "su",    "sua",   "suo",   "sul",
          "tra",   "tu",    "un",    "una",   "uno",   "voi"}},
        {"pl",
         {"a",    "aby",  "ale",   "bardzo", "bez",  "bo",    "był",   "była",
          "było", "były", "być",   "będzie", "co",   "czy",   "dla",   "do",
          "go",   "i",    "ich",   "ja",     "jak",  "jako",  "je",    "jego",
          "jej",  "jest", "jeszcze", "jednak", "już", "kiedy", "która", "które",
          "który", "lub", "ma",    "mi",     "na",   "nad",   "nie",   "o",
          "od",   "oraz", "po",    "pod",    "przez", "przy", "się",   "są",
          "ta",   "tak",  "także", "tego",   "tej",  "to",    "tu",    "tylko",
          "w",    "we",   "z",     "za",     "ze",   "że",    "żeby"}},
        {"tr",
         {"acaba", "ama",   "ancak", "bazı",  "belki", "ben",   "bir",   "biri",
          "birkaç", "biz",  "bu",    "da",    "de",    "daha",  "diye",  "en",
          "gibi",  "hem",   "hep",   "her",   "hiç",   "için",  "ile",   "ise",
          "kadar", "ki",    "kim",   "mi",    "mu",    "mü",    "nasıl", "ne",
          "neden", "o",     "olan",  "olarak", "onlar", "sen",  "siz",   "şey",
          "şu",    "tüm",   "ve",    "veya",  "ya",    "yani"}},
        {"ar",
         {"في",  "من",   "على",  "إلى",  "عن",   "مع",   "هذا",  "هذه",
          "ذلك", "التي", "الذي", "الذين", "كان", "كانت", "أن",   "إن",
          "أو",  "ثم",   "قد",   "لا",   "لم",   "لن",   "ما",   "هو",
          "هي",  "هم",   "و",    "بين",  "كل",   "حتى",  "عند",  "بعد",
          "قبل", "أي",   "كما",  "لكن",  "ليس",  "منذ",  "فيه",  "فيها"}},
    };
    return table;
}

std::string_view strip_punct(std::string_view token) {
    auto punct = [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return u < 0x80 && !text::is_word_byte(c);
    };
    while (!token.empty() && punct(token.front())) token.remove_prefix(1);
    while (!token.empty() && punct(token.back())) token.remove_suffix(1);
    return token;
}

} // namespace

std::vector<std::string> stopword_languages() {
    std::vector<std::string> out;
    for (const auto& [lang, _] : lists()) out.emplace_back(lang);
    return out;
}

bool has_stopword_list(std::string_view language) { return lists().count(language) > 0; }

bool is_stopword(std::string_view token, std::string_view language) {
    const auto it = lists().find(language);
    if (it == lists().end()) return false;
    const std::string folded = text::fold_case(strip_punct(token));
    return !folded.empty() && it->second.count(folded) > 0;
}

std::string remove_stopwords(std::string_view input, std::string_view language) {
    const auto it = lists().find(language);
    if (it == lists().end()) {
        log::warn("no stopword list for language '" + std::string(language) +
                  "'; text left unchanged");
        return std::string(input);
    }
    std::vector<std::string_view> kept;
    for (std::string_view token : text::split_whitespace(input)) {
        const std::string folded = text::fold_case(strip_punct(token));
        if (folded.empty() || it->second.count(folded) == 0) kept.push_back(token);
    }
    return text::join(kept, " ");
}

} // namespace newsim::corpus
