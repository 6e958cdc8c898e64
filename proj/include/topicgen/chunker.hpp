// Copyright 2026 The topicgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Noun-phrase chunking: tokenizer, coarse POS tagging (pre-tagged input or a
// small bundled rule tagger) and the chunk grammar
//
//     (ADJ | NOUN | PROPN | NUM)* (NOUN | PROPN)
//
// matched greedily left to right. Determiners are outside the grammar and so
// never start a phrase.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "topicgen/error.hpp"
#include "topicgen/io_formats.hpp"
#include "topicgen/utf8.hpp"

namespace topicgen::chunk {

enum class Pos : std::uint8_t { kNoun, kPropn, kAdj, kDet, kNum, kVerb, kAdp, kPunct, kOther };

inline constexpr std::array<std::string_view, 9> kPosNames = {
    "NOUN", "PROPN", "ADJ", "DET", "NUM", "VERB", "ADP", "PUNCT", "OTHER"};

inline std::string_view to_string(Pos pos) { return kPosNames[static_cast<std::size_t>(pos)]; }

inline std::optional<Pos> parse_pos(std::string_view name) {
  for (std::size_t i = 0; i < kPosNames.size(); ++i) {
    if (kPosNames[i] == name) return static_cast<Pos>(i);
  }
  return std::nullopt;
}

inline bool is_noun(Pos pos) { return pos == Pos::kNoun || pos == Pos::kPropn; }

struct Token {
  std::string surface;
  std::int64_t char_start = 0;  // code point offsets into the document
  std::int64_t char_end = 0;
  std::size_t byte_start = 0;   // byte offsets into the document
  std::size_t byte_end = 0;
  std::optional<Pos> pos;
  bool is_capitalized = false;

  std::int64_t length() const { return char_end - char_start; }
  bool operator==(const Token&) const = default;
};

// ---------------------------------------------------------------------------
// Tokenizer

namespace detail {

inline bool is_word_cp(char32_t cp) { return !utf8::is_space(cp) && !utf8::is_punct(cp); }

inline bool is_joiner(char32_t cp) { return cp == U'-' || cp == U'\'' || cp == 0x2019; }

inline bool is_numeric_joiner(char32_t cp) { return cp == U'.' || cp == U','; }

}  // namespace detail

// Splits text into maximal non-whitespace runs, then splits each run at
// punctuation. Hyphens and apostrophes between word characters stay inside
// the word ("US-backed", "Robbie's"), as do '.' and ',' between digits.
inline std::vector<Token> tokenize(std::string_view text) {
  struct Cp {
    char32_t cp;
    std::size_t byte;
    std::size_t len;
  };
  std::vector<Cp> cps;
  cps.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    const auto d = utf8::decode(text, pos);
    cps.push_back({d.cp, pos, d.length});
    pos += d.length;
  }

  std::vector<Token> tokens;
  const auto emit = [&](std::size_t first, std::size_t last) {  // cps [first, last)
    Token t;
    t.byte_start = cps[first].byte;
    t.byte_end = cps[last - 1].byte + cps[last - 1].len;
    t.char_start = static_cast<std::int64_t>(first);
    t.char_end = static_cast<std::int64_t>(last);
    t.surface = std::string(text.substr(t.byte_start, t.byte_end - t.byte_start));
    t.is_capitalized = utf8::is_upper(cps[first].cp);
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t cp = cps[i].cp;
    if (utf8::is_space(cp)) {
      ++i;
    } else if (!detail::is_word_cp(cp)) {
      emit(i, i + 1);
      ++i;
    } else {
      std::size_t j = i + 1;
      while (j < cps.size()) {
        const char32_t c = cps[j].cp;
        if (detail::is_word_cp(c)) {
          ++j;
          continue;
        }
        const bool next_is_word = j + 1 < cps.size() && detail::is_word_cp(cps[j + 1].cp);
        if (next_is_word && detail::is_joiner(c)) {
          j += 2;
          continue;
        }
        if (next_is_word && detail::is_numeric_joiner(c) && utf8::is_digit(cps[j - 1].cp) &&
            utf8::is_digit(cps[j + 1].cp)) {
          j += 2;
          continue;
        }
        break;
      }
      emit(i, j);
      i = j;
    }
  }
  return tokens;
}

// Surfaces only; the unit word-level comparisons operate on.
inline std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.surface));
  return out;
}

// ---------------------------------------------------------------------------
// Fine-to-coarse tag mapping

class TagMap {
 public:
  TagMap() = default;

  // Penn Treebank and Universal Dependencies tags.
  static const TagMap& builtin() {
    static const TagMap map = [] {
      TagMap m;
      const std::pair<const char*, Pos> table[] = {
          {"NN", Pos::kNoun},    {"NNS", Pos::kNoun},   {"NNP", Pos::kPropn},
          {"NNPS", Pos::kPropn}, {"JJ", Pos::kAdj},     {"JJR", Pos::kAdj},
          {"JJS", Pos::kAdj},    {"DT", Pos::kDet},     {"PDT", Pos::kDet},
          {"WDT", Pos::kDet},    {"CD", Pos::kNum},     {"VB", Pos::kVerb},
          {"VBD", Pos::kVerb},   {"VBG", Pos::kVerb},   {"VBN", Pos::kVerb},
          {"VBP", Pos::kVerb},   {"VBZ", Pos::kVerb},   {"MD", Pos::kVerb},
          {"IN", Pos::kAdp},     {"TO", Pos::kAdp},     {"RP", Pos::kAdp},
          {".", Pos::kPunct},    {",", Pos::kPunct},    {":", Pos::kPunct},
          {"``", Pos::kPunct},   {"''", Pos::kPunct},   {"-LRB-", Pos::kPunct},
          {"-RRB-", Pos::kPunct}, {"(", Pos::kPunct},   {")", Pos::kPunct},
          {"#", Pos::kPunct},    {"$", Pos::kPunct},    {"HYPH", Pos::kPunct},
          {"NFP", Pos::kPunct},  {"PRP", Pos::kOther},  {"PRP$", Pos::kDet},
          {"WP", Pos::kOther},   {"WP$", Pos::kDet},    {"RB", Pos::kOther},
          {"RBR", Pos::kOther},  {"RBS", Pos::kOther},  {"WRB", Pos::kOther},
          {"CC", Pos::kOther},   {"EX", Pos::kOther},   {"FW", Pos::kNoun},
          {"LS", Pos::kOther},   {"POS", Pos::kOther},  {"SYM", Pos::kPunct},
          {"UH", Pos::kOther},   {"ADD", Pos::kNoun},   {"AFX", Pos::kAdj},
          {"XX", Pos::kOther},
          // Universal tags
          {"NOUN", Pos::kNoun},  {"PROPN", Pos::kPropn}, {"ADJ", Pos::kAdj},
          {"DET", Pos::kDet},    {"NUM", Pos::kNum},    {"VERB", Pos::kVerb},
          {"AUX", Pos::kVerb},   {"ADP", Pos::kAdp},    {"PUNCT", Pos::kPunct},
          {"PRON", Pos::kOther}, {"ADV", Pos::kOther},  {"CCONJ", Pos::kOther},
          {"CONJ", Pos::kOther}, {"SCONJ", Pos::kOther}, {"PART", Pos::kOther},
          {"PRT", Pos::kOther},  {"INTJ", Pos::kOther}, {"SYM", Pos::kPunct},
          {"X", Pos::kOther},    {"OTHER", Pos::kOther},
      };
      for (const auto& [fine, coarse] : table) m.table_[fine] = coarse;
      return m;
    }();
    return map;
  }

  // tagmap.tsv: "<fine>\t<COARSE>" per line. A line starting with '#' is a
  // comment unless the '#' is followed by a tab (the Penn tag "#").
  static TagMap load(std::istream& in) {
    TagMap m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || (line[0] == '#' && line.rfind("#\t", 0) != 0)) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || tab == 0) throw FormatError("expected '<fine>\\t<coarse>'", line_no);
      const auto coarse = parse_pos(std::string_view(line).substr(tab + 1));
      if (!coarse) throw FormatError("unknown coarse tag '" + line.substr(tab + 1) + "'", line_no);
      m.table_[line.substr(0, tab)] = *coarse;
    }
    return m;
  }

  static TagMap load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open tag map '" + path + "'");
    return load(in);
  }

  std::optional<Pos> coarse(const std::string& fine) const {
    const auto it = table_.find(fine);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, Pos>& entries() const { return table_; }

  bool operator==(const TagMap&) const = default;

 private:
  std::map<std::string, Pos> table_;
};

// ---------------------------------------------------------------------------
// Taggers

// Closed-class lexicon plus a capitalization heuristic: a capitalized token
// that does not start a sentence is PROPN. Everything unresolved is NOUN.
class RuleTagger {
 public:
  static const RuleTagger& bundled() {
    static const RuleTagger tagger;
    return tagger;
  }

  Pos tag_one(const Token& token, bool sentence_initial) const {
    const std::string_view s = token.surface;
    if (is_punctuation(s)) return Pos::kPunct;
    if (is_number(s)) return Pos::kNum;
    if (token.is_capitalized && !sentence_initial && s != "I") return Pos::kPropn;

    const std::string lower = ascii_lower(s);
    if (const auto it = lexicon_.find(lower); it != lexicon_.end()) return it->second;

    const auto hyphen = lower.rfind('-');
    if (hyphen != std::string::npos) {
      const std::string_view tail = std::string_view(lower).substr(hyphen + 1);
      if (ends_with(tail, "ed") || ends_with(tail, "ing")) return Pos::kAdj;
      return Pos::kNoun;
    }
    if (lower.size() > 4 && ends_with(lower, "ly")) return Pos::kOther;
    for (const std::string_view suffix : {"ous", "ful", "ive", "able", "ible", "less", "ical"}) {
      if (lower.size() > suffix.size() + 2 && ends_with(lower, suffix)) return Pos::kAdj;
    }
    if (lower.size() > 4 && ends_with(lower, "ed")) return Pos::kVerb;
    return Pos::kNoun;
  }

  std::vector<Token> tag(std::vector<Token> tokens) const {
    bool initial = true;
    for (auto& t : tokens) {
      t.pos = tag_one(t, initial);
      initial = *t.pos == Pos::kPunct && is_sentence_boundary(t.surface);
    }
    return tokens;
  }

  std::optional<Pos> lookup(std::string_view lower) const {
    const auto it = lexicon_.find(std::string(lower));
    if (it == lexicon_.end()) return std::nullopt;
    return it->second;
  }

 private:
  RuleTagger() {
    const auto add = [&](Pos pos, std::initializer_list<const char*> ws) {
      for (const char* w : ws) lexicon_.emplace(w, pos);
    };
    add(Pos::kDet, {"the", "a", "an", "this", "that", "these", "those", "each", "every",
                    "some", "any", "no", "another", "either", "neither", "all", "both",
                    "such", "what", "which", "whose", "my", "your", "his", "her", "its",
                    "our", "their"});
    add(Pos::kAdp, {"of", "in", "on", "at", "by", "for", "with", "about", "against",
                    "between", "into", "through", "during", "before", "after", "above",
                    "below", "to", "from", "up", "down", "over", "under", "within",
                    "without", "across", "along", "among", "around", "behind", "beyond",
                    "near", "off", "onto", "than", "toward", "towards", "upon", "via",
                    "per", "like", "since", "until", "despite", "amid", "as"});
    add(Pos::kVerb, {"is", "are", "was", "were", "be", "been", "being", "am", "has",
                     "have", "had", "having", "do", "does", "did", "will", "would",
                     "shall", "should", "can", "could", "may", "might", "must", "says",
                     "said", "say", "make", "makes", "made", "get", "gets", "got", "go",
                     "goes", "went", "take", "takes", "took", "come", "comes", "came",
                     "see", "saw", "know", "knew", "think", "thought", "give", "gave",
                     "tell", "told", "become", "became", "seem", "seems", "looks",
                     "shows", "sought", "ought", "signs", "passes", "returns", "upend",
                     "met", "held", "led", "kept", "won", "paid", "sent", "spent", "built",
                     "began", "brought", "felt", "heard", "meant", "ran", "stood", "spoke",
                     "wrote", "fell", "fought", "bought", "caught", "taught", "chose",
                     "drove", "grew", "sold", "threw", "understood"});
    add(Pos::kOther, {"i", "you", "he", "she", "it", "we", "they", "me", "him", "us",
                      "them", "who", "whom", "and", "or", "but", "nor", "yet", "so", "if",
                      "because", "while", "although", "though", "whether", "not", "very",
                      "also", "just", "only", "even", "still", "too", "then", "there",
                      "here", "now", "how", "when", "where", "why", "more", "most", "less",
                      "least", "quite", "rather", "however", "n't", "'s", "yes", "where"});
    add(Pos::kNum, {"one", "two", "three", "four", "five", "six", "seven", "eight",
                    "nine", "ten", "eleven", "twelve", "twenty", "hundred", "thousand",
                    "million", "billion"});
    add(Pos::kAdj, {"new", "old", "big", "small", "large", "great", "good", "bad", "high",
                    "low", "long", "short", "first", "last", "other", "former", "latest",
                    "major", "key", "own", "many", "few", "several", "much", "political",
                    "economic", "public", "general", "international", "national",
                    "local", "foreign", "senior", "chief", "upcoming", "popular",
                    "female", "corrupt", "federal", "largest", "non-binding", "urgent",
                    "next", "early", "late", "recent", "same", "different", "top"});
  }

  static bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
  }

  static std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }

  static bool is_punctuation(std::string_view s) {
    for (std::size_t pos = 0; pos < s.size();) {
      const auto d = utf8::decode(s, pos);
      if (!utf8::is_punct(d.cp)) return false;
      pos += d.length;
    }
    return !s.empty();
  }

  static bool is_number(std::string_view s) {
    if (s.empty() || !utf8::is_digit(static_cast<unsigned char>(s[0]))) return false;
    for (const char c : s) {
      if (!(c >= '0' && c <= '9') && c != '.' && c != ',') return false;
    }
    return true;
  }

  static bool is_sentence_boundary(std::string_view s) {
    return s == "." || s == "!" || s == "?" || s == ":" || s == ";" || s == "\"" ||
           s == "\xE2\x80\x9C" /* left double quote */ || s == "(";
  }

  std::map<std::string, Pos> lexicon_;
};

// Where POS tags come from: tags supplied with the document, aligned to the
// tokenizer output by surface, or the bundled rule tagger.
class TagSource {
 public:
  static TagSource pretagged(std::vector<io::TaggedSurface> tags,
                             const TagMap& map = TagMap::builtin()) {
    TagSource s;
    s.pretagged_ = std::move(tags);
    s.map_ = &map;
    return s;
  }

  static TagSource rules(const RuleTagger& tagger = RuleTagger::bundled()) {
    TagSource s;
    s.rules_ = &tagger;
    return s;
  }

  bool is_pretagged() const { return pretagged_.has_value(); }
  const std::vector<io::TaggedSurface>& tags() const { return *pretagged_; }
  const TagMap& tag_map() const { return *map_; }
  const RuleTagger& rule_tagger() const { return *rules_; }

 private:
  TagSource() = default;
  std::optional<std::vector<io::TaggedSurface>> pretagged_;
  const TagMap* map_ = nullptr;
  const RuleTagger* rules_ = nullptr;
};

// Sets pos on every token. With pre-tagged input the i-th supplied surface must
// equal the i-th token's surface; the first mismatch throws naming its index.
inline std::vector<Token> tag(std::vector<Token> tokens, const TagSource& source) {
  if (!source.is_pretagged()) return source.rule_tagger().tag(std::move(tokens));

  const auto& tags = source.tags();
  const std::size_t n = std::max(tokens.size(), tags.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= tokens.size() || i >= tags.size() || tokens[i].surface != tags[i].surface) {
      const std::string have = i < tokens.size() ? "'" + tokens[i].surface + "'" : "end of text";
      const std::string want = i < tags.size() ? "'" + tags[i].surface + "'" : "end of tags";
      throw FormatError("pretagged misalignment at token " + std::to_string(i) + ": text has " +
                        have + ", tags have " + want);
    }
    const auto coarse = source.tag_map().coarse(tags[i].tag);
    if (!coarse) {
      throw FormatError("unknown tag '" + tags[i].tag + "' at token " + std::to_string(i));
    }
    tokens[i].pos = *coarse;
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Noun phrases

struct NounPhrase {
  std::vector<Token> tokens;
  std::size_t first_token = 0;  // index of tokens[0] in the document
  std::int64_t char_start = 0;
  std::int64_t char_end = 0;
  std::vector<std::size_t> noun_positions;  // indices into tokens
  std::int64_t char_length = 0;             // sum of token lengths, separators excluded

  // Words joined by single spaces; the phrase's identity for dedup and output.
  std::string text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i].surface;
    }
    return out;
  }

  bool operator==(const NounPhrase&) const = default;
};

inline NounPhrase make_phrase(std::vector<Token> tokens, std::size_t first_token) {
  NounPhrase p;
  p.first_token = first_token;
  p.char_start = tokens.front().char_start;
  p.char_end = tokens.back().char_end;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    p.char_length += tokens[i].length();
    if (tokens[i].pos && is_noun(*tokens[i].pos)) p.noun_positions.push_back(i);
  }
  p.tokens = std::move(tokens);
  return p;
}

// All maximal matches of the chunk grammar in document order. A run of
// ADJ/NOUN/PROPN/NUM tokens yields one phrase ending at the run's last noun.
inline std::vector<NounPhrase> extract_noun_phrases(const std::vector<Token>& tokens) {
  const auto in_run = [](const Token& t) {
    const Pos p = t.pos.value_or(Pos::kOther);
    return p == Pos::kAdj || p == Pos::kNum || is_noun(p);
  };
  std::vector<NounPhrase> phrases;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (!in_run(tokens[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    std::optional<std::size_t> last_noun;
    while (end < tokens.size() && in_run(tokens[end])) {
      if (is_noun(*tokens[end].pos)) last_noun = end;
      ++end;
    }
    if (last_noun) {
      phrases.push_back(make_phrase(
          std::vector<Token>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                             tokens.begin() + static_cast<std::ptrdiff_t>(*last_noun + 1)),
          i));
    }
    i = end;
  }
  return phrases;
}

// tokenize + tag + extract for one document, honouring its pretagged tokens
// when the caller asks for them.
inline std::vector<Token> tagged_tokens(const io::DocumentRecord& doc, bool use_pretagged,
                                        const TagMap& map = TagMap::builtin()) {
  auto tokens = tokenize(doc.text);
  if (use_pretagged) {
    if (!doc.pretagged_tokens) {
      throw FormatError("document '" + doc.doc_id + "' has no pretagged_tokens");
    }
    return tag(std::move(tokens), TagSource::pretagged(*doc.pretagged_tokens, map));
  }
  return tag(std::move(tokens), TagSource::rules());
}

}  // namespace topicgen::chunk
