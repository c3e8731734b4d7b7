#include "relfix/parse.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace relfix {

namespace {

enum class Tok { kName, kInt, kLBrace, kRBrace, kLBracket, kRBracket, kSemi, kComma, kCaret, kArrow, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

char const* describe(Tok kind) {
  switch (kind) {
    case Tok::kName: return "name";
    case Tok::kInt: return "integer";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kLBracket: return "'['";
    case Tok::kRBracket: return "']'";
    case Tok::kSemi: return "';'";
    case Tok::kComma: return "','";
    case Tok::kCaret: return "'^'";
    case Tok::kArrow: return "'->'";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = column;
    auto is_digit = [&](std::size_t k) {
      return k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]));
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      tok.kind = Tok::kName;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (is_digit(i) || ((c == '-' || c == '+') && is_digit(i + 1))) {
      std::size_t j = i + 1;
      while (is_digit(j)) ++j;
      tok.kind = Tok::kInt;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      tok.kind = Tok::kArrow;
      tok.text = "->";
      advance(2);
    } else {
      switch (c) {
        case '{': tok.kind = Tok::kLBrace; break;
        case '}': tok.kind = Tok::kRBrace; break;
        case '[': tok.kind = Tok::kLBracket; break;
        case ']': tok.kind = Tok::kRBracket; break;
        case ';': tok.kind = Tok::kSemi; break;
        case ',': tok.kind = Tok::kComma; break;
        case '^': tok.kind = Tok::kCaret; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, column);
      }
      tok.text = std::string(1, c);
      advance(1);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Token const& peek() const { return tokens_[pos_]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_keyword(std::string_view word) const {
    return at(Tok::kName) && peek().text == word;
  }

  Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  Token expect(Tok kind) {
    if (!at(kind)) fail(std::string("expected ") + describe(kind) + ", found " + found());
    return take();
  }

  void expect_keyword(std::string_view word) {
    if (!at_keyword(word)) fail("expected '" + std::string(word) + "', found " + found());
    take();
  }

  [[noreturn]] void fail(std::string const& message) const {
    throw ParseError(message, peek().line, peek().column);
  }

  std::string found() const {
    return at(Tok::kEnd) ? "end of input" : "'" + peek().text + "'";
  }

  Coord integer() {
    Token tok = expect(Tok::kInt);
    std::string_view digits = tok.text;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    Coord value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw ParseError("integer out of range", tok.line, tok.column);
    }
    return value;
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> names{expect(Tok::kName).text};
    while (at(Tok::kComma)) {
      take();
      names.push_back(expect(Tok::kName).text);
    }
    return names;
  }

  std::vector<Coord> int_list() {
    std::vector<Coord> values{integer()};
    while (at(Tok::kComma)) {
      take();
      values.push_back(integer());
    }
    return values;
  }

  // Parses factor/free statements until something else appears.
  GroupSpec group_spec() {
    std::vector<AbelianFactor> factors;
    while (at_keyword("factor") || at_keyword("free")) {
      Token head = peek();
      if (at_keyword("free")) {
        take();
        for (auto& name : name_list()) {
          AbelianFactor f;
          f.name = name;
          f.rank = 1;
          f.generator_names = {name};
          f.free_generator = true;
          factors.push_back(std::move(f));
        }
        continue;
      }
      take();
      AbelianFactor f;
      f.name = expect(Tok::kName).text;
      expect(Tok::kLBrace);
      expect_keyword("abelian");
      expect(Tok::kSemi);
      expect_keyword("gens");
      f.generator_names = name_list();
      if (at(Tok::kSemi)) {
        take();
        expect_keyword("torsion");
        f.torsion = int_list();
      }
      expect(Tok::kRBrace);
      if (f.torsion.size() > f.generator_names.size()) {
        throw ParseError("factor '" + f.name + "' has more torsion entries than generators",
                         head.line, head.column);
      }
      f.rank = f.generator_names.size() - f.torsion.size();
      factors.push_back(std::move(f));
    }
    if (factors.empty()) fail("expected 'factor' or 'free', found " + found());
    try {
      return GroupSpec(std::move(factors));
    } catch (ValidationError const& e) {
      throw ParseError(e.what(), tokens_.front().line, tokens_.front().column);
    }
  }

  // Reads tokens of a word until a token that cannot continue it.
  Word word(GroupSpec const& spec) {
    Word out;
    while (true) {
      if (at(Tok::kInt) && peek().text == "1") {
        take();
        continue;
      }
      if (!at(Tok::kName)) break;
      Token name = take();
      if (at(Tok::kLBracket)) {
        take();
        auto factor = spec.find_factor(name.text);
        if (!factor) {
          throw ParseError("unknown factor '" + name.text + "'", name.line, name.column);
        }
        std::vector<Coord> values = int_list();
        expect(Tok::kRBracket);
        if (values.size() != spec.factor(*factor).dimension()) {
          throw ParseError("wrong vector length for factor '" + name.text + "'", name.line,
                           name.column);
        }
        if (!spec.is_peripheral(*factor)) {
          throw ParseError("factor '" + name.text + "' is not peripheral", name.line,
                           name.column);
        }
        WordLetter letter{*factor, Coords(values.begin(), values.end()), true};
        spec.reduce(letter.factor, letter.coords);
        if (spec.is_zero(letter.coords)) {
          throw ParseError("peripheral letter with zero vector", name.line, name.column);
        }
        out.push_back(std::move(letter));
        continue;
      }
      auto gen = spec.find_generator(name.text);
      if (!gen) {
        throw ParseError("unknown generator '" + name.text + "'", name.line, name.column);
      }
      Coord exponent = 1;
      if (at(Tok::kCaret)) {
        take();
        exponent = integer();
      }
      auto ref = spec.generator(*gen);
      Coords coords(spec.factor(ref.factor).dimension(), 0);
      coords[ref.coord] = exponent;
      out.push_back({ref.factor, std::move(coords), false});
    }
    return out;
  }

  std::vector<std::pair<std::string, Word>> image_block(GroupSpec const& spec) {
    std::vector<std::pair<std::string, Word>> images;
    while (at(Tok::kName) && !at_keyword("inverse")) {
      Token name = take();
      if (!spec.find_generator(name.text)) {
        throw ParseError("unknown generator '" + name.text + "'", name.line, name.column);
      }
      for (auto const& [existing, _] : images) {
        if (existing == name.text) {
          throw ParseError("generator '" + name.text + "' mapped twice", name.line,
                           name.column);
        }
      }
      expect(Tok::kArrow);
      Word w = word(spec);
      images.emplace_back(name.text, std::move(w));
      if (!at(Tok::kSemi)) break;
      take();
    }
    return images;
  }

  AutomorphismDefinition automorphism(GroupSpec const& spec) {
    Token head = peek();
    expect_keyword("aut");
    AutomorphismDefinition def;
    def.name = expect(Tok::kName).text;
    expect(Tok::kLBrace);
    def.forward = image_block(spec);
    expect_keyword("inverse");
    expect(Tok::kLBrace);
    def.backward = image_block(spec);
    expect(Tok::kRBrace);
    if (at(Tok::kSemi)) take();
    expect(Tok::kRBrace);
    for (auto const* block : {&def.forward, &def.backward}) {
      if (block->size() != spec.generator_count()) {
        throw ParseError("aut '" + def.name + "' must give an image for every generator",
                         head.line, head.column);
      }
    }
    return def;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

AutomorphismDefinition const* GroupFile::find(std::string_view name) const {
  for (auto const& a : automorphisms) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

GroupSpec parse_group_spec(std::string_view text) {
  Parser p(text);
  GroupSpec spec = p.group_spec();
  if (!p.at(Tok::kEnd)) p.fail("unexpected " + p.found());
  return spec;
}

GroupFile parse_group_file(std::string_view text) {
  Parser p(text);
  GroupFile file{p.group_spec(), {}};
  while (p.at_keyword("aut")) {
    auto def = p.automorphism(file.spec);
    if (file.find(def.name) != nullptr) p.fail("duplicate automorphism '" + def.name + "'");
    file.automorphisms.push_back(std::move(def));
  }
  if (!p.at(Tok::kEnd)) p.fail("unexpected " + p.found());
  return file;
}

Word parse_word(std::string_view text, GroupSpec const& spec) {
  Parser p(text);
  Word w = p.word(spec);
  if (!p.at(Tok::kEnd)) p.fail("unexpected " + p.found());
  return w;
}

AutomorphismDefinition parse_automorphism_definition(std::string_view text,
                                                     GroupSpec const& spec) {
  Parser p(text);
  auto def = p.automorphism(spec);
  if (!p.at(Tok::kEnd)) p.fail("unexpected " + p.found());
  return def;
}

}  // namespace relfix
