#include <cctype>
#include <charconv>

#include "attn/logic.hpp"

namespace attn {
namespace {

enum class Tok { End, Ident, Nat, LParen, RParen, Not, And, Or, Implies, Iff, Eq, Less, Greater, Geq };

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  std::size_t pos = 0;
  unsigned number = 0;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Nat: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Implies: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::Eq: return "'='";
    case Tok::Less: return "'<'";
    case Tok::Greater: return "'>'";
    case Tok::Geq: return "'>='";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    auto single = [&](Tok k, std::size_t len) {
      t.kind = k;
      t.text = s.substr(i, len);
      i += len;
    };
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && is_ident_char(s[j])) ++j;
      single(Tok::Ident, j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, t.number);
      if (ec != std::errc{}) throw ParseError(i, "number out of range");
      single(Tok::Nat, j - i);
    } else if (s.substr(i, 3) == "<->") {
      single(Tok::Iff, 3);
    } else if (s.substr(i, 2) == "->") {
      single(Tok::Implies, 2);
    } else if (s.substr(i, 2) == ">=") {
      single(Tok::Geq, 2);
    } else {
      switch (c) {
        case '(': single(Tok::LParen, 1); break;
        case ')': single(Tok::RParen, 1); break;
        case '~': single(Tok::Not, 1); break;
        case '&': single(Tok::And, 1); break;
        case '|': single(Tok::Or, 1); break;
        case '=': single(Tok::Eq, 1); break;
        case '<': single(Tok::Less, 1); break;
        case '>': single(Tok::Greater, 1); break;
        default:
          throw ParseError(i, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back(t);
  }
  Token end;
  end.pos = s.size();
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Formula run() {
    Formula f = parse_arrow();
    if (peek().kind != Tok::End) fail("expected end of input");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(peek().pos, msg + ", found " + describe(peek().kind));
  }

  void expect(Tok k) {
    if (peek().kind != k) fail(std::string("expected ") + describe(k));
    take();
  }

  // arrow := disj (("->" | "<->") arrow)?
  Formula parse_arrow() {
    Formula lhs = parse_disj();
    if (peek().kind == Tok::Implies) {
      take();
      return Formula::implication(lhs, parse_arrow());
    }
    if (peek().kind == Tok::Iff) {
      take();
      return Formula::equivalence(lhs, parse_arrow());
    }
    return lhs;
  }

  Formula parse_disj() {
    Formula f = parse_conj();
    while (peek().kind == Tok::Or) {
      take();
      f = Formula::disjunction(f, parse_conj());
    }
    return f;
  }

  Formula parse_conj() {
    Formula f = parse_unary();
    while (peek().kind == Tok::And) {
      take();
      f = Formula::conjunction(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::Not) {
      take();
      return Formula::negation(parse_unary());
    }
    if (t.kind == Tok::Ident && t.text.starts_with("K_")) {
      std::string agent(t.text.substr(2));
      if (agent.empty()) fail("expected agent name after 'K_'");
      take();
      return Formula::know(std::move(agent), parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Ident:
        take();
        if (t.text == "T") return Formula::top();
        if (t.text == "F") return Formula::bottom();
        if (t.text.starts_with("att_")) {
          throw ParseError(t.pos, "attention atoms must be parenthesized");
        }
        return Formula::prop(std::string(t.text));
      case Tok::LParen: {
        if (peek(1).kind == Tok::Ident && peek(1).text.starts_with("att_") && is_comparison(peek(2).kind)) {
          return parse_attention_atom();
        }
        take();
        Formula inner = parse_arrow();
        expect(Tok::RParen);
        return inner;
      }
      default:
        fail("expected a formula");
    }
  }

  static bool is_comparison(Tok k) {
    return k == Tok::Eq || k == Tok::Less || k == Tok::Greater || k == Tok::Geq;
  }

  Formula parse_attention_atom() {
    expect(Tok::LParen);
    const Token id = take();
    std::string agent(id.text.substr(4));
    if (agent.empty()) throw ParseError(id.pos, "expected agent name after 'att_'");
    const Tok op = take().kind;
    if (peek().kind != Tok::Nat) fail("expected a natural number");
    const unsigned n = take().number;
    expect(Tok::RParen);
    switch (op) {
      case Tok::Eq: return Formula::att_eq(std::move(agent), n);
      case Tok::Less: return Formula::att_less(std::move(agent), n);
      case Tok::Greater: return Formula::att_greater(std::move(agent), n);
      default: return Formula::att_geq(std::move(agent), n);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).run(); }

Formula parse_formula(std::string_view text, const Signature& sig) {
  Formula f = parse_formula(text);
  validate(f, sig);
  return f;
}

}  // namespace attn
