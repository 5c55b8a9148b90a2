#ifndef LAMBDIX_READER_HPP
#define LAMBDIX_READER_HPP

#include <any>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lambdix/error.hpp"

namespace lambdix {

struct Position {
  int line = 1;
  int column = 1;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

enum class TokenKind { open_paren, close_paren, quote_mark, excla_mark, number, symbol, string };

struct Token {
  TokenKind kind;
  std::string text;  // symbol name, decoded string contents, or number digits
  Position position;
  std::int64_t number = 0;
};

class SourceExpr;

// A runtime value spliced into program text by `excla`.  The reader never
// produces one; each interpreter stores its own value type in `payload`.
struct Embedded {
  Embedded(std::any payload, std::string display) : payload(std::move(payload)), display(std::move(display)) {}

  std::any payload;
  std::string display;
};

class SourceExpr {
 public:
  struct Symbol {
    std::string name;
  };
  struct Number {
    std::int64_t value;
  };
  struct StringLit {
    std::string text;
  };
  struct List {
    std::vector<SourceExpr> elements;
  };

  using Node = std::variant<Symbol, Number, StringLit, List, Embedded>;

  SourceExpr() : node_(List{}) {}
  explicit SourceExpr(Node node) : node_(std::move(node)) {}

  static SourceExpr symbol(std::string name) { return SourceExpr(Symbol{std::move(name)}); }
  static SourceExpr number(std::int64_t v) { return SourceExpr(Number{v}); }
  static SourceExpr string(std::string text) { return SourceExpr(StringLit{std::move(text)}); }
  static SourceExpr list(std::vector<SourceExpr> elements) { return SourceExpr(List{std::move(elements)}); }

  const Node& node() const { return node_; }

  bool is_symbol() const { return std::holds_alternative<Symbol>(node_); }
  bool is_symbol(std::string_view name) const {
    auto* s = std::get_if<Symbol>(&node_);
    return s && s->name == name;
  }
  bool is_list() const { return std::holds_alternative<List>(node_); }

  const std::string& symbol_name() const { return std::get<Symbol>(node_).name; }
  const std::vector<SourceExpr>& elements() const { return std::get<List>(node_).elements; }

  // Structural equality; embedded values compare by display text.
  friend bool operator==(const SourceExpr& a, const SourceExpr& b);

 private:
  Node node_;
};

std::vector<Token> tokenize(std::string_view text);

// Reads one expression starting at tokens.front().  Returns std::nullopt at
// end of input; `rest` receives the unconsumed tail.
std::optional<SourceExpr> read_expr(std::span<const Token> tokens, std::span<const Token>& rest);

std::vector<SourceExpr> read_program(std::string_view text);

// Text form that read_program maps back to an equal SourceExpr.
std::string to_string(const SourceExpr& expr);

}  // namespace lambdix

#endif  // LAMBDIX_READER_HPP
