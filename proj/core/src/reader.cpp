#include "lambdix/reader.hpp"

#include <charconv>
#include <sstream>

namespace lambdix {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::syntax: return "syntax";
    case ErrorCategory::analysis: return "analysis";
    case ErrorCategory::unbound: return "unbound";
    case ErrorCategory::type: return "type";
    case ErrorCategory::arity: return "arity";
    case ErrorCategory::arithmetic: return "arithmetic";
    case ErrorCategory::cyclic: return "cyclic";
    case ErrorCategory::internal: return "internal";
  }
  return "unknown";
}

namespace {

[[noreturn]] void syntax_error(const std::string& what, Position at) {
  throw Error(ErrorCategory::syntax,
              what + " at line " + std::to_string(at.line) + ", column " + std::to_string(at.column));
}

bool is_delimiter(char c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
    case '(': case ')': case '\'': case '!': case ';': case '"':
      return true;
    default:
      return false;
  }
}

bool looks_numeric(std::string_view text) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) i = 1;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  return true;
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (index_ < text_.size()) {
      char c = text_[index_];
      Position at = pos_;
      switch (c) {
        case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
          advance();
          break;
        case ';':
          while (index_ < text_.size() && text_[index_] != '\n') advance();
          break;
        case '(':
          advance();
          out.push_back({TokenKind::open_paren, "(", at});
          break;
        case ')':
          advance();
          out.push_back({TokenKind::close_paren, ")", at});
          break;
        case '\'':
          advance();
          out.push_back({TokenKind::quote_mark, "'", at});
          break;
        case '!':
          advance();
          out.push_back({TokenKind::excla_mark, "!", at});
          break;
        case '"':
          out.push_back(string_literal());
          break;
        default:
          out.push_back(atom());
          break;
      }
    }
    return out;
  }

 private:
  void advance() {
    if (text_[index_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++index_;
  }

  Token string_literal() {
    Position at = pos_;
    advance();  // opening quote
    std::string decoded;
    while (true) {
      if (index_ >= text_.size()) syntax_error("unterminated string literal", at);
      char c = text_[index_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (index_ >= text_.size()) syntax_error("unterminated string literal", at);
        char e = text_[index_];
        switch (e) {
          case 'n': decoded.push_back('\n'); break;
          case 't': decoded.push_back('\t'); break;
          default: decoded.push_back(e); break;
        }
        advance();
        continue;
      }
      decoded.push_back(c);
      advance();
    }
    return {TokenKind::string, std::move(decoded), at};
  }

  Token atom() {
    Position at = pos_;
    std::size_t start = index_;
    while (index_ < text_.size() && !is_delimiter(text_[index_])) advance();
    std::string_view text = text_.substr(start, index_ - start);
    if (looks_numeric(text)) {
      std::int64_t value = 0;
      std::string_view digits = text[0] == '+' ? text.substr(1) : text;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        syntax_error("integer literal out of range: " + std::string(text), at);
      }
      return {TokenKind::number, std::string(text), at, value};
    }
    return {TokenKind::symbol, std::string(text), at};
  }

  std::string_view text_;
  std::size_t index_ = 0;
  Position pos_;
};

SourceExpr read_one(std::span<const Token> tokens, std::size_t& i) {
  const Token& t = tokens[i++];
  switch (t.kind) {
    case TokenKind::number:
      return SourceExpr::number(t.number);
    case TokenKind::symbol:
      return SourceExpr::symbol(t.text);
    case TokenKind::string:
      return SourceExpr::string(t.text);
    case TokenKind::quote_mark:
    case TokenKind::excla_mark: {
      if (i >= tokens.size()) syntax_error("expected an expression after " + t.text, t.position);
      if (tokens[i].kind == TokenKind::close_paren) {
        syntax_error("expected an expression after " + t.text, tokens[i].position);
      }
      SourceExpr operand = read_one(tokens, i);
      const char* head = t.kind == TokenKind::quote_mark ? "quote" : "excla";
      return SourceExpr::list({SourceExpr::symbol(head), std::move(operand)});
    }
    case TokenKind::open_paren: {
      std::vector<SourceExpr> elements;
      while (true) {
        if (i >= tokens.size()) syntax_error("unbalanced parenthesis", t.position);
        if (tokens[i].kind == TokenKind::close_paren) {
          ++i;
          return SourceExpr::list(std::move(elements));
        }
        bool shorthand_first = elements.empty() && (tokens[i].kind == TokenKind::quote_mark ||
                                                    tokens[i].kind == TokenKind::excla_mark);
        elements.push_back(read_one(tokens, i));
        // `(! e)` is the operator written in head position: (excla e), not ((excla e)).
        if (shorthand_first && i < tokens.size() && tokens[i].kind == TokenKind::close_paren) {
          ++i;
          return std::move(elements.front());
        }
      }
    }
    case TokenKind::close_paren:
      syntax_error("unexpected )", t.position);
  }
  syntax_error("unreadable token", t.position);
}

void write(std::ostream& os, const SourceExpr& e) {
  std::visit(
      [&os](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SourceExpr::Symbol>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, SourceExpr::Number>) {
          os << n.value;
        } else if constexpr (std::is_same_v<T, SourceExpr::StringLit>) {
          os << '"';
          for (char c : n.text) {
            if (c == '"' || c == '\\') os << '\\' << c;
            else if (c == '\n') os << "\\n";
            else if (c == '\t') os << "\\t";
            else os << c;
          }
          os << '"';
        } else if constexpr (std::is_same_v<T, SourceExpr::List>) {
          os << '(';
          for (std::size_t k = 0; k < n.elements.size(); ++k) {
            if (k) os << ' ';
            write(os, n.elements[k]);
          }
          os << ')';
        } else {
          os << n.display;
        }
      },
      e.node());
}

}  // namespace

bool operator==(const SourceExpr& a, const SourceExpr& b) {
  if (a.node_.index() != b.node_.index()) return false;
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node_);
        if constexpr (std::is_same_v<T, SourceExpr::Symbol>) return x.name == y.name;
        else if constexpr (std::is_same_v<T, SourceExpr::Number>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, SourceExpr::StringLit>) return x.text == y.text;
        else if constexpr (std::is_same_v<T, SourceExpr::List>) return x.elements == y.elements;
        else return x.display == y.display;
      },
      a.node_);
}

std::vector<Token> tokenize(std::string_view text) { return Scanner(text).run(); }

std::optional<SourceExpr> read_expr(std::span<const Token> tokens, std::span<const Token>& rest) {
  if (tokens.empty()) {
    rest = tokens;
    return std::nullopt;
  }
  std::size_t i = 0;
  SourceExpr e = read_one(tokens, i);
  rest = tokens.subspan(i);
  return e;
}

std::vector<SourceExpr> read_program(std::string_view text) {
  std::vector<Token> tokens = tokenize(text);
  std::vector<SourceExpr> program;
  std::span<const Token> rest = tokens;
  while (auto e = read_expr(rest, rest)) program.push_back(std::move(*e));
  return program;
}

std::string to_string(const SourceExpr& expr) {
  std::ostringstream os;
  write(os, expr);
  return os.str();
}

}  // namespace lambdix
