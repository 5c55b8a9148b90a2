#ifndef LAMBDIX_VALUE_HPP
#define LAMBDIX_VALUE_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace lambdix {

struct LambdaStruct;
struct PrimitiveSpec;
struct CompiledExpr;
struct Pair;
struct Block;
struct Thunk;

struct EmptyList {
  friend bool operator==(EmptyList, EmptyList) { return true; }
};

struct StringVal {
  std::shared_ptr<const std::string> text;
};

struct SymbolVal {
  std::shared_ptr<const std::string> name;
};

// A functional value: a lambda structure plus the block of its defining
// environment.
struct Closure {
  LambdaStruct* lambda = nullptr;
  std::shared_ptr<Block> env;
};

class Value {
 public:
  using Storage = std::variant<EmptyList, std::int64_t, bool, StringVal, SymbolVal, std::shared_ptr<Pair>, Closure,
                               const PrimitiveSpec*>;

  Value() = default;
  Value(std::int64_t n) : v_(n) {}
  Value(bool b) : v_(b) {}
  Value(EmptyList e) : v_(e) {}
  Value(StringVal s) : v_(std::move(s)) {}
  Value(SymbolVal s) : v_(std::move(s)) {}
  Value(std::shared_ptr<Pair> p) : v_(std::move(p)) {}
  Value(Closure c) : v_(std::move(c)) {}
  Value(const PrimitiveSpec* p) : v_(p) {}

  static Value string(std::string text) { return StringVal{std::make_shared<const std::string>(std::move(text))}; }
  static Value symbol(std::string name) { return SymbolVal{std::make_shared<const std::string>(std::move(name))}; }

  const Storage& storage() const { return v_; }

  bool is_number() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_boolean() const { return std::holds_alternative<bool>(v_); }
  bool is_empty_list() const { return std::holds_alternative<EmptyList>(v_); }
  bool is_pair() const { return std::holds_alternative<std::shared_ptr<Pair>>(v_); }
  bool is_closure() const { return std::holds_alternative<Closure>(v_); }
  bool is_primitive() const { return std::holds_alternative<const PrimitiveSpec*>(v_); }
  bool is_symbol() const { return std::holds_alternative<SymbolVal>(v_); }
  bool is_string() const { return std::holds_alternative<StringVal>(v_); }

  std::int64_t as_number() const { return std::get<std::int64_t>(v_); }
  bool as_boolean() const { return std::get<bool>(v_); }
  const std::shared_ptr<Pair>& as_pair() const { return std::get<std::shared_ptr<Pair>>(v_); }
  const Closure& as_closure() const { return std::get<Closure>(v_); }
  const PrimitiveSpec* as_primitive() const { return std::get<const PrimitiveSpec*>(v_); }
  const std::string& symbol_name() const { return *std::get<SymbolVal>(v_).name; }
  const std::string& string_text() const { return *std::get<StringVal>(v_).text; }

  // Human-readable type name used in diagnostics.
  const char* type_name() const;

 private:
  Storage v_;
};

enum class ThunkState : std::uint8_t { unforced, in_progress, forced };

// A suspended computation: an expression of `owner`'s body together with the
// block that was current for `owner` when the suspension was built.
struct Thunk {
  Thunk(const CompiledExpr* expr, LambdaStruct* owner, std::shared_ptr<Block> block)
      : expr(expr), owner(owner), block(std::move(block)) {}

  const CompiledExpr* expr;
  LambdaStruct* owner;
  std::shared_ptr<Block> block;  // released once forced
  ThunkState state = ThunkState::unforced;
  Value value;
};

// Either a forced value or a suspension.  `unset` only occurs for let
// bindings under call-by-value before their turn comes.
class Slot {
 public:
  enum class State : std::uint8_t { unset, ready, suspended };

  Slot() = default;
  Slot(Value v) : state_(State::ready), value_(std::move(v)) {}
  explicit Slot(std::shared_ptr<Thunk> t) : state_(State::suspended), thunk_(std::move(t)) {}

  State state() const { return state_; }
  bool is_ready() const { return state_ == State::ready; }
  bool is_suspended() const { return state_ == State::suspended; }
  bool is_unset() const { return state_ == State::unset; }

  const Value& value() const { return value_; }
  const std::shared_ptr<Thunk>& thunk() const { return thunk_; }

  // Replaces a suspension by its memoized result.
  void settle(Value v) {
    value_ = std::move(v);
    thunk_.reset();
    state_ = State::ready;
  }

 private:
  State state_ = State::unset;
  Value value_;
  std::shared_ptr<Thunk> thunk_;
};

struct Pair {
  Slot head;
  Slot tail;
};

// One activation of a lambda structure (or a let level).
struct Block : std::enable_shared_from_this<Block> {
  Block(LambdaStruct* owner, std::shared_ptr<Block> parent, std::vector<Slot> slots, std::uint64_t serial)
      : owner(owner), parent(std::move(parent)), slots(std::move(slots)), serial(serial) {}

  LambdaStruct* owner;
  std::shared_ptr<Block> parent;  // block of the defining environment
  std::vector<Slot> slots;
  std::uint64_t serial;  // unique per interpreter; dynamic links compare serials
};

}  // namespace lambdix

#endif  // LAMBDIX_VALUE_HPP
