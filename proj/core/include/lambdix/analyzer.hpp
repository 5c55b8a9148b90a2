#ifndef LAMBDIX_ANALYZER_HPP
#define LAMBDIX_ANALYZER_HPP

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "lambdix/reader.hpp"
#include "lambdix/value.hpp"

namespace lambdix {

enum class BindingKind { parameter, local };

// hops: lexical levels upward from the referencing struct (0 = itself).
struct LexicalAddress {
  std::size_t hops = 0;
  std::size_t offset = 0;
  BindingKind kind = BindingKind::parameter;

  friend bool operator==(const LexicalAddress&, const LexicalAddress&) = default;
};

struct TopBinding {
  std::string name;
  Slot slot;
  bool defined = false;
};

// Late-bound top level: entries are created on first mention and stay put,
// so compiled references can hold their address.
class TopLevelTable {
 public:
  TopBinding& intern(const std::string& name);
  TopBinding* find(const std::string& name);
  void define(const std::string& name, Slot slot);

 private:
  std::unordered_map<std::string, std::unique_ptr<TopBinding>> bindings_;
};

using ExprPtr = std::unique_ptr<CompiledExpr>;

struct CompiledExpr {
  struct Literal {
    Value value;
  };
  struct LocalRef {
    LexicalAddress address;
    LambdaStruct* target;  // the struct `address.hops` levels up
    std::string name;
  };
  struct TopRef {
    TopBinding* binding;
  };
  struct Conditional {
    ExprPtr test;
    ExprPtr then_branch;
    ExprPtr else_branch;
  };
  struct Application {
    ExprPtr head;
    std::vector<ExprPtr> args;
    LambdaStruct* site;  // struct whose body contains this call
  };
  struct LambdaRef {
    LambdaStruct* lambda;
  };
  struct Quote {
    Value datum;
  };
  struct Excla {
    ExprPtr arg;
    LambdaStruct* scope;  // innermost struct at the excla site
  };
  struct Let {
    LambdaStruct* frame;
  };

  using Node = std::variant<Literal, LocalRef, TopRef, Conditional, Application, LambdaRef, Quote, Excla, Let>;

  Node node;
};

enum class StructKind { top, function, let };

// The internal lambda structure: names, compiled code, lexical parent, and
// the dynamic link (the block currently installed for this level).
struct LambdaStruct {
  std::uint64_t id = 0;
  StructKind kind = StructKind::function;
  std::string display_name;
  std::vector<std::string> params;
  std::vector<std::string> locals;
  ExprPtr body;
  std::vector<ExprPtr> bindings;  // parallel to `locals`
  LambdaStruct* parent = nullptr;
  int depth = -1;  // top pseudo-struct is -1, top-level functions 0
  bool has_children = false;

  Block* current = nullptr;
  std::uint64_t current_serial = kNoBlock;
  std::uint64_t validated_gen = 0;

  static constexpr std::uint64_t kNoBlock = ~std::uint64_t{0};

  std::size_t slot_count() const { return params.size() + locals.size(); }
};

// Owns every lambda structure and every root of compiled code for the life
// of an interpreter.
class CodeStore {
 public:
  CodeStore();
  CodeStore(const CodeStore&) = delete;
  CodeStore& operator=(const CodeStore&) = delete;

  LambdaStruct& top() { return *structs_.front(); }
  LambdaStruct& make_struct(StructKind kind, LambdaStruct* parent, std::string display_name);
  const CompiledExpr& keep(ExprPtr expr);

  const std::deque<std::unique_ptr<LambdaStruct>>& structs() const { return structs_; }
  TopLevelTable& table() { return table_; }

 private:
  std::deque<std::unique_ptr<LambdaStruct>> structs_;
  std::deque<ExprPtr> roots_;
  TopLevelTable table_;
};

struct Resolution {
  LexicalAddress address;
  LambdaStruct* target;
};

// Analysis-time view of the lexical frames enclosing a point of the program.
class Scope {
 public:
  explicit Scope(const LambdaStruct* innermost) : innermost_(innermost) {}

  // Innermost frame first; parameters beat local definitions within a frame.
  std::optional<Resolution> resolve(const std::string& name) const;
  bool shadows(const std::string& name) const { return resolve(name).has_value(); }
  const LambdaStruct* innermost() const { return innermost_; }

 private:
  const LambdaStruct* innermost_;
};

struct TopLevelForm {
  enum class Kind { expression, define_value, define_function };

  Kind kind = Kind::expression;
  const CompiledExpr* expr = nullptr;  // expression or value definition
  LambdaStruct* function = nullptr;    // define_function
  TopBinding* binding = nullptr;
  std::string name;
};

// Converts quoted program text into constant list data.
Value quote_datum(const SourceExpr& expr);

class Analyzer {
 public:
  explicit Analyzer(CodeStore& store) : store_(store) {}

  TopLevelForm analyze_toplevel(const SourceExpr& form);
  ExprPtr analyze(const SourceExpr& expr, LambdaStruct& owner);
  LambdaStruct& make_lambda_struct(std::span<const SourceExpr> params, const SourceExpr& body,
                                   LambdaStruct& parent, std::string display_name);

 private:
  ExprPtr analyze_let(const std::vector<SourceExpr>& form, LambdaStruct& owner);
  ExprPtr analyze_application(const std::vector<SourceExpr>& form, LambdaStruct& owner);

  CodeStore& store_;
};

bool is_definition_keyword(const SourceExpr& e);

}  // namespace lambdix

#endif  // LAMBDIX_ANALYZER_HPP
