#include "lambdix/analyzer.hpp"

#include <algorithm>
#include <any>
#include <unordered_set>

namespace lambdix {

namespace {

[[noreturn]] void analysis_error(const std::string& what, const SourceExpr& where) {
  throw Error(ErrorCategory::analysis, what + ": " + to_string(where));
}

// The pieces of a `de` form: `(de name expr)`, `(de (name p...) body)` or
// `(de name (p...) body)`.
struct Definition {
  std::string name;
  bool is_function = false;
  std::span<const SourceExpr> params;
  const SourceExpr* body = nullptr;  // function body or value expression
};

Definition parse_definition(const SourceExpr& whole) {
  const auto& form = whole.elements();
  if (form.size() == 3 && form[1].is_symbol()) {
    return {form[1].symbol_name(), false, {}, &form[2]};
  }
  if (form.size() == 3 && form[1].is_list() && !form[1].elements().empty()) {
    const auto& header = form[1].elements();
    if (!header[0].is_symbol()) analysis_error("de needs a symbol name", whole);
    return {header[0].symbol_name(), true, std::span<const SourceExpr>(header).subspan(1), &form[2]};
  }
  if (form.size() == 4 && form[1].is_symbol() && form[2].is_list()) {
    return {form[1].symbol_name(), true, form[2].elements(), &form[3]};
  }
  if (form.size() >= 2 && !form[1].is_symbol() && !form[1].is_list()) {
    analysis_error("de needs a symbol name", whole);
  }
  analysis_error("malformed definition", whole);
}

ExprPtr make(CompiledExpr::Node node) { return std::make_unique<CompiledExpr>(CompiledExpr{std::move(node)}); }

}  // namespace

bool is_definition_keyword(const SourceExpr& e) {
  return e.is_symbol("de") || e.is_symbol("define") || e.is_symbol("def");
}

TopBinding& TopLevelTable::intern(const std::string& name) {
  auto& entry = bindings_[name];
  if (!entry) entry = std::make_unique<TopBinding>(TopBinding{name, Slot{}, false});
  return *entry;
}

TopBinding* TopLevelTable::find(const std::string& name) {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : it->second.get();
}

void TopLevelTable::define(const std::string& name, Slot slot) {
  TopBinding& b = intern(name);
  b.slot = std::move(slot);
  b.defined = true;
}

CodeStore::CodeStore() {
  auto top = std::make_unique<LambdaStruct>();
  top->id = 0;
  top->kind = StructKind::top;
  top->display_name = "top-level";
  top->depth = -1;
  structs_.push_back(std::move(top));
}

LambdaStruct& CodeStore::make_struct(StructKind kind, LambdaStruct* parent, std::string display_name) {
  auto s = std::make_unique<LambdaStruct>();
  s->id = structs_.size();
  s->kind = kind;
  s->display_name = std::move(display_name);
  s->parent = parent;
  s->depth = parent->depth + 1;
  parent->has_children = true;
  structs_.push_back(std::move(s));
  return *structs_.back();
}

const CompiledExpr& CodeStore::keep(ExprPtr expr) {
  roots_.push_back(std::move(expr));
  return *roots_.back();
}

std::optional<Resolution> Scope::resolve(const std::string& name) const {
  std::size_t hops = 0;
  for (const LambdaStruct* s = innermost_; s && s->kind != StructKind::top; s = s->parent, ++hops) {
    auto p = std::find(s->params.begin(), s->params.end(), name);
    if (p != s->params.end()) {
      return Resolution{{hops, static_cast<std::size_t>(p - s->params.begin()), BindingKind::parameter},
                        const_cast<LambdaStruct*>(s)};
    }
    auto l = std::find(s->locals.begin(), s->locals.end(), name);
    if (l != s->locals.end()) {
      return Resolution{
          {hops, s->params.size() + static_cast<std::size_t>(l - s->locals.begin()), BindingKind::local},
          const_cast<LambdaStruct*>(s)};
    }
  }
  return std::nullopt;
}

Value quote_datum(const SourceExpr& expr) {
  return std::visit(
      [](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SourceExpr::Symbol>) {
          return Value::symbol(n.name);
        } else if constexpr (std::is_same_v<T, SourceExpr::Number>) {
          return Value(n.value);
        } else if constexpr (std::is_same_v<T, SourceExpr::StringLit>) {
          return Value::string(n.text);
        } else if constexpr (std::is_same_v<T, SourceExpr::List>) {
          Value list = EmptyList{};
          for (auto it = n.elements.rbegin(); it != n.elements.rend(); ++it) {
            list = std::make_shared<Pair>(Pair{Slot(quote_datum(*it)), Slot(std::move(list))});
          }
          return list;
        } else {
          const Value* v = std::any_cast<Value>(&n.payload);
          if (!v) throw Error(ErrorCategory::internal, "foreign value embedded in program text");
          return *v;
        }
      },
      expr.node());
}

TopLevelForm Analyzer::analyze_toplevel(const SourceExpr& form) {
  LambdaStruct& top = store_.top();
  if (form.is_list() && !form.elements().empty() && is_definition_keyword(form.elements()[0])) {
    Definition def = parse_definition(form);
    TopLevelForm out;
    out.name = def.name;
    out.binding = &store_.table().intern(def.name);
    if (def.is_function) {
      out.kind = TopLevelForm::Kind::define_function;
      out.function = &make_lambda_struct(def.params, *def.body, top, def.name);
    } else {
      out.kind = TopLevelForm::Kind::define_value;
      out.expr = &store_.keep(analyze(*def.body, top));
    }
    return out;
  }
  TopLevelForm out;
  out.expr = &store_.keep(analyze(form, top));
  return out;
}

LambdaStruct& Analyzer::make_lambda_struct(std::span<const SourceExpr> params, const SourceExpr& body,
                                           LambdaStruct& parent, std::string display_name) {
  std::vector<std::string> names;
  for (const auto& p : params) {
    if (!p.is_symbol()) analysis_error("parameter is not a symbol", p);
    if (std::find(names.begin(), names.end(), p.symbol_name()) != names.end()) {
      analysis_error("duplicate parameter " + p.symbol_name(), body);
    }
    names.push_back(p.symbol_name());
  }
  LambdaStruct& s = store_.make_struct(StructKind::function, &parent, std::move(display_name));
  s.params = std::move(names);
  s.body = analyze(body, s);
  return s;
}

ExprPtr Analyzer::analyze(const SourceExpr& expr, LambdaStruct& owner) {
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SourceExpr::Symbol>) {
          if (auto r = Scope(&owner).resolve(n.name)) {
            return make(CompiledExpr::LocalRef{r->address, r->target, n.name});
          }
          return make(CompiledExpr::TopRef{&store_.table().intern(n.name)});
        } else if constexpr (std::is_same_v<T, SourceExpr::Number>) {
          return make(CompiledExpr::Literal{Value(n.value)});
        } else if constexpr (std::is_same_v<T, SourceExpr::StringLit>) {
          return make(CompiledExpr::Literal{Value::string(n.text)});
        } else if constexpr (std::is_same_v<T, Embedded>) {
          return make(CompiledExpr::Literal{quote_datum(expr)});
        } else {
          const auto& form = n.elements;
          if (form.empty()) return make(CompiledExpr::Literal{EmptyList{}});
          const SourceExpr& head = form[0];
          if (head.is_symbol() && !Scope(&owner).shadows(head.symbol_name())) {
            const std::string& h = head.symbol_name();
            if (h == "lambda") {
              if (form.size() != 3 || !form[1].is_list()) analysis_error("malformed lambda", expr);
              LambdaStruct& child = make_lambda_struct(form[1].elements(), form[2], owner, "lambda");
              return make(CompiledExpr::LambdaRef{&child});
            }
            if (h == "if") {
              if (form.size() != 4) analysis_error("if takes exactly three arguments", expr);
              return make(CompiledExpr::Conditional{analyze(form[1], owner), analyze(form[2], owner),
                                                    analyze(form[3], owner)});
            }
            if (h == "let") return analyze_let(form, owner);
            if (h == "quote") {
              if (form.size() != 2) analysis_error("quote takes one argument", expr);
              return make(CompiledExpr::Quote{quote_datum(form[1])});
            }
            if (h == "excla") {
              if (form.size() != 2) analysis_error("excla takes one argument", expr);
              return make(CompiledExpr::Excla{analyze(form[1], owner), &owner});
            }
            if (is_definition_keyword(head)) {
              analysis_error("definitions are only allowed at top level or as let bindings", expr);
            }
          }
          return analyze_application(form, owner);
        }
      },
      expr.node());
}

ExprPtr Analyzer::analyze_application(const std::vector<SourceExpr>& form, LambdaStruct& owner) {
  CompiledExpr::Application app;
  app.head = analyze(form[0], owner);
  app.args.reserve(form.size() - 1);
  for (std::size_t i = 1; i < form.size(); ++i) app.args.push_back(analyze(form[i], owner));
  app.site = &owner;
  return make(std::move(app));
}

ExprPtr Analyzer::analyze_let(const std::vector<SourceExpr>& form, LambdaStruct& owner) {
  const SourceExpr whole = SourceExpr::list(form);
  if (form.size() != 3 || !form[1].is_list()) analysis_error("malformed let", whole);

  struct Binding {
    std::string name;
    bool is_function = false;
    std::span<const SourceExpr> params;
    const SourceExpr* expr = nullptr;
  };
  std::vector<Binding> bindings;
  for (const SourceExpr& b : form[1].elements()) {
    if (!b.is_list()) analysis_error("malformed let binding", b);
    const auto& parts = b.elements();
    if (parts.size() >= 3 && is_definition_keyword(parts[0])) {
      Definition def = parse_definition(b);
      bindings.push_back({def.name, def.is_function, def.params, def.body});
    } else if (parts.size() == 2 && parts[0].is_symbol()) {
      bindings.push_back({parts[0].symbol_name(), false, {}, &parts[1]});
    } else {
      analysis_error("malformed let binding", b);
    }
  }

  LambdaStruct& frame = store_.make_struct(StructKind::let, &owner, "let");
  for (const auto& b : bindings) {
    if (std::find(frame.locals.begin(), frame.locals.end(), b.name) != frame.locals.end()) {
      analysis_error("duplicate local definition " + b.name, whole);
    }
    frame.locals.push_back(b.name);
  }
  for (const auto& b : bindings) {
    if (b.is_function) {
      LambdaStruct& fn = make_lambda_struct(b.params, *b.expr, frame, b.name);
      frame.bindings.push_back(make(CompiledExpr::LambdaRef{&fn}));
    } else {
      frame.bindings.push_back(analyze(*b.expr, frame));
    }
  }
  frame.body = analyze(form[2], frame);
  return make(CompiledExpr::Let{&frame});
}

}  // namespace lambdix
