#include "lambdix/evaluator.hpp"

#include <algorithm>
#include <any>
#include <array>
#include <iostream>

#include "lambdix/builtins.hpp"
#include "lambdix/stack.hpp"

namespace lambdix {

namespace {

std::size_t stack_bytes_for(std::uint64_t depth_limit) {
  constexpr std::size_t kPerLevel = 4 * 1024;
  constexpr std::size_t kMin = std::size_t{64} << 20;
  constexpr std::size_t kMax = std::size_t{2} << 30;
  std::size_t wanted = static_cast<std::size_t>(std::min<std::uint64_t>(depth_limit, kMax / kPerLevel)) * kPerLevel;
  return std::clamp(wanted, kMin, kMax);
}

[[noreturn]] void check_failed(const std::string& what) {
  throw Error(ErrorCategory::internal, "environment invariant violated: " + what);
}

}  // namespace

std::string_view strategy_name(Strategy s) { return s == Strategy::value ? "value" : "need"; }

std::string Outcome::summary() const {
  switch (kind) {
    case OutcomeKind::value: return "value: " + text;
    case OutcomeKind::limit_exceeded: return "limit";
    case OutcomeKind::error: return "error: " + std::string(category_name(category));
  }
  return "?";
}

class Interpreter::DepthGuard {
 public:
  explicit DepthGuard(Interpreter& in) : in_(in) {
    if (++in_.depth_ > in_.options_.depth_limit) {
      --in_.depth_;
      throw LimitExceeded(LimitKind::depth);
    }
  }
  ~DepthGuard() { --in_.depth_; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;

 private:
  Interpreter& in_;
};

Interpreter::Interpreter(Options options, std::ostream* out)
    : options_(options), out_(out ? out : &std::cout), env_(code_, counters_) {
  install_builtins(*this);
}

Interpreter::~Interpreter() = default;

void Interpreter::on_stack(const std::function<void()>& fn) {
  run_on_large_stack(stack_bytes_for(options_.depth_limit), fn);
}

Slot Interpreter::evaluate(const SourceExpr& form) {
  Slot result;
  on_stack([&] {
    TopLevelForm f = Analyzer(code_).analyze_toplevel(form);
    steps_ = 0;
    LambdaStruct& top = code_.top();
    switch (f.kind) {
      case TopLevelForm::Kind::expression:
        result = Slot(eval(*f.expr));
        break;
      case TopLevelForm::Kind::define_function: {
        code_.table().define(f.name, Slot(Value(Closure{f.function, env_.top_block()})));
        result = Slot(Value::symbol(f.name));
        break;
      }
      case TopLevelForm::Kind::define_value: {
        defining_ = f.binding;
        Slot s;
        try {
          s = argument(*f.expr, top);
        } catch (...) {
          defining_ = nullptr;
          throw;
        }
        defining_ = nullptr;
        code_.table().define(f.name, s);
        result = s;
        break;
      }
    }
  });
  return result;
}

Value Interpreter::force(Slot slot) {
  Value v;
  on_stack([&] {
    steps_ = 0;
    v = force_slot(slot);
  });
  return v;
}

std::string Interpreter::render(const Slot& slot) {
  std::string text;
  on_stack([&] {
    Slot s = slot;
    text = render_value(*this, force_slot(s));
  });
  return text;
}

Outcome Interpreter::run(const SourceExpr& form, bool render_result) {
  Outcome out;
  try {
    Slot s = evaluate(form);
    if (render_result) out.text = render(s);
  } catch (const Error& e) {
    out.kind = OutcomeKind::error;
    out.category = e.category();
    out.message = e.what();
  } catch (const LimitExceeded& e) {
    out.kind = OutcomeKind::limit_exceeded;
    out.limit = e.kind();
    out.message = e.what();
  }
  return out;
}

Outcome Interpreter::run_with_limit(const SourceExpr& form, std::uint64_t step_limit) {
  std::uint64_t saved = options_.step_limit;
  options_.step_limit = step_limit;
  Outcome out = run(form, true);
  options_.step_limit = saved;
  return out;
}

std::vector<Outcome> Interpreter::run_program(std::string_view text, bool render_results) {
  std::vector<SourceExpr> forms;
  try {
    forms = read_program(text);
  } catch (const Error& e) {
    Outcome bad;
    bad.kind = OutcomeKind::error;
    bad.category = e.category();
    bad.message = e.what();
    return {bad};
  }
  std::vector<Outcome> outcomes;
  for (const auto& f : forms) outcomes.push_back(run(f, render_results));
  return outcomes;
}

Value Interpreter::eval_text(std::string_view text) {
  Slot last = Slot(Value(EmptyList{}));
  for (const auto& f : read_program(text)) last = evaluate(f);
  return force(last);
}

void Interpreter::count_immediate_suspension() {
  ++counters_.thunks_created;
  ++counters_.thunks_forced;
}

Value Interpreter::force_slot(Slot& slot, const std::string* name) {
  switch (slot.state()) {
    case Slot::State::ready:
      return slot.value();
    case Slot::State::suspended: {
      std::shared_ptr<Thunk> t = slot.thunk();
      Value v = force_thunk(*t, name);
      slot.settle(v);
      return v;
    }
    case Slot::State::unset:
      break;
  }
  throw Error(ErrorCategory::unbound, (name ? *name : std::string("value")) + " not yet defined");
}

Value Interpreter::force_thunk(Thunk& t, const std::string* name) {
  switch (t.state) {
    case ThunkState::forced:
      return t.value;
    case ThunkState::in_progress:
      throw Error(ErrorCategory::cyclic,
                  "cyclic definition" + (name ? " of " + *name : std::string()));
    case ThunkState::unforced:
      break;
  }
  t.state = ThunkState::in_progress;
  ++counters_.thunks_forced;
  try {
    DepthGuard depth(*this);
    Value v;
    {
      SwitchScope scope(env_, *t.owner, *t.block);
      if (options_.check_invariants && !Environment::chain_coherent(*t.owner)) check_failed("thunk install");
      v = eval(*t.expr);
    }
    t.value = v;
    t.state = ThunkState::forced;
    t.block.reset();
    return v;
  } catch (...) {
    t.state = ThunkState::unforced;
    throw;
  }
}

Value Interpreter::eval(const CompiledExpr& expr) {
  if (stack_nearly_exhausted()) throw LimitExceeded(LimitKind::depth);
  const CompiledExpr* e = &expr;
  while (const auto* n = std::get_if<CompiledExpr::Conditional>(&e->node)) {
    Value test = eval(*n->test);
    if (!test.is_boolean()) {
      throw Error(ErrorCategory::type, std::string("if test must be a boolean, got ") + test.type_name());
    }
    e = test.as_boolean() ? n->then_branch.get() : n->else_branch.get();
  }
  if (const auto* n = std::get_if<CompiledExpr::Application>(&e->node)) return apply(*n);
  if (const auto* n = std::get_if<CompiledExpr::LocalRef>(&e->node)) {
    return force_slot(env_.lookup_at(*n->target, n->address.offset), &n->name);
  }
  if (const auto* n = std::get_if<CompiledExpr::Literal>(&e->node)) return n->value;
  if (const auto* n = std::get_if<CompiledExpr::TopRef>(&e->node)) {
    TopBinding& b = *n->binding;
    if (!b.defined) {
      if (&b == defining_) throw Error(ErrorCategory::cyclic, b.name + " is defined in terms of itself");
      throw Error(ErrorCategory::unbound, b.name + " not defined");
    }
    ++counters_.lookups;
    return force_slot(b.slot, &b.name);
  }
  if (const auto* n = std::get_if<CompiledExpr::LambdaRef>(&e->node)) {
    return Closure{n->lambda, n->lambda->parent->current->shared_from_this()};
  }
  if (const auto* n = std::get_if<CompiledExpr::Quote>(&e->node)) return n->datum;
  if (const auto* n = std::get_if<CompiledExpr::Excla>(&e->node)) return eval_excla(*n);
  return eval_let(*std::get<CompiledExpr::Let>(e->node).frame);
}

// The argument as passed to a call site.  Under call-by-need anything that
// could take work becomes a suspension of the caller's environment.
Slot Interpreter::argument(const CompiledExpr& expr, LambdaStruct& site) {
  if (const auto* lit = std::get_if<CompiledExpr::Literal>(&expr.node)) return Slot(lit->value);
  if (std::holds_alternative<CompiledExpr::LambdaRef>(expr.node)) return Slot(eval(expr));
  if (options_.strategy == Strategy::value) {
    Value v = eval(expr);
    if (!std::holds_alternative<CompiledExpr::LocalRef>(expr.node) &&
        !std::holds_alternative<CompiledExpr::TopRef>(expr.node)) {
      count_immediate_suspension();
    }
    return Slot(std::move(v));
  }
  if (const auto* ref = std::get_if<CompiledExpr::LocalRef>(&expr.node)) {
    Slot& s = env_.lookup_at(*ref->target, ref->address.offset);
    if (!s.is_unset()) return s;
  } else if (const auto* top = std::get_if<CompiledExpr::TopRef>(&expr.node)) {
    if (top->binding->defined) {
      ++counters_.lookups;
      return top->binding->slot;
    }
  }
  return suspend(expr, site);
}

Slot Interpreter::suspend(const CompiledExpr& expr, LambdaStruct& site) {
  ++counters_.thunks_created;
  return Slot(std::make_shared<Thunk>(&expr, &site, site.current->shared_from_this()));
}

Value Interpreter::apply(const CompiledExpr::Application& app) {
  Value callee = eval(*app.head);
  if (callee.is_closure()) {
    const Closure& c = callee.as_closure();
    const LambdaStruct& fn = *c.lambda;
    if (app.args.size() != fn.params.size()) {
      throw Error(ErrorCategory::arity, fn.display_name + " expects " + std::to_string(fn.params.size()) +
                                            " argument" + (fn.params.size() == 1 ? "" : "s") + ", got " +
                                            std::to_string(app.args.size()));
    }
    std::vector<Slot> args;
    args.reserve(app.args.size());
    for (const auto& a : app.args) args.push_back(argument(*a, *app.site));
    Closure keep = c;
    Value result = call(keep, std::move(args));
    if (options_.check_invariants && !Environment::chain_coherent(*app.site)) check_failed("return");
    return result;
  }
  if (callee.is_primitive()) {
    const PrimitiveSpec& p = *callee.as_primitive();
    if (app.args.size() != p.arity) {
      throw Error(ErrorCategory::arity, p.name + " expects " + std::to_string(p.arity) + " argument" +
                                            (p.arity == 1 ? "" : "s") + ", got " + std::to_string(app.args.size()));
    }
    std::array<Slot, 4> buffer;
    for (std::size_t i = 0; i < app.args.size(); ++i) {
      buffer[i] = p.forcing == ArgForcing::none ? argument(*app.args[i], *app.site) : Slot(eval(*app.args[i]));
    }
    Slot result = p.fn(*this, std::span<Slot>(buffer.data(), app.args.size()));
    return force_slot(result);
  }
  throw Error(ErrorCategory::type, std::string(callee.type_name()) + " is not a function");
}

Value Interpreter::call(const Closure& closure, std::vector<Slot> args) {
  ++counters_.closure_calls;
  if (options_.step_limit && ++steps_ > options_.step_limit) throw LimitExceeded(LimitKind::steps);
  DepthGuard depth(*this);
  LambdaStruct& fn = *closure.lambda;
  std::shared_ptr<Block> block = env_.new_block(fn, std::move(args), closure.env);
  SwitchScope scope(env_, fn, *block);
  if (options_.check_invariants && !Environment::chain_coherent(fn)) check_failed("call install");
  return eval(*fn.body);
}

Value Interpreter::eval_let(const LambdaStruct& const_frame) {
  LambdaStruct& frame = const_cast<LambdaStruct&>(const_frame);
  std::shared_ptr<Block> block =
      env_.new_block(frame, std::vector<Slot>(frame.locals.size()), frame.parent->current->shared_from_this());
  SwitchScope scope(env_, frame, *block);
  if (options_.check_invariants && !Environment::chain_coherent(frame)) check_failed("let install");
  for (std::size_t i = 0; i < frame.bindings.size(); ++i) {
    const CompiledExpr& b = *frame.bindings[i];
    if (options_.strategy == Strategy::need && !std::holds_alternative<CompiledExpr::Literal>(b.node) &&
        !std::holds_alternative<CompiledExpr::LambdaRef>(b.node)) {
      // Siblings may not be filled in yet, so never share their slots here.
      block->slots[i] = suspend(b, frame);
    } else {
      block->slots[i] = argument(b, frame);
    }
  }
  return eval(*frame.body);
}

Value Interpreter::eval_excla(const CompiledExpr::Excla& excla) {
  Value datum = eval(*excla.arg);
  SourceExpr text = to_source(datum);
  ExprPtr compiled = Analyzer(code_).analyze(text, *excla.scope);
  const CompiledExpr& kept = code_.keep(std::move(compiled));
  return eval(kept);
}

SourceExpr Interpreter::to_source(const Value& v) {
  if (v.is_number()) return SourceExpr::number(v.as_number());
  if (v.is_symbol()) return SourceExpr::symbol(v.symbol_name());
  if (v.is_string()) return SourceExpr::string(v.string_text());
  if (v.is_empty_list()) return SourceExpr::list({});
  if (v.is_pair()) {
    std::vector<SourceExpr> elements;
    Value cursor = v;
    while (cursor.is_pair()) {
      std::shared_ptr<Pair> p = cursor.as_pair();
      elements.push_back(to_source(force_slot(p->head)));
      cursor = force_slot(p->tail);
    }
    if (!cursor.is_empty_list()) {
      throw Error(ErrorCategory::analysis, "excla needs a proper list, got a tail of " +
                                               std::string(cursor.type_name()));
    }
    return SourceExpr::list(std::move(elements));
  }
  return SourceExpr(Embedded{std::any(v), render_value(*this, v)});
}

}  // namespace lambdix
