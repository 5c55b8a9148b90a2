#include "lambdix/oracle.hpp"

#include <algorithm>
#include <any>
#include <iostream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <variant>

#include "lambdix/stack.hpp"

namespace lambdix::oracle {

namespace {

struct OPair;
struct OClosure;
struct Prim;
struct Frame;
struct Cell;

struct OStr {
  std::string text;
};
struct OSym {
  std::string name;
};

using OValue = std::variant<EmptyList, std::int64_t, bool, OStr, OSym, std::shared_ptr<OPair>,
                            std::shared_ptr<OClosure>, const Prim*>;
using CellPtr = std::shared_ptr<Cell>;
using Env = std::shared_ptr<Frame>;  // nullptr is the top level

struct Cell {
  enum class State { unset, pending, forcing, done };
  State state = State::unset;
  const SourceExpr* expr = nullptr;
  Env env;
  OValue value;
};

CellPtr done(OValue v) {
  auto c = std::make_shared<Cell>();
  c->state = Cell::State::done;
  c->value = std::move(v);
  return c;
}

struct OPair {
  CellPtr head;
  CellPtr tail;
};

struct OClosure {
  std::vector<std::string> params;
  const SourceExpr* body;
  Env env;
  std::string name;
  const SourceExpr* node;  // identity together with env
};

struct Frame {
  std::vector<std::string> names;
  std::vector<CellPtr> cells;
  Env parent;
};

enum class Forcing { strict, whnf, lazy };

struct Prim {
  std::string name;
  std::size_t arity;
  Forcing forcing;
};

const std::vector<Prim>& prims() {
  static const std::vector<Prim> table{
      {"+", 2, Forcing::strict},   {"-", 2, Forcing::strict},   {"*", 2, Forcing::strict},
      {"/", 2, Forcing::strict},   {"mod", 2, Forcing::strict}, {"<", 2, Forcing::strict},
      {"<=", 2, Forcing::strict},  {">", 2, Forcing::strict},   {">=", 2, Forcing::strict},
      {"=", 2, Forcing::strict},   {"cons", 2, Forcing::lazy},  {"car", 1, Forcing::whnf},
      {"cdr", 1, Forcing::whnf},   {"cadr", 1, Forcing::whnf},  {"nullist", 1, Forcing::whnf},
      {"atom", 1, Forcing::whnf},  {"print", 1, Forcing::strict},
  };
  return table;
}

const char* type_of(const OValue& v) {
  static const char* names[] = {"empty list", "number", "boolean", "string",
                                "symbol",     "pair",   "closure", "primitive"};
  return names[v.index()];
}

[[noreturn]] void fail(ErrorCategory c, const std::string& what) { throw Error(c, what); }

bool is_keyword(const SourceExpr& e) { return e.is_symbol("de") || e.is_symbol("define") || e.is_symbol("def"); }

struct Def {
  std::string name;
  bool is_function = false;
  std::vector<SourceExpr> params;
  const SourceExpr* body = nullptr;
};

Def parse_def(const SourceExpr& whole) {
  const auto& f = whole.elements();
  if (f.size() == 3 && f[1].is_symbol()) return {f[1].symbol_name(), false, {}, &f[2]};
  if (f.size() == 3 && f[1].is_list() && !f[1].elements().empty()) {
    const auto& h = f[1].elements();
    if (!h[0].is_symbol()) fail(ErrorCategory::analysis, "bad definition name");
    return {h[0].symbol_name(), true, std::vector<SourceExpr>(h.begin() + 1, h.end()), &f[2]};
  }
  if (f.size() == 4 && f[1].is_symbol() && f[2].is_list()) return {f[1].symbol_name(), true, f[2].elements(), &f[3]};
  fail(ErrorCategory::analysis, "malformed definition");
}

std::vector<std::string> param_names(const std::vector<SourceExpr>& params) {
  std::vector<std::string> names;
  for (const auto& p : params) {
    if (!p.is_symbol()) fail(ErrorCategory::analysis, "parameter is not a symbol");
    if (std::find(names.begin(), names.end(), p.symbol_name()) != names.end()) {
      fail(ErrorCategory::analysis, "duplicate parameter");
    }
    names.push_back(p.symbol_name());
  }
  return names;
}

// A let binding after parsing: `(de ...)` forms or `(name expr)`.
Def let_binding(const SourceExpr& b) {
  if (!b.is_list()) fail(ErrorCategory::analysis, "malformed let binding");
  const auto& parts = b.elements();
  if (parts.size() >= 3 && is_keyword(parts[0])) return parse_def(b);
  if (parts.size() == 2 && parts[0].is_symbol()) return {parts[0].symbol_name(), false, {}, &parts[1]};
  fail(ErrorCategory::analysis, "malformed let binding");
}

bool is_literal(const SourceExpr& e) {
  return std::holds_alternative<SourceExpr::Number>(e.node()) ||
         std::holds_alternative<SourceExpr::StringLit>(e.node()) ||
         std::holds_alternative<Embedded>(e.node()) || (e.is_list() && e.elements().empty());
}

// Static well-formedness, checked over a whole form before it runs.
// `bound` holds every locally bound name in scope.
void validate(const SourceExpr& e, std::vector<std::string>& bound);

bool bound_in(const std::vector<std::string>& bound, const std::string& name) {
  return std::find(bound.begin(), bound.end(), name) != bound.end();
}

void validate_function(const std::vector<SourceExpr>& params, const SourceExpr& body, std::vector<std::string>& bound) {
  auto names = param_names(params);
  bound.insert(bound.end(), names.begin(), names.end());
  validate(body, bound);
  bound.resize(bound.size() - names.size());
}

void validate(const SourceExpr& e, std::vector<std::string>& bound) {
  if (!e.is_list() || e.elements().empty()) return;
  const auto& f = e.elements();
  if (f[0].is_symbol() && !bound_in(bound, f[0].symbol_name())) {
    const std::string& h = f[0].symbol_name();
    if (h == "lambda") {
      if (f.size() != 3 || !f[1].is_list()) fail(ErrorCategory::analysis, "malformed lambda");
      validate_function(f[1].elements(), f[2], bound);
      return;
    }
    if (h == "if") {
      if (f.size() != 4) fail(ErrorCategory::analysis, "malformed if");
      for (std::size_t i = 1; i < 4; ++i) validate(f[i], bound);
      return;
    }
    if (h == "let") {
      if (f.size() != 3 || !f[1].is_list()) fail(ErrorCategory::analysis, "malformed let");
      std::vector<Def> defs;
      std::vector<std::string> names;
      for (const auto& b : f[1].elements()) defs.push_back(let_binding(b));
      for (const auto& d : defs) {
        if (std::find(names.begin(), names.end(), d.name) != names.end()) {
          fail(ErrorCategory::analysis, "duplicate local definition");
        }
        names.push_back(d.name);
      }
      bound.insert(bound.end(), names.begin(), names.end());
      for (const auto& d : defs) {
        if (d.is_function) {
          validate_function(d.params, *d.body, bound);
        } else {
          validate(*d.body, bound);
        }
      }
      validate(f[2], bound);
      bound.resize(bound.size() - names.size());
      return;
    }
    if (h == "quote") {
      if (f.size() != 2) fail(ErrorCategory::analysis, "malformed quote");
      return;
    }
    if (h == "excla") {
      if (f.size() != 2) fail(ErrorCategory::analysis, "malformed excla");
      validate(f[1], bound);
      return;
    }
    if (is_keyword(f[0])) fail(ErrorCategory::analysis, "definition inside an expression");
  }
  for (const auto& x : f) validate(x, bound);
}

std::size_t stack_bytes(std::uint64_t depth_limit) {
  constexpr std::size_t kPerLevel = 4 * 1024;
  constexpr std::size_t kMax = std::size_t{2} << 30;
  std::size_t wanted =
      static_cast<std::size_t>(std::min<std::uint64_t>(depth_limit, kMax / kPerLevel)) * kPerLevel;
  return std::clamp(wanted, std::size_t{64} << 20, kMax);
}

}  // namespace

struct ReferenceInterpreter::State {
  Options options;
  std::ostream* out;
  std::unordered_map<std::string, CellPtr> globals;
  std::deque<SourceExpr> texts;  // forms and excla results; closures point into them
  std::uint64_t steps = 0;
  std::uint64_t depth = 0;
  const std::string* defining = nullptr;

  struct Deeper {
    explicit Deeper(State& s) : s(s) {
      if (++s.depth > s.options.depth_limit) {
        --s.depth;
        throw LimitExceeded(LimitKind::depth);
      }
    }
    ~Deeper() { --s.depth; }
    State& s;
  };

  State(Options o, std::ostream* os) : options(o), out(os) {
    for (const auto& p : prims()) globals[p.name] = done(&p);
    globals["true"] = done(true);
    globals["false"] = done(false);
  }

  static CellPtr local(const Env& env, const std::string& name) {
    for (const Frame* f = env.get(); f; f = f->parent.get()) {
      for (std::size_t i = 0; i < f->names.size(); ++i) {
        if (f->names[i] == name) return f->cells[i];
      }
    }
    return nullptr;
  }

  static std::vector<std::string> names_in(const Env& env) {
    std::vector<std::string> names;
    for (const Frame* f = env.get(); f; f = f->parent.get()) names.insert(names.end(), f->names.begin(), f->names.end());
    return names;
  }

  bool is_lambda_form(const SourceExpr& e, const Env& env) const {
    return e.is_list() && !e.elements().empty() && e.elements()[0].is_symbol("lambda") && !local(env, "lambda");
  }

  OValue force(const CellPtr& c, const std::string& name) {
    switch (c->state) {
      case Cell::State::done: return c->value;
      case Cell::State::unset: fail(ErrorCategory::unbound, name + " not yet defined");
      case Cell::State::forcing: fail(ErrorCategory::cyclic, "cyclic definition of " + name);
      case Cell::State::pending: break;
    }
    c->state = Cell::State::forcing;
    OValue v;
    try {
      Deeper guard(*this);
      v = eval(*c->expr, c->env);
    } catch (...) {
      c->state = Cell::State::pending;
      throw;
    }
    c->value = v;
    c->state = Cell::State::done;
    c->env.reset();
    return v;
  }

  OValue variable(const std::string& name, const Env& env) {
    if (CellPtr c = local(env, name)) return force(c, name);
    auto it = globals.find(name);
    if (it == globals.end()) {
      if (defining && *defining == name) fail(ErrorCategory::cyclic, name + " is defined in terms of itself");
      fail(ErrorCategory::unbound, name + " not defined");
    }
    CellPtr c = it->second;
    return force(c, name);
  }

  CellPtr argument(const SourceExpr& e, const Env& env) {
    if (is_literal(e) || is_lambda_form(e, env)) return done(eval(e, env));
    if (options.strategy == Strategy::value) return done(eval(e, env));
    if (e.is_symbol()) {
      if (CellPtr c = local(env, e.symbol_name())) {
        if (c->state != Cell::State::unset) return c;
      } else if (auto it = globals.find(e.symbol_name()); it != globals.end()) {
        return it->second;
      }
    }
    auto c = std::make_shared<Cell>();
    c->state = Cell::State::pending;
    c->expr = &e;
    c->env = env;
    return c;
  }

  OValue eval(const SourceExpr& e, const Env& env) {
    if (stack_nearly_exhausted()) throw LimitExceeded(LimitKind::depth);
    const auto& node = e.node();
    if (auto* n = std::get_if<SourceExpr::Number>(&node)) return n->value;
    if (auto* s = std::get_if<SourceExpr::StringLit>(&node)) return OStr{s->text};
    if (auto* x = std::get_if<Embedded>(&node)) return std::any_cast<OValue>(x->payload);
    if (auto* s = std::get_if<SourceExpr::Symbol>(&node)) return variable(s->name, env);
    const auto& f = e.elements();
    if (f.empty()) return EmptyList{};
    if (f[0].is_symbol() && !local(env, f[0].symbol_name())) {
      const std::string& h = f[0].symbol_name();
      if (h == "lambda") {
        return std::make_shared<OClosure>(OClosure{param_names(f[1].elements()), &f[2], env, "lambda", &e});
      }
      if (h == "if") {
        OValue test = eval(f[1], env);
        if (!std::holds_alternative<bool>(test)) fail(ErrorCategory::type, "if test is not a boolean");
        return eval(std::get<bool>(test) ? f[2] : f[3], env);
      }
      if (h == "let") return eval_let(f, env);
      if (h == "quote") return quote(f[1]);
      if (h == "excla") {
        SourceExpr text = to_source(eval(f[1], env));
        auto names = names_in(env);
        validate(text, names);
        texts.push_back(std::move(text));
        return eval(texts.back(), env);
      }
    }
    return apply(f, env);
  }

  OValue eval_let(const std::vector<SourceExpr>& f, const Env& env) {
    auto frame = std::make_shared<Frame>();
    frame->parent = env;
    std::vector<Def> defs;
    for (const auto& b : f[1].elements()) {
      defs.push_back(let_binding(b));
      frame->names.push_back(defs.back().name);
      frame->cells.push_back(std::make_shared<Cell>());
    }
    const auto& bindings = f[1].elements();
    for (std::size_t i = 0; i < defs.size(); ++i) {
      Cell& cell = *frame->cells[i];
      const Def& d = defs[i];
      if (d.is_function) {
        cell.value = std::make_shared<OClosure>(OClosure{param_names(d.params), d.body, frame, d.name, &bindings[i]});
        cell.state = Cell::State::done;
      } else if (options.strategy == Strategy::value || is_literal(*d.body) || is_lambda_form(*d.body, frame)) {
        cell.value = eval(*d.body, frame);
        cell.state = Cell::State::done;
      } else {
        cell.expr = d.body;
        cell.env = frame;
        cell.state = Cell::State::pending;
      }
    }
    return eval(f[2], frame);
  }

  OValue quote(const SourceExpr& e) {
    const auto& node = e.node();
    if (auto* n = std::get_if<SourceExpr::Number>(&node)) return n->value;
    if (auto* s = std::get_if<SourceExpr::StringLit>(&node)) return OStr{s->text};
    if (auto* x = std::get_if<Embedded>(&node)) return std::any_cast<OValue>(x->payload);
    if (auto* s = std::get_if<SourceExpr::Symbol>(&node)) return OSym{s->name};
    OValue list = EmptyList{};
    const auto& items = e.elements();
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
      list = std::make_shared<OPair>(OPair{done(quote(*it)), done(list)});
    }
    return list;
  }

  SourceExpr to_source(const OValue& v) {
    if (auto* n = std::get_if<std::int64_t>(&v)) return SourceExpr::number(*n);
    if (auto* s = std::get_if<OSym>(&v)) return SourceExpr::symbol(s->name);
    if (auto* s = std::get_if<OStr>(&v)) return SourceExpr::string(s->text);
    if (std::holds_alternative<EmptyList>(v)) return SourceExpr::list({});
    if (std::holds_alternative<std::shared_ptr<OPair>>(v)) {
      std::vector<SourceExpr> items;
      OValue cur = v;
      while (auto* p = std::get_if<std::shared_ptr<OPair>>(&cur)) {
        std::shared_ptr<OPair> cell = *p;
        items.push_back(to_source(force(cell->head, "value")));
        cur = force(cell->tail, "value");
      }
      if (!std::holds_alternative<EmptyList>(cur)) fail(ErrorCategory::analysis, "excla of an improper list");
      return SourceExpr::list(std::move(items));
    }
    return SourceExpr(Embedded{std::any(v), render(v)});
  }

  OValue apply(const std::vector<SourceExpr>& f, const Env& env) {
    OValue head = eval(f[0], env);
    std::size_t argc = f.size() - 1;
    if (auto* c = std::get_if<std::shared_ptr<OClosure>>(&head)) {
      std::shared_ptr<OClosure> fn = *c;
      if (argc != fn->params.size()) fail(ErrorCategory::arity, fn->name + ": wrong number of arguments");
      auto frame = std::make_shared<Frame>();
      frame->names = fn->params;
      frame->parent = fn->env;
      for (std::size_t i = 1; i < f.size(); ++i) frame->cells.push_back(argument(f[i], env));
      if (options.step_limit && ++steps > options.step_limit) throw LimitExceeded(LimitKind::steps);
      Deeper guard(*this);
      return eval(*fn->body, frame);
    }
    if (auto* p = std::get_if<const Prim*>(&head)) {
      const Prim& prim = **p;
      if (argc != prim.arity) fail(ErrorCategory::arity, prim.name + ": wrong number of arguments");
      std::vector<CellPtr> args;
      for (std::size_t i = 1; i < f.size(); ++i) {
        args.push_back(prim.forcing == Forcing::lazy ? argument(f[i], env) : done(eval(f[i], env)));
      }
      return primitive(prim.name, args);
    }
    fail(ErrorCategory::type, std::string(type_of(head)) + " is not a function");
  }

  static std::int64_t num(const CellPtr& c) {
    if (auto* n = std::get_if<std::int64_t>(&c->value)) return *n;
    fail(ErrorCategory::type, std::string("expected a number, got ") + type_of(c->value));
  }

  static std::shared_ptr<OPair> pair(const OValue& v) {
    if (auto* p = std::get_if<std::shared_ptr<OPair>>(&v)) return *p;
    fail(ErrorCategory::type, std::string("expected a pair, got ") + type_of(v));
  }

  OValue primitive(const std::string& name, std::vector<CellPtr>& a) {
    auto arith = [&](auto op) -> OValue {
      std::int64_t r;
      if (op(num(a[0]), num(a[1]), &r)) fail(ErrorCategory::arithmetic, name + " overflow");
      return r;
    };
    if (name == "+") return arith([](auto x, auto y, auto* r) { return __builtin_add_overflow(x, y, r); });
    if (name == "-") return arith([](auto x, auto y, auto* r) { return __builtin_sub_overflow(x, y, r); });
    if (name == "*") return arith([](auto x, auto y, auto* r) { return __builtin_mul_overflow(x, y, r); });
    if (name == "/" || name == "mod") {
      std::int64_t x = num(a[0]), y = num(a[1]);
      if (y == 0) fail(ErrorCategory::arithmetic, "division by zero");
      if (name == "mod") return y == -1 ? std::int64_t{0} : x % y;
      if (x == std::numeric_limits<std::int64_t>::min() && y == -1) fail(ErrorCategory::arithmetic, "overflow");
      return x / y;
    }
    if (name == "<") return num(a[0]) < num(a[1]);
    if (name == "<=") return num(a[0]) <= num(a[1]);
    if (name == ">") return num(a[0]) > num(a[1]);
    if (name == ">=") return num(a[0]) >= num(a[1]);
    if (name == "=") return equal(a[0]->value, a[1]->value);
    if (name == "cons") return std::make_shared<OPair>(OPair{a[0], a[1]});
    if (name == "car") return force(pair(a[0]->value)->head, "value");
    if (name == "cdr") return force(pair(a[0]->value)->tail, "value");
    if (name == "cadr") {
      auto p = pair(a[0]->value);
      return force(pair(force(p->tail, "value"))->head, "value");
    }
    if (name == "nullist") return std::holds_alternative<EmptyList>(a[0]->value);
    if (name == "atom") return !std::holds_alternative<std::shared_ptr<OPair>>(a[0]->value);
    // print
    *out << render(a[0]->value) << '\n';
    return a[0]->value;
  }

  bool equal(const OValue& a, const OValue& b) {
    if (a.index() != b.index()) return false;
    if (auto* x = std::get_if<std::int64_t>(&a)) return *x == std::get<std::int64_t>(b);
    if (auto* x = std::get_if<bool>(&a)) return *x == std::get<bool>(b);
    if (auto* x = std::get_if<OStr>(&a)) return x->text == std::get<OStr>(b).text;
    if (auto* x = std::get_if<OSym>(&a)) return x->name == std::get<OSym>(b).name;
    if (std::holds_alternative<EmptyList>(a)) return true;
    if (auto* x = std::get_if<const Prim*>(&a)) return *x == std::get<const Prim*>(b);
    if (auto* x = std::get_if<std::shared_ptr<OClosure>>(&a)) {
      const auto& y = std::get<std::shared_ptr<OClosure>>(b);
      return (*x)->node == y->node && (*x)->env == y->env;
    }
    auto x = std::get<std::shared_ptr<OPair>>(a), y = std::get<std::shared_ptr<OPair>>(b);
    for (;;) {
      if (x == y) return true;
      if (!equal(force(x->head, "value"), force(y->head, "value"))) return false;
      OValue xt = force(x->tail, "value"), yt = force(y->tail, "value");
      auto* xp = std::get_if<std::shared_ptr<OPair>>(&xt);
      auto* yp = std::get_if<std::shared_ptr<OPair>>(&yt);
      if (!xp || !yp) return equal(xt, yt);
      x = *xp;
      y = *yp;
    }
  }

  void render(std::string& out, const OValue& v, std::size_t nesting) {
    if (std::holds_alternative<EmptyList>(v)) {
      out += "()";
    } else if (auto* n = std::get_if<std::int64_t>(&v)) {
      out += std::to_string(*n);
    } else if (auto* b = std::get_if<bool>(&v)) {
      out += *b ? "true" : "false";
    } else if (auto* s = std::get_if<OStr>(&v)) {
      out += '"';
      for (char c : s->text) {
        if (c == '"') out += "\\\"";
        else if (c == '\\') out += "\\\\";
        else if (c == '\n') out += "\\n";
        else if (c == '\t') out += "\\t";
        else out += c;
      }
      out += '"';
    } else if (auto* s = std::get_if<OSym>(&v)) {
      out += s->name;
    } else if (auto* c = std::get_if<std::shared_ptr<OClosure>>(&v)) {
      out += "#<closure " + (*c)->name + ">";
    } else if (auto* p = std::get_if<const Prim*>(&v)) {
      out += "#<prim " + (*p)->name + ">";
    } else if (nesting >= options.print.max_nesting) {
      out += "...";
    } else {
      out += '(';
      auto cell = std::get<std::shared_ptr<OPair>>(v);
      for (std::size_t n = 0;; ++n) {
        if (n > 0) out += ' ';
        render(out, force(cell->head, "value"), nesting + 1);
        if (n + 1 == options.print.max_elements) {
          const Cell& rest = *cell->tail;
          if (!(rest.state == Cell::State::done && std::holds_alternative<EmptyList>(rest.value))) out += " ...";
          break;
        }
        OValue tail = force(cell->tail, "value");
        if (std::holds_alternative<EmptyList>(tail)) break;
        auto* next = std::get_if<std::shared_ptr<OPair>>(&tail);
        if (!next) {
          out += " . ";
          render(out, tail, nesting + 1);
          break;
        }
        cell = *next;
      }
      out += ')';
    }
  }

  std::string render(const OValue& v) {
    std::string s;
    render(s, v, 0);
    return s;
  }

  CellPtr toplevel(const SourceExpr& form) {
    texts.push_back(form);
    const SourceExpr& f = texts.back();
    if (f.is_list() && !f.elements().empty() && is_keyword(f.elements()[0])) {
      Def d = parse_def(f);
      std::vector<std::string> bound;
      if (d.is_function) {
        validate_function(d.params, *d.body, bound);
        globals[d.name] = done(std::make_shared<OClosure>(OClosure{param_names(d.params), d.body, nullptr, d.name, &f}));
        return done(OSym{d.name});
      }
      validate(*d.body, bound);
      defining = &d.name;
      CellPtr c;
      try {
        c = argument(*d.body, nullptr);
      } catch (...) {
        defining = nullptr;
        throw;
      }
      defining = nullptr;
      globals[d.name] = c;
      return c;
    }
    std::vector<std::string> bound;
    validate(f, bound);
    return done(eval(f, nullptr));
  }
};

ReferenceInterpreter::ReferenceInterpreter(Options options, std::ostream* out)
    : state_(std::make_unique<State>(options, out ? out : &std::cout)) {}

ReferenceInterpreter::~ReferenceInterpreter() = default;

Outcome ReferenceInterpreter::run(const SourceExpr& form, bool render_result) {
  Outcome out;
  try {
    run_on_large_stack(stack_bytes(state_->options.depth_limit), [&] {
      state_->steps = 0;
      CellPtr c = state_->toplevel(form);
      if (render_result) out.text = state_->render(state_->force(c, "value"));
    });
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

std::vector<Outcome> ReferenceInterpreter::run_program(std::string_view text, bool render_results) {
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

namespace {

template <typename Interp>
std::string transcript_of(std::string_view program, const Options& options) {
  std::ostringstream out;
  Interp interp(options, &out);
  std::vector<SourceExpr> forms;
  try {
    forms = read_program(program);
  } catch (const Error& e) {
    return "error: " + std::string(category_name(e.category())) + "\n";
  }
  for (const auto& f : forms) out << interp.run(f, true).summary() << '\n';
  return out.str();
}

}  // namespace

std::string main_transcript(std::string_view program, const Options& options) {
  return transcript_of<Interpreter>(program, options);
}

std::string oracle_transcript(std::string_view program, const Options& options) {
  return transcript_of<ReferenceInterpreter>(program, options);
}

DifferentialResult differential_run(std::string_view program, Strategy strategy, std::uint64_t step_limit,
                                    std::uint64_t depth_limit) {
  Options options;
  options.strategy = strategy;
  options.step_limit = step_limit;
  options.depth_limit = depth_limit;
  DifferentialResult r;
  r.main_transcript = main_transcript(program, options);
  r.oracle_transcript = oracle_transcript(program, options);
  r.equal = r.main_transcript == r.oracle_transcript;
  return r;
}

namespace {

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::string program() {
    std::string text;
    if (chance(0.3)) {
      has_loop_ = true;
      text += "(de (loop n) (loop n))\n";
    }
    if (chance(0.3)) {
      has_from_ = true;
      text += "(de (from n) (cons n (from (+ n 1))))\n";
    }
    for (int i = pick(3); i > 0; --i) {
      std::string name = fresh("f");
      vars_ = {{"n", Ty::integer}, {"acc", Ty::integer}};
      std::string step = chance(0.1) ? "0" : "1";
      text += "(de (" + name + " n acc) (if (< n 1) " + expr(Ty::integer, 2) + " (" + name + " (- n " + step +
              ") " + expr(Ty::integer, 2) + ")))\n";
      vars_.clear();
      functions_.push_back(name);
    }
    for (int i = pick(3); i > 0; --i) {
      Ty t = any_type();
      std::string name = fresh("v");
      text += "(de " + name + " " + expr(t, 1) + ")\n";
      globals_.push_back({name, t});
    }
    for (int i = 1 + pick(3); i > 0; --i) {
      std::string e = expr(any_type(), 1);
      text += chance(0.5) ? "(print " + e + ")\n" : e + "\n";
    }
    return text;
  }

 private:
  enum class Ty { integer, boolean, list, function };
  struct Var {
    std::string name;
    Ty type;
  };

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::string fresh(const char* stem) { return stem + std::to_string(counter_++); }
  std::string literal() { return std::to_string(std::uniform_int_distribution<int>(-10, 10)(rng_)); }
  Ty any_type() { return static_cast<Ty>(pick(3)); }

  std::string var_of(Ty t) {
    std::vector<const Var*> found;
    for (const auto& v : vars_) {
      if (v.type == t) found.push_back(&v);
    }
    for (const auto& v : globals_) {
      if (v.type == t) found.push_back(&v);
    }
    if (found.empty()) return {};
    return found[pick(static_cast<int>(found.size()))]->name;
  }

  std::string with_var(const std::string& name, Ty t, const std::function<std::string()>& body) {
    vars_.push_back({name, t});
    std::string s = body();
    vars_.pop_back();
    return s;
  }

  std::string leaf(Ty t) {
    if (chance(0.02)) {
      static const char* wrong[] = {"true", "()", "'s", "\"str\"", "0", "zz"};
      return wrong[pick(6)];
    }
    std::string v = chance(0.6) ? var_of(t) : std::string();
    if (!v.empty()) return v;
    switch (t) {
      case Ty::integer: return literal();
      case Ty::boolean: return chance(0.5) ? "true" : "false";
      case Ty::list: {
        if (chance(0.4)) return "()";
        std::string s = "'(";
        for (int i = 1 + pick(4); i > 0; --i) s += literal() + (i > 1 ? " " : "");
        return s + ")";
      }
      case Ty::function: {
        std::string x = fresh("x");
        return "(lambda (" + x + ") (+ " + x + " " + literal() + "))";
      }
    }
    return "0";
  }

  std::string expr(Ty t, int depth) {
    if (depth >= 6 || chance(0.25)) return leaf(t);
    int d = depth + 1;
    switch (t) {
      case Ty::integer: return integer(d);
      case Ty::boolean: return boolean(d);
      case Ty::list: return list(d);
      case Ty::function: return function(d);
    }
    return leaf(t);
  }

  std::string integer(int d) {
    switch (pick(12)) {
      case 0: case 1: {
        static const char* ops[] = {"+", "-", "*", "+", "-", "/", "mod"};
        return std::string("(") + ops[pick(7)] + " " + expr(Ty::integer, d) + " " + expr(Ty::integer, d) + ")";
      }
      case 2:
        return "(if " + expr(Ty::boolean, d) + " " + expr(Ty::integer, d) + " " + expr(Ty::integer, d) + ")";
      case 3: {
        std::string v = fresh("a");
        std::string init = expr(Ty::integer, d);
        if (chance(0.5)) {
          std::string g = fresh("g"), y = fresh("y");
          std::string gbody = with_var(v, Ty::integer, [&] {
            return with_var(g, Ty::function, [&] { return with_var(y, Ty::integer, [&] { return expr(Ty::integer, d); }); });
          });
          std::string body = with_var(v, Ty::integer, [&] { return with_var(g, Ty::function, [&] { return expr(Ty::integer, d); }); });
          return "(let ((" + v + " " + init + ") (de (" + g + " " + y + ") " + gbody + ")) " + body + ")";
        }
        return "(let ((" + v + " " + init + ")) " + with_var(v, Ty::integer, [&] { return expr(Ty::integer, d); }) + ")";
      }
      case 4: {
        std::string v = fresh("p");
        Ty at = any_type();
        std::string body = with_var(v, at, [&] { return expr(Ty::integer, d); });
        return "((lambda (" + v + ") " + body + ") " + expr(at, d) + ")";
      }
      case 5: return std::string(chance(0.5) ? "(car " : "(cadr ") + expr(Ty::list, d) + ")";
      case 6: {
        std::string f = var_of(Ty::function);
        if (f.empty() || chance(0.3)) f = expr(Ty::function, d);
        return "(" + f + " " + expr(Ty::integer, d) + ")";
      }
      case 7: {
        if (!functions_.empty() && chance(0.7)) {
          return "(" + functions_[pick(static_cast<int>(functions_.size()))] + " " + expr(Ty::integer, d) + " " +
                 expr(Ty::integer, d) + ")";
        }
        std::string x = var_of(Ty::integer);
        if (!x.empty() && chance(0.5)) return "(! '(+ " + x + " " + literal() + "))";
        return "(! (cons '* (cons " + expr(Ty::integer, d) + " (cons " + expr(Ty::integer, d) + " ()))))";
      }
      case 8: return "(print " + expr(Ty::integer, d) + ")";
      case 9:
        if (has_loop_) return "((lambda (k j) k) " + expr(Ty::integer, d) + " (loop 0))";
        return "((lambda (k j) j) " + expr(Ty::boolean, d) + " " + expr(Ty::integer, d) + ")";
      case 10:
        if (has_from_) return "(car (cdr (from " + expr(Ty::integer, d) + ")))";
        return "(car (cons " + expr(Ty::integer, d) + " " + expr(Ty::list, d) + "))";
      default: return leaf(Ty::integer);
    }
  }

  std::string boolean(int d) {
    switch (pick(7)) {
      case 0: {
        static const char* ops[] = {"<", "<=", ">", ">="};
        return std::string("(") + ops[pick(4)] + " " + expr(Ty::integer, d) + " " + expr(Ty::integer, d) + ")";
      }
      case 1: {
        Ty t = chance(0.6) ? Ty::integer : Ty::list;
        return "(= " + expr(t, d) + " " + expr(t, d) + ")";
      }
      case 2: return std::string(chance(0.5) ? "(nullist " : "(atom ") + expr(Ty::list, d) + ")";
      case 3:
        return "(if " + expr(Ty::boolean, d) + " " + expr(Ty::boolean, d) + " " + expr(Ty::boolean, d) + ")";
      case 4: {
        std::string ev = fresh("ev"), od = fresh("od");
        return "(let ((de (" + ev + " n) (if (= n 0) true (" + od + " (- n 1)))) (de (" + od +
               " n) (if (= n 0) false (" + ev + " (- n 1))))) (" + ev + " " + expr(Ty::integer, d) + "))";
      }
      case 5: return "(atom " + expr(Ty::integer, d) + ")";
      default: return leaf(Ty::boolean);
    }
  }

  std::string list(int d) {
    switch (pick(6)) {
      case 0: case 1: return "(cons " + expr(Ty::integer, d) + " " + expr(Ty::list, d) + ")";
      case 2: return "(cdr " + expr(Ty::list, d) + ")";
      case 3: return "(if " + expr(Ty::boolean, d) + " " + expr(Ty::list, d) + " " + expr(Ty::list, d) + ")";
      case 4: {
        std::string v = fresh("l");
        std::string init = expr(Ty::list, d);
        return "(let ((" + v + " " + init + ")) " + with_var(v, Ty::list, [&] { return expr(Ty::list, d); }) + ")";
      }
      default: {
        std::string v = fresh("q");
        std::string body = with_var(v, Ty::integer, [&] { return expr(Ty::list, d); });
        return "((lambda (" + v + ") " + body + ") " + expr(Ty::integer, d) + ")";
      }
    }
  }

  std::string function(int d) {
    if (chance(0.5)) {
      std::string x = fresh("x");
      return "(lambda (" + x + ") " + with_var(x, Ty::integer, [&] { return expr(Ty::integer, d); }) + ")";
    }
    std::string g = fresh("h"), y = fresh("y");
    std::string body = with_var(g, Ty::function, [&] { return with_var(y, Ty::integer, [&] { return expr(Ty::integer, d); }); });
    return "(let ((de (" + g + " " + y + ") " + body + ")) " + g + ")";
  }

  std::mt19937_64 rng_;
  std::vector<Var> vars_;
  std::vector<Var> globals_;
  std::vector<std::string> functions_;
  int counter_ = 0;
  bool has_loop_ = false;
  bool has_from_ = false;
};

}  // namespace

std::string random_program(std::uint64_t seed, std::uint64_t index) {
  return Generator(seed * 1000003 + index).program();
}

}  // namespace lambdix::oracle

namespace lambdix::oracle {

namespace {

constexpr std::string_view kConstFunc = "(define BuildConstFunc (x)\n  (lambda (y) x))\n";
constexpr std::string_view kIdentity =
    "(define apply (f x) (f x))\n(define Identity (x)\n  (apply (lambda (y) x) 2))\n";
constexpr std::string_view kFTest = "(def f (x y)\n  (if (< x 0)\n      1\n      (f (- x 1) (f x y))))\n";
constexpr std::string_view kFrom = "(de (from x)\n  (cons x (from (+ x 1))))\n";
constexpr std::string_view kMapfun =
    "(de (mapfun f l)\n  (if (nullist l) ()\n      (cons (! (cons f (car l)))\n            (mapfun f (cdr l)))))\n";
constexpr std::string_view kOmega = "((lambda (x y) x) 'A ((lambda (u) (u u)) (lambda (u) (u u))))";

std::string cat(std::string_view a, std::string_view b) { return std::string(a) + std::string(b); }

template <typename Interp>
bool matches(const GoldenCase& c, const Options& options) {
  std::ostringstream out;
  Interp interp(options, &out);
  std::vector<Outcome> outcomes = interp.run_program(c.program, true);
  return !outcomes.empty() && outcomes.back().summary() == c.expected && out.str() == c.expected_output;
}

}  // namespace

const std::vector<GoldenCase>& golden_corpus() {
  constexpr std::uint64_t kMillion = 1'000'000;
  static const std::vector<GoldenCase> corpus{
      {"const-func-1", Strategy::need, 0, cat(kConstFunc, "((BuildConstFunc 0) 1)"), "value: 0", ""},
      {"const-func-1", Strategy::value, 0, cat(kConstFunc, "((BuildConstFunc 0) 1)"), "value: 0", ""},
      {"const-func-2", Strategy::need, 0, cat(kConstFunc, "((BuildConstFunc 0) 2)"), "value: 0", ""},
      {"const-func-2", Strategy::value, 0, cat(kConstFunc, "((BuildConstFunc 0) 2)"), "value: 0", ""},
      {"identity", Strategy::need, 0, cat(kIdentity, "(Identity 45)"), "value: 45", ""},
      {"identity", Strategy::value, 0, cat(kIdentity, "(Identity 45)"), "value: 45", ""},
      {"lexical-term", Strategy::need, 0, "((lambda (x) ((lambda (y) ((lambda (x) y) 'B)) x)) 'A)", "value: A", ""},
      {"lexical-term", Strategy::value, 0, "((lambda (x) ((lambda (y) ((lambda (x) y) 'B)) x)) 'A)", "value: A", ""},
      {"f-need", Strategy::need, kMillion, cat(kFTest, "(f 1 2)"), "value: 1", ""},
      {"f-value", Strategy::value, kMillion, cat(kFTest, "(f 1 2)"), "limit", ""},
      {"omega-need", Strategy::need, kMillion, std::string(kOmega), "value: A", ""},
      {"omega-value", Strategy::value, kMillion, std::string(kOmega), "limit", ""},
      {"ones", Strategy::need, 0, "(de x (cons 1 x))\n(cadr x)", "value: 1", ""},
      {"from", Strategy::need, 0, cat(kFrom, "(cadr (from 2))"), "value: 3", ""},
      {"print-from", Strategy::need, 0, cat(kFrom, "(print (cadr (from 2)))"), "value: 3", "3\n"},
      {"mapfun", Strategy::need, 0, cat(kMapfun, "(print (mapfun + '((1 2) (2 3) (3 4))))"), "value: (3 5 7)",
       "(3 5 7)\n"},
      {"mapfun", Strategy::value, 0, cat(kMapfun, "(print (mapfun + '((1 2) (2 3) (3 4))))"), "value: (3 5 7)",
       "(3 5 7)\n"},
      {"de-value", Strategy::need, 0, "(de x 3)", "value: 3", ""},
      {"de-value", Strategy::value, 0, "(de x 3)", "value: 3", ""},
      {"de-function", Strategy::need, 0, "(de (f x) (+ x 1))", "value: f", ""},
      {"de-function-call", Strategy::need, 0, "(de (f x) (+ x 1))\n(f 2)", "value: 3", ""},
      {"de-function-call", Strategy::value, 0, "(de (f x) (+ x 1))\n(f 2)", "value: 3", ""},
      {"unbound", Strategy::need, 0, "undefinedvar", "error: unbound", ""},
      {"self-reference", Strategy::need, 0, "(de x x)\nx", "error: cyclic", ""},
      {"self-increment", Strategy::need, 0, "(de x (+ x 1))\nx", "error: cyclic", ""},
  };
  return corpus;
}

GoldenResult check_golden(const GoldenCase& c) {
  Options options;
  options.strategy = c.strategy;
  options.step_limit = c.step_limit;
  GoldenResult r;
  r.main_ok = matches<Interpreter>(c, options);
  r.oracle_ok = matches<ReferenceInterpreter>(c, options);
  if (!r.main_ok || !r.oracle_ok) {
    r.main_transcript = main_transcript(c.program, options);
    r.oracle_transcript = oracle_transcript(c.program, options);
  }
  return r;
}

}  // namespace lambdix::oracle
