#include "lambdix/builtins.hpp"

#include <limits>
#include <ostream>

#include "lambdix/error.hpp"
#include "lambdix/evaluator.hpp"

namespace lambdix {

namespace {

std::int64_t number_arg(const char* op, const Slot& s) {
  const Value& v = s.value();
  if (!v.is_number()) throw Error(ErrorCategory::type, std::string(op) + " expects numbers, got " + v.type_name());
  return v.as_number();
}

[[noreturn]] void overflow(const char* op) { throw Error(ErrorCategory::arithmetic, std::string(op) + " overflow"); }

Slot add(Interpreter&, std::span<Slot> a) {
  std::int64_t r;
  if (__builtin_add_overflow(number_arg("+", a[0]), number_arg("+", a[1]), &r)) overflow("+");
  return Value(r);
}

Slot sub(Interpreter&, std::span<Slot> a) {
  std::int64_t r;
  if (__builtin_sub_overflow(number_arg("-", a[0]), number_arg("-", a[1]), &r)) overflow("-");
  return Value(r);
}

Slot mul(Interpreter&, std::span<Slot> a) {
  std::int64_t r;
  if (__builtin_mul_overflow(number_arg("*", a[0]), number_arg("*", a[1]), &r)) overflow("*");
  return Value(r);
}

Slot divide(Interpreter&, std::span<Slot> a) {
  std::int64_t x = number_arg("/", a[0]), y = number_arg("/", a[1]);
  if (y == 0) throw Error(ErrorCategory::arithmetic, "division by zero");
  if (x == std::numeric_limits<std::int64_t>::min() && y == -1) overflow("/");
  return Value(x / y);
}

Slot modulo(Interpreter&, std::span<Slot> a) {
  std::int64_t x = number_arg("mod", a[0]), y = number_arg("mod", a[1]);
  if (y == 0) throw Error(ErrorCategory::arithmetic, "mod by zero");
  if (y == -1) return Value(std::int64_t{0});
  return Value(x % y);
}

Slot less(Interpreter&, std::span<Slot> a) { return Value(number_arg("<", a[0]) < number_arg("<", a[1])); }
Slot less_eq(Interpreter&, std::span<Slot> a) { return Value(number_arg("<=", a[0]) <= number_arg("<=", a[1])); }
Slot greater(Interpreter&, std::span<Slot> a) { return Value(number_arg(">", a[0]) > number_arg(">", a[1])); }
Slot greater_eq(Interpreter&, std::span<Slot> a) { return Value(number_arg(">=", a[0]) >= number_arg(">=", a[1])); }

Slot equal(Interpreter& in, std::span<Slot> a) { return Value(values_equal(in, a[0].value(), a[1].value())); }

Slot cons(Interpreter&, std::span<Slot> a) { return Value(std::make_shared<Pair>(Pair{a[0], a[1]})); }

const std::shared_ptr<Pair>& pair_arg(const char* op, const Value& v) {
  if (!v.is_pair()) throw Error(ErrorCategory::type, std::string(op) + " expects a pair, got " + v.type_name());
  return v.as_pair();
}

Slot car(Interpreter&, std::span<Slot> a) { return pair_arg("car", a[0].value())->head; }
Slot cdr(Interpreter&, std::span<Slot> a) { return pair_arg("cdr", a[0].value())->tail; }

Slot cadr(Interpreter& in, std::span<Slot> a) {
  const auto& p = pair_arg("cadr", a[0].value());
  return pair_arg("cadr", in.force_slot(p->tail))->head;
}

Slot nullist(Interpreter&, std::span<Slot> a) { return Value(a[0].value().is_empty_list()); }
Slot atom(Interpreter&, std::span<Slot> a) { return Value(!a[0].value().is_pair()); }

Slot print(Interpreter& in, std::span<Slot> a) {
  in.output() << render_value(in, a[0].value()) << '\n';
  return a[0];
}

void escape_into(std::string& out, const std::string& text) {
  out += '"';
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

void render_into(Interpreter& in, std::string& out, const Value& v, std::size_t nesting) {
  const PrintLimits& limits = in.options().print;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, EmptyList>) {
          out += "()";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          out += std::to_string(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          out += x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, StringVal>) {
          escape_into(out, *x.text);
        } else if constexpr (std::is_same_v<T, SymbolVal>) {
          out += *x.name;
        } else if constexpr (std::is_same_v<T, Closure>) {
          out += "#<closure " + x.lambda->display_name + ">";
        } else if constexpr (std::is_same_v<T, const PrimitiveSpec*>) {
          out += "#<prim " + x->name + ">";
        } else {
          if (nesting >= limits.max_nesting) {
            out += "...";
            return;
          }
          out += '(';
          std::shared_ptr<Pair> cell = x;
          for (std::size_t n = 0;; ++n) {
            if (n > 0) out += ' ';
            render_into(in, out, in.force_slot(cell->head), nesting + 1);
            if (n + 1 == limits.max_elements) {
              // Stop without forcing the rest: an infinite stream must print too.
              const Slot& rest = cell->tail;
              const Value* known = rest.is_ready() ? &rest.value()
                                   : rest.is_suspended() && rest.thunk()->state == ThunkState::forced
                                       ? &rest.thunk()->value
                                       : nullptr;
              if (!(known && known->is_empty_list())) out += " ...";
              break;
            }
            Value tail = in.force_slot(cell->tail);
            if (tail.is_empty_list()) break;
            if (!tail.is_pair()) {
              out += " . ";
              render_into(in, out, tail, nesting + 1);
              break;
            }
            cell = tail.as_pair();
          }
          out += ')';
        }
      },
      v.storage());
}

}  // namespace

const std::vector<PrimitiveSpec>& builtin_primitives() {
  static const std::vector<PrimitiveSpec> table{
      {"+", 2, ArgForcing::full, &add},
      {"-", 2, ArgForcing::full, &sub},
      {"*", 2, ArgForcing::full, &mul},
      {"/", 2, ArgForcing::full, &divide},
      {"mod", 2, ArgForcing::full, &modulo},
      {"<", 2, ArgForcing::full, &less},
      {"<=", 2, ArgForcing::full, &less_eq},
      {">", 2, ArgForcing::full, &greater},
      {">=", 2, ArgForcing::full, &greater_eq},
      {"=", 2, ArgForcing::full, &equal},
      {"cons", 2, ArgForcing::none, &cons},
      {"car", 1, ArgForcing::whnf, &car},
      {"cdr", 1, ArgForcing::whnf, &cdr},
      {"cadr", 1, ArgForcing::whnf, &cadr},
      {"nullist", 1, ArgForcing::whnf, &nullist},
      {"atom", 1, ArgForcing::whnf, &atom},
      {"print", 1, ArgForcing::full, &print},
  };
  return table;
}

const PrimitiveSpec* find_primitive(const std::string& name) {
  for (const auto& p : builtin_primitives()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void install_builtins(Interpreter& interp) {
  TopLevelTable& table = interp.code().table();
  for (const auto& p : builtin_primitives()) table.define(p.name, Slot(Value(&p)));
  table.define("true", Slot(Value(true)));
  table.define("false", Slot(Value(false)));
}

std::string render_value(Interpreter& interp, const Value& v) {
  std::string out;
  render_into(interp, out, v, 0);
  return out;
}

bool values_equal(Interpreter& in, const Value& a, const Value& b) {
  if (a.storage().index() != b.storage().index()) return false;
  if (a.is_number()) return a.as_number() == b.as_number();
  if (a.is_boolean()) return a.as_boolean() == b.as_boolean();
  if (a.is_empty_list()) return true;
  if (a.is_string()) return a.string_text() == b.string_text();
  if (a.is_symbol()) return a.symbol_name() == b.symbol_name();
  if (a.is_primitive()) return a.as_primitive() == b.as_primitive();
  if (a.is_closure()) {
    return a.as_closure().lambda == b.as_closure().lambda && a.as_closure().env == b.as_closure().env;
  }
  std::shared_ptr<Pair> x = a.as_pair(), y = b.as_pair();
  for (;;) {
    if (x == y) return true;
    if (!values_equal(in, in.force_slot(x->head), in.force_slot(y->head))) return false;
    Value xt = in.force_slot(x->tail), yt = in.force_slot(y->tail);
    if (!xt.is_pair() || !yt.is_pair()) return values_equal(in, xt, yt);
    x = xt.as_pair();
    y = yt.as_pair();
  }
}

}  // namespace lambdix
