#ifndef LAMBDIX_BUILTINS_HPP
#define LAMBDIX_BUILTINS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lambdix/value.hpp"

namespace lambdix {

class Interpreter;

// How far the evaluator forces arguments before calling a primitive.
//   full: strict (the primitive may force further, e.g. `=` and `print`)
//   whnf: outermost constructor only
//   none: arguments arrive as suspensions under call-by-need (cons)
enum class ArgForcing { full, whnf, none };

using PrimitiveFn = Slot (*)(Interpreter&, std::span<Slot>);

struct PrimitiveSpec {
  std::string name;
  std::size_t arity;
  ArgForcing forcing;
  PrimitiveFn fn;
};

// The fixed primitive suite; addresses are stable for the program's lifetime.
const std::vector<PrimitiveSpec>& builtin_primitives();
const PrimitiveSpec* find_primitive(const std::string& name);

// Binds every primitive plus `true` and `false` in the top level.
void install_builtins(Interpreter& interp);

// Printed form with the interpreter's print limits, forcing what it shows.
std::string render_value(Interpreter& interp, const Value& v);

// Structural equality; forces list spines and elements as needed.
bool values_equal(Interpreter& interp, const Value& a, const Value& b);

}  // namespace lambdix

#endif  // LAMBDIX_BUILTINS_HPP
