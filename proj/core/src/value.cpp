#include "lambdix/value.hpp"

namespace lambdix {

const char* Value::type_name() const {
  switch (v_.index()) {
    case 0: return "empty list";
    case 1: return "number";
    case 2: return "boolean";
    case 3: return "string";
    case 4: return "symbol";
    case 5: return "pair";
    case 6: return "closure";
    case 7: return "primitive";
  }
  return "value";
}

}  // namespace lambdix
