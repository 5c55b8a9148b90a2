#ifndef LAMBDIX_TESTS_HELPERS_HPP
#define LAMBDIX_TESTS_HELPERS_HPP

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lambdix/evaluator.hpp"

namespace test {

// Runs every form and returns the last outcome's summary.
inline std::string last(std::string_view program, lambdix::Strategy s = lambdix::Strategy::need,
                        std::uint64_t step_limit = 0) {
  lambdix::Options o;
  o.strategy = s;
  o.step_limit = step_limit;
  o.check_invariants = true;
  std::ostringstream out;
  lambdix::Interpreter in(o, &out);
  auto outcomes = in.run_program(program, true);
  return outcomes.empty() ? std::string() : outcomes.back().summary();
}

// Everything `print` wrote.
inline std::string printed(std::string_view program, lambdix::Strategy s = lambdix::Strategy::need) {
  lambdix::Options o;
  o.strategy = s;
  o.check_invariants = true;
  std::ostringstream out;
  lambdix::Interpreter in(o, &out);
  in.run_program(program, false);
  return out.str();
}

}  // namespace test

#endif  // LAMBDIX_TESTS_HELPERS_HPP
