#ifndef LAMBDIX_ORACLE_HPP
#define LAMBDIX_ORACLE_HPP

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lambdix/evaluator.hpp"
#include "lambdix/reader.hpp"

namespace lambdix::oracle {

// A reference interpreter that walks SourceExpr directly: environments are
// chains of name/cell frames and closures capture the chain.  It shares the
// reader with the main interpreter and nothing else.
class ReferenceInterpreter {
 public:
  explicit ReferenceInterpreter(Options options = {}, std::ostream* out = nullptr);
  ~ReferenceInterpreter();
  ReferenceInterpreter(const ReferenceInterpreter&) = delete;
  ReferenceInterpreter& operator=(const ReferenceInterpreter&) = delete;

  Outcome run(const SourceExpr& form, bool render_result = true);
  std::vector<Outcome> run_program(std::string_view text, bool render_results = false);

  struct State;

 private:
  std::unique_ptr<State> state_;
};

// Per form: whatever `print` wrote, then the outcome summary on its own line.
std::string main_transcript(std::string_view program, const Options& options);
std::string oracle_transcript(std::string_view program, const Options& options);

struct DifferentialResult {
  std::string main_transcript;
  std::string oracle_transcript;
  bool equal = false;
};

DifferentialResult differential_run(std::string_view program, Strategy strategy, std::uint64_t step_limit = 5000,
                                    std::uint64_t depth_limit = 100'000);

// Reference transcripts with the value each must produce.
struct GoldenCase {
  std::string name;
  Strategy strategy;
  std::uint64_t step_limit;
  std::string program;
  std::string expected;         // summary of the last form
  std::string expected_output;  // everything `print` wrote
};

const std::vector<GoldenCase>& golden_corpus();

struct GoldenResult {
  bool main_ok = false;
  bool oracle_ok = false;
  std::string main_transcript;  // filled in only when a check fails
  std::string oracle_transcript;
};

GoldenResult check_golden(const GoldenCase& c);

// A closed random program over the builtin vocabulary: nesting depth at most
// 6 and integer literals in [-10, 10].  Equal (seed, index) give equal text.
std::string random_program(std::uint64_t seed, std::uint64_t index);

}  // namespace lambdix::oracle

#endif  // LAMBDIX_ORACLE_HPP
