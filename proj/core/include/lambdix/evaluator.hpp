#ifndef LAMBDIX_EVALUATOR_HPP
#define LAMBDIX_EVALUATOR_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lambdix/analyzer.hpp"
#include "lambdix/error.hpp"
#include "lambdix/reader.hpp"
#include "lambdix/runtime_env.hpp"
#include "lambdix/value.hpp"

namespace lambdix {

enum class Strategy { value, need };

std::string_view strategy_name(Strategy s);

struct PrintLimits {
  std::size_t max_elements = 100;  // per list spine
  std::size_t max_nesting = 20;
};

struct Options {
  Strategy strategy = Strategy::need;
  std::uint64_t step_limit = 0;  // closure applications per top-level form; 0 = unlimited
  std::uint64_t depth_limit = 100'000;
  PrintLimits print;
  bool check_invariants = false;  // verify link coherence after every switch
};

enum class OutcomeKind { value, limit_exceeded, error };

struct Outcome {
  OutcomeKind kind = OutcomeKind::value;
  std::string text;  // rendered value, when kind == value
  ErrorCategory category = ErrorCategory::internal;
  LimitKind limit = LimitKind::steps;
  std::string message;

  // "value: 3", "error: unbound", "limit"
  std::string summary() const;
};

// The block-model interpreter.  Single-threaded; one instance owns all the
// structures it creates, and values taken out of it must not outlive it.
class Interpreter {
 public:
  explicit Interpreter(Options options = {}, std::ostream* out = nullptr);
  ~Interpreter();
  Interpreter(const Interpreter&) = delete;
  Interpreter& operator=(const Interpreter&) = delete;

  // Analyzes and evaluates one top-level form.  A value definition under
  // call-by-need yields its (unforced) slot.
  Slot evaluate(const SourceExpr& form);
  // Forces to weak head normal form.
  Value force(Slot slot);
  // Forces as `print` would and returns the printed text.
  std::string render(const Slot& slot);

  Outcome run(const SourceExpr& form, bool render_result = true);
  Outcome run_with_limit(const SourceExpr& form, std::uint64_t step_limit);
  std::vector<Outcome> run_program(std::string_view text, bool render_results = false);
  // Evaluates every form of `text` and returns the last one forced.  Throws.
  Value eval_text(std::string_view text);

  Strategy strategy() const { return options_.strategy; }
  const Options& options() const { return options_; }
  Options& options() { return options_; }
  const Counters& counters() const { return counters_; }
  Environment& environment() { return env_; }
  CodeStore& code() { return code_; }
  std::ostream& output() { return *out_; }
  std::uint64_t steps() const { return steps_; }

  // Used by primitives and the printer; must run under evaluate/force.
  Value force_slot(Slot& slot, const std::string* name = nullptr);
  Value force_thunk(Thunk& thunk, const std::string* name = nullptr);
  Value eval(const CompiledExpr& expr);
  void count_immediate_suspension();

 private:
  Value apply(const CompiledExpr::Application& app);
  Value call(const Closure& closure, std::vector<Slot> args);
  Value eval_let(const LambdaStruct& frame);
  Value eval_excla(const CompiledExpr::Excla& excla);
  Slot argument(const CompiledExpr& expr, LambdaStruct& site);
  Slot suspend(const CompiledExpr& expr, LambdaStruct& site);
  SourceExpr to_source(const Value& v);
  void on_stack(const std::function<void()>& fn);

  class DepthGuard;

  Options options_;
  std::ostream* out_;
  Counters counters_;
  CodeStore code_;
  Environment env_;
  std::uint64_t steps_ = 0;
  std::uint64_t depth_ = 0;
  const TopBinding* defining_ = nullptr;  // value definition being evaluated
};

}  // namespace lambdix

#endif  // LAMBDIX_EVALUATOR_HPP
