#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lambdix/runtime_env.hpp"

using namespace lambdix;

TEST_CASE("install sets the chain and restore puts it back") {
  CodeStore store;
  Counters counters;
  Environment env(store, counters);
  LambdaStruct& p = store.make_struct(StructKind::function, &store.top(), "p");
  p.params = {"a"};
  LambdaStruct& g = store.make_struct(StructKind::function, &p, "g");
  g.params = {"b"};

  auto p1 = env.new_block(p, {Slot(Value(std::int64_t{1}))}, env.top_block());
  auto g1 = env.new_block(g, {Slot(Value(std::int64_t{2}))}, p1);
  auto before = env.snapshot();
  {
    SwitchScope scope(env, g, *g1);
    CHECK(g.current == g1.get());
    CHECK(p.current == p1.get());
    CHECK(Environment::chain_coherent(g));
    CHECK(counters.switch_tests == 2);
    CHECK(counters.switch_assignments == 2);
    CHECK(env.lookup({1, 0, BindingKind::parameter}, g).value().as_number() == 1);
    CHECK(env.lookup({0, 0, BindingKind::parameter}, g).value().as_number() == 2);
  }
  CHECK(env.snapshot() == before);
  CHECK(env.log_depth() == 0);
}

TEST_CASE("a recursive call with the same defining block stops after one test") {
  CodeStore store;
  Counters counters;
  Environment env(store, counters);
  LambdaStruct& f = store.make_struct(StructKind::function, &store.top(), "f");
  f.params = {"n"};
  auto b1 = env.new_block(f, {Slot(Value(std::int64_t{1}))}, env.top_block());
  auto b2 = env.new_block(f, {Slot(Value(std::int64_t{2}))}, env.top_block());
  std::vector<InstallRecord> trace;
  env.set_trace(&trace);
  SwitchScope outer(env, f, *b1);
  SwitchScope inner(env, f, *b2);
  REQUIRE(trace.size() == 2);
  for (const auto& t : trace) {
    CHECK(t.tests == 1);
    CHECK(t.assignments == 1);
  }
}

TEST_CASE("installing an already current block is a single test") {
  CodeStore store;
  Counters counters;
  Environment env(store, counters);
  LambdaStruct& p = store.make_struct(StructKind::function, &store.top(), "p");
  LambdaStruct& g = store.make_struct(StructKind::function, &p, "g");
  auto p1 = env.new_block(p, {}, env.top_block());
  auto g1 = env.new_block(g, {}, p1);
  SwitchScope first(env, g, *g1);
  auto tests = counters.switch_tests;
  SwitchScope again(env, g, *g1);
  CHECK(counters.switch_tests - tests == 1);
}

TEST_CASE("arity is checked when a block is made") {
  CodeStore store;
  Counters counters;
  Environment env(store, counters);
  LambdaStruct& f = store.make_struct(StructKind::function, &store.top(), "f");
  f.params = {"a", "b"};
  CHECK_THROWS_AS(env.new_block(f, {Slot()}, env.top_block()), Error);
}

// A stale descendant link that happens to equal the target must not stop the
// walk: here the inner lambda's link still names the block it had before the
// enclosing function was re-entered with a different block.
TEST_CASE("early stop is not fooled by a stale descendant link") {
  const char* program =
      "(de (S n k) (if (= n 0) (k) ((lambda (x) (S 0 (lambda () n))) n)))\n"
      "(S 1 0)";
  CHECK(test::last(program, Strategy::value) == "value: 1");
  CHECK(test::last(program, Strategy::need) == "value: 1");
}

TEST_CASE("switch tests never exceed lexical depth plus one") {
  for (auto s : {Strategy::value, Strategy::need}) {
    Options o;
    o.strategy = s;
    o.check_invariants = true;
    std::ostringstream out;
    Interpreter in(o, &out);
    std::vector<InstallRecord> trace;
    in.environment().set_trace(&trace);
    in.run_program(
        "(de (mk a) (let ((de b (+ a 1))) (let ((de c (+ b 1))) (lambda (e) (+ (+ a b) (+ c e))))))\n"
        "(de (twice f x) (f (f x)))\n"
        "(print (twice (mk 1) 10))\n",
        false);
    CHECK(out.str() == "22\n");
    REQUIRE_FALSE(trace.empty());
    for (const auto& t : trace) CHECK(t.tests <= static_cast<std::uint64_t>(t.depth + 1));
  }
}
