#include "doctest.h"
#include "lambdix/oracle.hpp"

using namespace lambdix;
using namespace lambdix::oracle;

TEST_CASE("every golden case holds for both interpreters") {
  for (const auto& c : golden_corpus()) {
    CAPTURE(c.name);
    auto r = check_golden(c);
    CHECK(r.main_ok);
    CHECK(r.oracle_ok);
  }
}

TEST_CASE("the reference interpreter handles the basics on its own") {
  Options o;
  CHECK(oracle_transcript("(de (f x) (* x 2))\n(f 21)", o) == "value: f\nvalue: 42\n");
  CHECK(oracle_transcript("(print '(1 2))", o) == "(1 2)\nvalue: (1 2)\n");
  CHECK(oracle_transcript("zz", o) == "error: unbound\n");
  o.strategy = Strategy::value;
  o.step_limit = 100;
  CHECK(oracle_transcript("(de (l x) (l x))\n((lambda (y) 0) (l 1))", o) == "value: l\nlimit\n");
}

TEST_CASE("random programs are reproducible and differ across indices") {
  CHECK(random_program(42, 0) == random_program(42, 0));
  CHECK(random_program(42, 0) != random_program(42, 1));
  CHECK(random_program(7, 3) != random_program(8, 3));
}

TEST_CASE("interpreters agree on a sample of random programs") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto program = random_program(1234, i);
    CAPTURE(program);
    for (auto s : {Strategy::value, Strategy::need}) {
      auto r = differential_run(program, s);
      CHECK(r.main_transcript == r.oracle_transcript);
    }
  }
}
