#include "doctest.h"
#include "lambdix/analyzer.hpp"

using namespace lambdix;

namespace {

SourceExpr one(std::string_view text) { return read_program(text).at(0); }

ErrorCategory category_of(std::string_view text) {
  CodeStore store;
  try {
    Analyzer(store).analyze_toplevel(one(text));
  } catch (const Error& e) {
    return e.category();
  }
  return ErrorCategory::internal;
}

}  // namespace

TEST_CASE("top-level definition forms") {
  CodeStore store;
  Analyzer a(store);
  auto value = a.analyze_toplevel(one("(de x 3)"));
  CHECK(value.kind == TopLevelForm::Kind::define_value);
  CHECK(value.name == "x");

  for (const char* text : {"(de (f x y) x)", "(define f (x y) x)", "(def f (x y) x)"}) {
    auto fn = a.analyze_toplevel(one(text));
    REQUIRE(fn.kind == TopLevelForm::Kind::define_function);
    CHECK(fn.function->params == std::vector<std::string>{"x", "y"});
    CHECK(fn.function->depth == 0);
    CHECK(fn.function->display_name == "f");
  }
  CHECK(a.analyze_toplevel(one("(f 1)")).kind == TopLevelForm::Kind::expression);
}

TEST_CASE("lexical addresses count levels and offsets") {
  CodeStore store;
  auto f = Analyzer(store).analyze_toplevel(one("(de (f a b) (lambda (c) (+ b c)))"));
  const auto& lam = std::get<CompiledExpr::LambdaRef>(f.function->body->node);
  CHECK(lam.lambda->depth == 1);
  CHECK(lam.lambda->parent == f.function);
  const auto& app = std::get<CompiledExpr::Application>(lam.lambda->body->node);
  CHECK(std::holds_alternative<CompiledExpr::TopRef>(app.head->node));
  const auto& b = std::get<CompiledExpr::LocalRef>(app.args[0]->node);
  const auto& c = std::get<CompiledExpr::LocalRef>(app.args[1]->node);
  CHECK(b.address == LexicalAddress{1, 1, BindingKind::parameter});
  CHECK(b.target == f.function);
  CHECK(c.address == LexicalAddress{0, 0, BindingKind::parameter});
}

TEST_CASE("let opens one level with its bindings as locals") {
  CodeStore store;
  auto f = Analyzer(store).analyze_toplevel(one("(de (f a) (let ((de b a) (c 2) (de (g y) (+ y b))) (g a)))"));
  const auto& let = std::get<CompiledExpr::Let>(f.function->body->node);
  CHECK(let.frame->kind == StructKind::let);
  CHECK(let.frame->locals == std::vector<std::string>{"b", "c", "g"});
  CHECK(let.frame->depth == 1);
  CHECK(f.function->has_children);
  const auto& b = std::get<CompiledExpr::LocalRef>(let.frame->bindings[0]->node);
  CHECK(b.address == LexicalAddress{1, 0, BindingKind::parameter});
  const auto& g = std::get<CompiledExpr::LambdaRef>(let.frame->bindings[2]->node);
  CHECK(g.lambda->display_name == "g");
  CHECK(g.lambda->depth == 2);
}

TEST_CASE("parameters win over local definitions of the same level") {
  CodeStore store;
  LambdaStruct& s = store.make_struct(StructKind::function, &store.top(), "s");
  s.params = {"x"};
  s.locals = {"x", "y"};
  auto r = Scope(&s).resolve("x");
  REQUIRE(r);
  CHECK(r->address.kind == BindingKind::parameter);
  CHECK(Scope(&s).resolve("y")->address == LexicalAddress{0, 2, BindingKind::local});
  CHECK_FALSE(Scope(&s).resolve("z"));
}

TEST_CASE("special forms can be shadowed by local names") {
  CodeStore store;
  auto f = Analyzer(store).analyze_toplevel(one("(de (f if) (if 1 2 3 4))"));
  CHECK(std::holds_alternative<CompiledExpr::Application>(f.function->body->node));
  auto g = Analyzer(store).analyze_toplevel(one("(de (g x) (if x 1 2))"));
  CHECK(std::holds_alternative<CompiledExpr::Conditional>(g.function->body->node));
}

TEST_CASE("malformed programs are analysis errors") {
  for (const char* text : {"(lambda (x x) x)", "(lambda x x)", "(lambda (x) x x)", "(if 1 2)", "(if 1 2 3 4)",
                           "(let ((a 1) (a 2)) a)", "(let ((a)) a)", "(let (a) a)", "(f (de x 3))",
                           "(quote a b)", "(de (1 x) x)", "(de)", "(de x)", "(de (f 2) 1)",
                           "((lambda (x) (de y 1)) 2)"}) {
    CAPTURE(text);
    CHECK(category_of(text) == ErrorCategory::analysis);
  }
}

TEST_CASE("quote makes constant data") {
  Value v = quote_datum(one("(a 1 \"s\" ())"));
  REQUIRE(v.is_pair());
  CHECK(v.as_pair()->head.value().symbol_name() == "a");
  Value second = v.as_pair()->tail.value().as_pair()->head.value();
  CHECK(second.as_number() == 1);
}
