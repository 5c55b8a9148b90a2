#include "lambdix/runtime_env.hpp"

namespace lambdix {

std::map<std::string, std::uint64_t> Counters::to_map() const {
  return {
      {"switch_tests", switch_tests},
      {"switch_assignments", switch_assignments},
      {"blocks_allocated", blocks_allocated},
      {"lookups", lookups},
      {"thunks_created", thunks_created},
      {"thunks_forced", thunks_forced},
      {"installs", installs},
      {"closure_calls", closure_calls},
  };
}

Counters Counters::operator-(const Counters& e) const {
  Counters d;
  d.switch_tests = switch_tests - e.switch_tests;
  d.switch_assignments = switch_assignments - e.switch_assignments;
  d.blocks_allocated = blocks_allocated - e.blocks_allocated;
  d.lookups = lookups - e.lookups;
  d.thunks_created = thunks_created - e.thunks_created;
  d.thunks_forced = thunks_forced - e.thunks_forced;
  d.installs = installs - e.installs;
  d.closure_calls = closure_calls - e.closure_calls;
  return d;
}

Environment::Environment(CodeStore& store, Counters& counters)
    : store_(store),
      counters_(counters),
      top_block_(std::make_shared<Block>(&store.top(), nullptr, std::vector<Slot>{}, 0)) {
  LambdaStruct& top = store.top();
  top.current = top_block_.get();
  top.current_serial = top_block_->serial;
}

std::shared_ptr<Block> Environment::new_block(LambdaStruct& owner, std::vector<Slot> slots,
                                              std::shared_ptr<Block> defining) {
  std::size_t expected = owner.kind == StructKind::let ? owner.locals.size() : owner.params.size();
  if (slots.size() != expected) {
    throw Error(ErrorCategory::arity, owner.display_name + " expects " + std::to_string(expected) +
                                          " argument" + (expected == 1 ? "" : "s") + ", got " +
                                          std::to_string(slots.size()));
  }
  ++counters_.blocks_allocated;
  return std::make_shared<Block>(&owner, std::move(defining), std::move(slots), counters_.blocks_allocated);
}

// A link that equals the target only counts as correctly set if it has been
// validated since the last time a struct with lexical children changed its
// link: such a change leaves the links of every descendant stale.
SwitchLog Environment::install(LambdaStruct& lambda, Block& target) {
  if (target.owner != &lambda) {
    throw Error(ErrorCategory::internal, "block of " + target.owner->display_name + " installed on " +
                                             lambda.display_name);
  }
  ++counters_.installs;
  SwitchLog log{log_.size()};
  std::uint64_t tests = 0;
  std::uint64_t assignments = 0;
  std::size_t walked = 0;
  bool invalidates = false;

  LambdaStruct* s = &lambda;
  Block* b = &target;
  while (s->kind != StructKind::top) {
    ++tests;
    bool same = s->current_serial == b->serial;
    if (same && s->validated_gen == generation_) break;
    if (!same) {
      log_.push_back({s, s->current, s->current_serial, s->validated_gen});
      s->current = b;
      s->current_serial = b->serial;
      ++assignments;
      invalidates = invalidates || s->has_children;
    }
    ++walked;
    s = s->parent;
    b = b->parent.get();
  }
  if (invalidates) ++generation_;
  LambdaStruct* v = &lambda;
  for (std::size_t i = 0; i < walked; ++i, v = v->parent) v->validated_gen = generation_;
  // Where the walk stopped early, that level's own chain was left untouched.
  if (v->kind != StructKind::top) v->validated_gen = generation_;

  counters_.switch_tests += tests;
  counters_.switch_assignments += assignments;
  if (trace_) trace_->push_back({lambda.id, lambda.depth, tests, assignments});
  return log;
}

void Environment::restore(SwitchLog log) {
  bool invalidates = false;
  for (std::size_t i = log_.size(); i > log.begin; --i) {
    const Entry& e = log_[i - 1];
    e.lambda->current = e.block;
    e.lambda->current_serial = e.serial;
    e.lambda->validated_gen = e.validated_gen;
    invalidates = invalidates || e.lambda->has_children;
  }
  log_.resize(log.begin);
  if (invalidates) ++generation_;
}

Slot& Environment::lookup(const LexicalAddress& address, LambdaStruct& from) {
  LambdaStruct* s = &from;
  for (std::size_t i = 0; i < address.hops; ++i) s = s->parent;
  if (!s->current) throw Error(ErrorCategory::internal, "no block installed for " + s->display_name);
  return lookup_at(*s, address.offset);
}

bool Environment::chain_coherent(const LambdaStruct& lambda) {
  for (const LambdaStruct* s = &lambda; s->kind != StructKind::top; s = s->parent) {
    if (!s->current || s->current->owner != s) return false;
    if (s->current->parent.get() != s->parent->current) return false;
  }
  return true;
}

std::vector<LinkState> Environment::snapshot() const {
  std::vector<LinkState> out;
  out.reserve(store_.structs().size());
  for (const auto& s : store_.structs()) out.push_back({s->id, s->current, s->current_serial});
  return out;
}

}  // namespace lambdix
