#ifndef LAMBDIX_RUNTIME_ENV_HPP
#define LAMBDIX_RUNTIME_ENV_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lambdix/analyzer.hpp"
#include "lambdix/value.hpp"

namespace lambdix {

struct Counters {
  std::uint64_t switch_tests = 0;
  std::uint64_t switch_assignments = 0;
  std::uint64_t blocks_allocated = 0;
  std::uint64_t lookups = 0;
  std::uint64_t thunks_created = 0;
  std::uint64_t thunks_forced = 0;
  std::uint64_t installs = 0;
  std::uint64_t closure_calls = 0;

  std::map<std::string, std::uint64_t> to_map() const;
  Counters operator-(const Counters& earlier) const;
};

// The (struct, previous link) pairs written by one installation.  Entries
// live on the environment's log stack; a SwitchLog is the slice starting at
// `begin`.
struct SwitchLog {
  std::size_t begin = 0;
};

struct InstallRecord {
  std::uint64_t struct_id;
  int depth;
  std::uint64_t tests;
  std::uint64_t assignments;
};

// What a struct's dynamic link designates, for snapshot comparisons.
struct LinkState {
  std::uint64_t struct_id;
  const Block* block;
  std::uint64_t serial;

  friend bool operator==(const LinkState&, const LinkState&) = default;
};

class Environment {
 public:
  Environment(CodeStore& store, Counters& counters);

  const std::shared_ptr<Block>& top_block() const { return top_block_; }

  // Fresh block for one call of `owner`; `defining` is the block of the
  // closure's defining environment.
  std::shared_ptr<Block> new_block(LambdaStruct& owner, std::vector<Slot> slots, std::shared_ptr<Block> defining);

  // Points the dynamic links of `lambda` and its lexical ancestors at the
  // block chain of `target`, stopping at the first level that is already
  // correctly set.
  SwitchLog install(LambdaStruct& lambda, Block& target);
  void restore(SwitchLog log);

  // Constant-time access: the struct `hops` levels up, then its current block.
  Slot& lookup(const LexicalAddress& address, LambdaStruct& from);
  Slot& lookup_at(LambdaStruct& target, std::size_t offset) {
    ++counters_.lookups;
    return target.current->slots[offset];
  }

  // True when every link from `lambda` up to the top mirrors the parent
  // chain of its current block.  Only meaningful while that block is alive,
  // i.e. right after installing it or on return into its activation.
  static bool chain_coherent(const LambdaStruct& lambda);
  bool is_validated(const LambdaStruct& lambda) const { return lambda.validated_gen == generation_; }

  std::vector<LinkState> snapshot() const;

  void set_trace(std::vector<InstallRecord>* trace) { trace_ = trace; }
  std::size_t log_depth() const { return log_.size(); }

 private:
  struct Entry {
    LambdaStruct* lambda;
    Block* block;
    std::uint64_t serial;
    std::uint64_t validated_gen;
  };

  CodeStore& store_;
  Counters& counters_;
  std::shared_ptr<Block> top_block_;
  std::vector<Entry> log_;
  std::uint64_t generation_ = 1;
  std::vector<InstallRecord>* trace_ = nullptr;
};

// Installs on construction and restores on scope exit, including unwinding.
class SwitchScope {
 public:
  SwitchScope(Environment& env, LambdaStruct& lambda, Block& target) : env_(env), log_(env.install(lambda, target)) {}
  ~SwitchScope() { env_.restore(log_); }
  SwitchScope(const SwitchScope&) = delete;
  SwitchScope& operator=(const SwitchScope&) = delete;

 private:
  Environment& env_;
  SwitchLog log_;
};

}  // namespace lambdix

#endif  // LAMBDIX_RUNTIME_ENV_HPP
