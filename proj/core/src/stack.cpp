#include "lambdix/stack.hpp"

#include <pthread.h>

#include <exception>
#include <stdexcept>
#include <string>

namespace lambdix {

namespace {

constexpr std::size_t kSafetyMargin = 256 * 1024;

thread_local const char* stack_floor = nullptr;

struct Job {
  const std::function<void()>* fn;
  std::size_t bytes;
  std::exception_ptr error;
};

void* trampoline(void* raw) {
  auto* job = static_cast<Job*>(raw);
  char marker;
  // Stacks grow downward on every platform this builds for.
  stack_floor = &marker - job->bytes + kSafetyMargin;
  try {
    (*job->fn)();
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void run_on_large_stack(std::size_t bytes, const std::function<void()>& fn) {
  if (stack_floor) {
    fn();
    return;
  }
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  if (pthread_attr_setstacksize(&attr, bytes) != 0) {
    pthread_attr_destroy(&attr);
    throw std::runtime_error("cannot reserve an evaluation stack of " + std::to_string(bytes) + " bytes");
  }
  // Leave room for the thread's own bookkeeping at the top of the stack.
  Job job{&fn, bytes - 64 * 1024, nullptr};
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, &trampoline, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) throw std::runtime_error("cannot start the evaluation thread");
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

bool stack_nearly_exhausted() {
  if (!stack_floor) return false;
  char marker;
  return &marker < stack_floor;
}

}  // namespace lambdix
