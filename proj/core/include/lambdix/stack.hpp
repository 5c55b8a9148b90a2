#ifndef LAMBDIX_STACK_HPP
#define LAMBDIX_STACK_HPP

#include <cstddef>
#include <functional>

namespace lambdix {

// Runs `fn` on a dedicated thread whose stack holds `bytes`, rethrowing
// whatever it throws.  Calls made while already on such a stack run inline.
void run_on_large_stack(std::size_t bytes, const std::function<void()>& fn);

// True when fewer than a safety margin of bytes remain on the current large
// stack.  Always false outside run_on_large_stack.
bool stack_nearly_exhausted();

}  // namespace lambdix

#endif  // LAMBDIX_STACK_HPP
