#pragma once

#include <cstddef>

namespace hpt {

/// Arity caps bounding Bell-number growth. Every operation that enumerates
/// set partitions or builds words checks against these.
struct Limits {
  std::size_t partition_cap = 12;
  std::size_t transport_cap = 8;
  std::size_t moment_cap = 64;
};

}  // namespace hpt
