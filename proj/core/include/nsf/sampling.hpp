#pragma once

#include <cstdint>

namespace nsf {

/// Radical inverse of `index` in `base`: the index-th element of the Halton
/// sequence along one axis. Index 0 maps to 0, so callers usually start at 1.
inline double halton(std::uint64_t index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace nsf
