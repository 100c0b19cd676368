#pragma once

#include <cstdint>

namespace ribetor {

/// Deterministic splitmix64 stream. Value type: copy one per task, never share.
class SeededRng {
  public:
    explicit SeededRng(uint64_t seed = 0x5EED) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound), bound > 0; rejection sampling keeps the stream portable.
    uint64_t below(uint64_t bound) {
        const uint64_t limit = bound * (UINT64_MAX / bound);
        uint64_t v;
        do {
            v = next();
        } while (v >= limit && UINT64_MAX / bound > 0);
        return v % bound;
    }

    bool bit() { return next() & 1; }

    /// Child stream for a subtask; keeps parent stream position independent of subtask use.
    SeededRng fork(uint64_t tag) {
        SeededRng child(state_ ^ (0xd1b54a32d192ed03ull * (tag + 1)));
        child.next();
        return child;
    }

  private:
    uint64_t state_;
};

} // namespace ribetor
