#pragma once

#include <cstdint>
#include <random>

namespace syncarena {

/// Deterministic generator behind every seeded draw in the scenario catalog.
///
/// Pinned algorithm, stable across platforms and releases:
///   - engine: std::mt19937_64, whose parameters and output sequence are
///     fixed by the C++ standard (bit-exact everywhere);
///   - unit mapping: take the top 53 bits of each 64-bit word,
///     u = (x >> 11) * 2^-53, giving u in [0, 1) with every double in the
///     range reachable and no rounding bias from the discarded bits.
///
/// Distribution adapters from <random> are deliberately avoided: the
/// standard leaves their algorithms implementation-defined, which would
/// break bit-reproducibility of seeded scenarios across toolchains.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace syncarena
