#pragma once

#include <cstdint>
#include <random>

namespace ouq {

/// Reproducible substream: (seed, stream_id) is mixed through splitmix64
/// into an mt19937_64 state, so streams are independent of evaluation order.
/// Normals come from Box-Muller on the engine's 53-bit uniforms, keeping
/// results identical across standard libraries.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    double uniform();  // in (0,1)
    double normal();   // standard normal

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace ouq
