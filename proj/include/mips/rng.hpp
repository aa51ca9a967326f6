#pragma once

#include <array>
#include <cstdint>

namespace mips {

// Noise channels. Motion noise uses x/y/theta; the remaining channels feed
// artifact plumbing (initial placement, coincidence tie-breaking) so those
// draws never alias the motion streams.
enum class NoiseChannel : std::uint32_t {
    x = 0,
    y = 1,
    theta = 2,
    place_x = 3,
    place_y = 4,
    place_theta = 5,
    coincidence_x = 6,
    coincidence_y = 7,
};

namespace rng {

// Philox-4x32-10 block function (counter-based, stateless).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

}  // namespace rng

// Standard normal deviate, a pure function of (seed, robot_id, step, channel).
// Streams for distinct tuples are independent in the counter-based sense,
// which makes runs bit-reproducible regardless of query order or threading.
double noise_stream(std::uint64_t seed, std::uint64_t robot_id, std::uint64_t step, NoiseChannel channel);

// Uniform deviate in (0, 1) from the same keyed generator.
double uniform_stream(std::uint64_t seed, std::uint64_t robot_id, std::uint64_t step, NoiseChannel channel);

}  // namespace mips
