#include "mips/rng.hpp"

#include <cmath>
#include <numbers>

namespace mips {
namespace rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> round_once(const std::array<std::uint32_t, 4>& c,
                                               const std::array<std::uint32_t, 2>& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        counter = round_once(counter, key);
    }
    return counter;
}

}  // namespace rng

namespace {

inline std::array<std::uint32_t, 4> block_for(std::uint64_t seed, std::uint64_t robot_id,
                                              std::uint64_t step, NoiseChannel channel) {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(step),
        static_cast<std::uint32_t>(step >> 32),
        static_cast<std::uint32_t>(robot_id),
        static_cast<std::uint32_t>(channel),
    };
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
    };
    return rng::philox4x32(counter, key);
}

inline std::uint64_t join(std::uint32_t lo, std::uint32_t hi) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

}  // namespace

double noise_stream(std::uint64_t seed, std::uint64_t robot_id, std::uint64_t step, NoiseChannel channel) {
    const auto r = block_for(seed, robot_id, step, channel);
    // Box-Muller, cosine branch. u1 in (0, 1] keeps the log finite.
    const double u1 = static_cast<double>((join(r[0], r[1]) >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(join(r[2], r[3]) >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform_stream(std::uint64_t seed, std::uint64_t robot_id, std::uint64_t step, NoiseChannel channel) {
    const auto r = block_for(seed, robot_id, step, channel);
    return (static_cast<double>(join(r[0], r[1]) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace mips
