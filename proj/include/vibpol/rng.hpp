#pragma once

// Counter-based RNG: Philox4x32-10.  Each (seed, stream, purpose) triple is an
// independent, reproducible stream regardless of scheduling, which is what
// makes per-trajectory MD deterministic under any thread count.

#include <cmath>
#include <cstdint>

#include "units.hpp"

namespace vibpol {

struct Philox4x32 {
    // One 10-round philox4x32 block.  ctr/key per the reference algorithm.
    static void block(const std::uint32_t ctr[4], const std::uint32_t key[2],
                      std::uint32_t out[4]) {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
        std::uint32_t k0 = key[0], k1 = key[1];
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
            std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32),
                          lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32),
                          lo1 = static_cast<std::uint32_t>(p1);
            std::uint32_t n0 = hi1 ^ c1 ^ k0, n1 = lo1, n2 = hi0 ^ c3 ^ k1, n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += W0; k1 += W1;
        }
        out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
    }
};

// Stream of uniforms/gaussians drawn by incrementing the block counter.
// Layout: counter = {draw_block, stream_id, purpose, 0}, key = split seed.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint32_t stream_id, std::uint32_t purpose = 0)
        : stream_(stream_id), purpose_(purpose) {
        key_[0] = static_cast<std::uint32_t>(seed);
        key_[1] = static_cast<std::uint32_t>(seed >> 32);
    }

    std::uint32_t next_u32() {
        if (idx_ == 4) refill();
        return buf_[idx_++];
    }

    // Uniform on (0,1): (x + 0.5) / 2^32 never hits the endpoints.
    double next_uniform() {
        return (static_cast<double>(next_u32()) + 0.5) * (1.0 / 4294967296.0);
    }

    // Standard normal via Box-Muller; the spare draw is cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform(), u2 = next_uniform();
        double rad = std::sqrt(-2.0 * std::log(u1)), ang = 2.0 * pi * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

  private:
    void refill() {
        std::uint32_t ctr[4] = {block_, stream_, purpose_, 0u};
        Philox4x32::block(ctr, key_, buf_);
        ++block_;
        idx_ = 0;
    }

    std::uint32_t key_[2]{};
    std::uint32_t buf_[4]{};
    std::uint32_t stream_, purpose_;
    std::uint32_t block_ = 0;
    int idx_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace vibpol
