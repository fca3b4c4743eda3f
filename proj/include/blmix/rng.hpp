//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/rng.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace blmix
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 block function (Salmon et al., Random123).
 *
 * Maps a 128-bit counter and a 64-bit key to 128 pseudorandom bits.
 */
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += bump0;
                key[1] += bump1;
            }
            std::uint64_t const p0 = std::uint64_t{mult0} * ctr[0];
            std::uint64_t const p1 = std::uint64_t{mult1} * ctr[2];
            auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto const lo0 = static_cast<std::uint32_t>(p0);
            auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto const lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t mult0 = 0xD2511F53u;
    static constexpr std::uint32_t mult1 = 0xCD9E8D57u;
    static constexpr std::uint32_t bump0 = 0x9E3779B9u;
    static constexpr std::uint32_t bump1 = 0xBB67AE85u;
};

//---------------------------------------------------------------------------//
/*!
 * Reproducible random stream keyed by (master seed, stream id).
 *
 * The master seed is the Philox key; the stream id fills the upper half of
 * the counter and a per-stream block index fills the lower half. Streams
 * with different ids never share a counter value, so each parallel replica
 * can own one without any coordination.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class RngStream
{
  public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_seed_(master_seed), stream_id_(stream_id)
    {
    }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()()
    {
        if (used_ == 2)
        {
            refill();
        }
        return buffer_[used_++];
    }

    //! Uniform double in [0, 1) with 53 random bits
    double uniform()
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_{0};
    std::array<std::uint64_t, 2> buffer_{};
    int used_{2};

    void refill()
    {
        Philox4x32::Counter const ctr{static_cast<std::uint32_t>(block_),
                                      static_cast<std::uint32_t>(block_ >> 32),
                                      static_cast<std::uint32_t>(stream_id_),
                                      static_cast<std::uint32_t>(stream_id_ >> 32)};
        Philox4x32::Key const key{static_cast<std::uint32_t>(master_seed_),
                                  static_cast<std::uint32_t>(master_seed_ >> 32)};
        auto const out = Philox4x32::apply(ctr, key);
        buffer_[0] = (std::uint64_t{out[0]} << 32) | out[1];
        buffer_[1] = (std::uint64_t{out[2]} << 32) | out[3];
        ++block_;
        used_ = 0;
    }
};

}  // namespace blmix
