#pragma once

#include <cstdint>
#include <optional>

namespace tameproj {

/// Counter-based random stream. The output at a given position depends only
/// on (seed, stream_id, position), so draws are reproducible bit for bit on
/// any platform with IEEE doubles.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via the Marsaglia polar method.
    double gaussian();

    /// Independent stream derived from this one's identity; does not advance
    /// this stream.
    RngStream substream(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint64_t position() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::optional<double> spare_;
};

std::uint64_t splitmix64_mix(std::uint64_t x);

}  // namespace tameproj
