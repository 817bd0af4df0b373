#pragma once

#include <cstdint>

namespace soqo {

// Counter-mode generator: output k is mix(key + k * GAMMA) with the
// SplitMix64 finalizer, so a stream is fully determined by its 64-bit key
// and substreams can be derived by hashing path components into fresh keys.
// Draws are bit-identical regardless of process, thread, or platform
// (no library distributions involved).
class RngStream {
  public:
    explicit RngStream(std::uint64_t key) : key_(key), ctr_(0) {}

    // Independent child stream addressed by a tag; derivation uses only the
    // parent key, never the draw counter.
    RngStream split(std::uint64_t tag) const;

    std::uint64_t next_u64();
    double next_unit();       // uniform on [0, 1), 53 bits
    double next_unit_open();  // uniform on (0, 1]

    double normal();                        // standard normal (Box-Muller)
    double uniform_sym(double half_width);  // uniform on [-a, a]
    double laplace(double scale);
    double logistic(double scale);
    double gumbel_centered(double scale);   // mean removed
    double lognormal(double mu, double sigma);
    double lomax(double alpha, double scale);
    double sign();                          // -1 or +1, equiprobable

  private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

// SplitMix64 finalizer, exposed for key derivation elsewhere.
std::uint64_t mix64(std::uint64_t z);

}  // namespace soqo
