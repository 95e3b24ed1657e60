#pragma once

#include <cstdint>

namespace twoit {

// Identifies one reproducible draw sequence. The same (seed, stream_id)
// always yields the same sequence, on any run and with any number of
// workers; distinct stream_ids give statistically independent streams.
struct SeededStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

// xoshiro256++ engine keyed from (seed, stream_id) via a SplitMix64 chain.
// Value type: cheap to construct per replication, safe to use from
// concurrent workers as long as each worker owns its own instance.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);
    explicit RandomStream(SeededStream id) : RandomStream(id.seed, id.stream_id) {}

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t state_[4];
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;

    friend double sample_normal(double, double, RandomStream&);
};

// Samplers. All validate their parameter domains (ValidationError) and are
// reproducible given the stream: the draw sequence is a pure function of
// (seed, stream_id) and call order.
double sample_normal(double mu, double sigma, RandomStream& stream);
double sample_gamma(double shape, RandomStream& stream);  // unit scale, shape > 0
double sample_beta(double a, double b, RandomStream& stream);
long sample_binomial(long n, double p, RandomStream& stream);
double sample_scaled_inv_chi2(double nu, double s2, RandomStream& stream);

}  // namespace twoit
