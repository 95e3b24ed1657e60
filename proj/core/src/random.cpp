#include "twoit/random.hpp"

#include <cmath>

#include "twoit/errors.hpp"

namespace twoit {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Counter-based derivation: decorrelate the raw seed, then fold in the
    // stream counter before expanding to the full engine state.
    std::uint64_t x = seed;
    (void)splitmix64(x);
    x ^= (stream_id + 0x632BE59BD9B4E019ull) * 0x9E3779B97F4A7C15ull;
    for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double sample_normal(double mu, double sigma, RandomStream& stream) {
    if (!(sigma > 0.0)) throw ValidationError("sample_normal: sigma must be positive");
    if (stream.has_cached_normal_) {
        stream.has_cached_normal_ = false;
        return mu + sigma * stream.cached_normal_;
    }
    // Marsaglia polar method; the spare standard draw is cached.
    double u, v, s;
    do {
        u = 2.0 * stream.uniform() - 1.0;
        v = 2.0 * stream.uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    stream.cached_normal_ = v * factor;
    stream.has_cached_normal_ = true;
    return mu + sigma * (u * factor);
}

double sample_gamma(double shape, RandomStream& stream) {
    if (!(shape > 0.0)) throw ValidationError("sample_gamma: shape must be positive");
    if (shape < 1.0) {
        // Boost to shape + 1 and scale back (Marsaglia-Tsang section 6).
        const double u = 1.0 - stream.uniform();  // (0, 1]
        return sample_gamma(shape + 1.0, stream) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = sample_normal(0.0, 1.0, stream);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - stream.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample_beta(double a, double b, RandomStream& stream) {
    if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("sample_beta: a and b must be positive");
    for (;;) {
        const double x = sample_gamma(a, stream);
        const double y = sample_gamma(b, stream);
        const double sum = x + y;
        if (sum > 0.0) return x / sum;
        // Both underflowed to zero; draw again.
    }
}

long sample_binomial(long n, double p, RandomStream& stream) {
    if (n < 0) throw ValidationError("sample_binomial: n must be non-negative");
    if (!(p >= 0.0) || !(p <= 1.0)) throw ValidationError("sample_binomial: p must lie in [0, 1]");
    if (p == 0.0) return 0;
    if (p == 1.0) return n;
    long count = 0;
    for (long i = 0; i < n; ++i)
        if (stream.uniform() < p) ++count;
    return count;
}

double sample_scaled_inv_chi2(double nu, double s2, RandomStream& stream) {
    if (!(nu > 0.0)) throw ValidationError("sample_scaled_inv_chi2: nu must be positive");
    if (!(s2 > 0.0)) throw ValidationError("sample_scaled_inv_chi2: s2 must be positive");
    for (;;) {
        const double chi2 = 2.0 * sample_gamma(0.5 * nu, stream);
        if (chi2 > 0.0) return nu * s2 / chi2;
    }
}

}  // namespace twoit
