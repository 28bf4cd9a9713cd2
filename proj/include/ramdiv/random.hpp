#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace ramdiv {

/// Mix a master seed, a purpose label and a list of indices into a stream
/// seed. Streams derived from distinct (label, indices) are independent of
/// each other and of the order in which they are created.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::initializer_list<std::uint64_t> indices = {});

/// Seeded source of uniforms and standard normals. One stream per trial;
/// streams are never shared between threads.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    double normal() { return normal_(engine_); }

    /// Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 53>(engine_); }

    /// Uniform on {0, ..., n-1}. Consumes no randomness when n == 1.
    std::size_t uniform_index(std::size_t n);

    /// A child stream; the parent advances by one draw.
    RandomStream split() { return RandomStream(derive_seed(engine_(), "split")); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace ramdiv
