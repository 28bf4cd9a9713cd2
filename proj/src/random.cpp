#include "ramdiv/random.hpp"

namespace ramdiv {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::initializer_list<std::uint64_t> indices) {
    std::uint64_t h = splitmix64(master ^ splitmix64(fnv1a(label)));
    for (std::uint64_t idx : indices) {
        h = splitmix64(h ^ splitmix64(idx + 0x632be59bd9b4e019ULL));
    }
    return h;
}

std::size_t RandomStream::uniform_index(std::size_t n) {
    if (n <= 1) return 0;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    return pick(engine_);
}

}  // namespace ramdiv
