#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace memeprobe {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// 64-bit FNV-1a over the bytes of `text`.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Keyed hash of a tuple of 64-bit fields. Stable across platforms, so
/// orderings derived from it reproduce in any language.
constexpr std::uint64_t keyed_hash(std::initializer_list<std::uint64_t> fields) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t f : fields) h = mix64(h ^ mix64(f));
    return h;
}

}  // namespace memeprobe
