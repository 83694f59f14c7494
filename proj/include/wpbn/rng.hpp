// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace wpbn {

using Seed = std::uint64_t;

/// All samplers draw from a mt19937_64 stream.  Every public operation is a
/// pure function of (parameters, seed); concurrent callers use independent
/// streams derived with derive_seed().
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.  Used to decorrelate raw seeds and to derive
/// substream seeds; consecutive integers map to well-separated states.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for substream `stream` of a master seed.
constexpr Seed derive_seed(Seed master, std::uint64_t stream)
{
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL));
}

inline Rng make_rng(Seed seed)
{
    return Rng(splitmix64(seed));
}

} // namespace wpbn
