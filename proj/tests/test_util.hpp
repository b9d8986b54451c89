#pragma once

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mlsn/netcore.hpp"

namespace testutil {

// Fresh unique directory under the system temp root.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::uint64_t counter = 0;
    auto p = std::filesystem::temp_directory_path() /
             ("mlsn_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++));
    std::filesystem::create_directories(p);
    return p;
}

// Erdos-Renyi layer from a std::mt19937 (test-side randomness, independent of
// the library RNG).
inline mlsn::Layer random_layer(int n, double p, std::mt19937& gen) {
    mlsn::Layer g(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(gen) < p) g.set(i, j, true);
    return g;
}

// Minimal PCM WAV writer for decoder tests.
inline void write_wav16(const std::filesystem::path& path, const std::vector<std::vector<std::int16_t>>& channels,
                        std::uint32_t rate) {
    const std::uint16_t nch = static_cast<std::uint16_t>(channels.size());
    const std::uint32_t nsamp = static_cast<std::uint32_t>(channels[0].size());
    const std::uint32_t data_bytes = nsamp * nch * 2;
    std::ofstream f(path, std::ios::binary);
    auto u32 = [&](std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
    auto u16 = [&](std::uint16_t v) { f.write(reinterpret_cast<const char*>(&v), 2); };
    f.write("RIFF", 4);
    u32(36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    u32(16);
    u16(1);  // PCM
    u16(nch);
    u32(rate);
    u32(rate * nch * 2);
    u16(nch * 2);
    u16(16);
    f.write("data", 4);
    u32(data_bytes);
    for (std::uint32_t s = 0; s < nsamp; ++s)
        for (std::uint16_t c = 0; c < nch; ++c)
            f.write(reinterpret_cast<const char*>(&channels[c][s]), 2);
}

inline void write_wav_float32(const std::filesystem::path& path, const std::vector<float>& mono,
                              std::uint32_t rate) {
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(mono.size()) * 4;
    std::ofstream f(path, std::ios::binary);
    auto u32 = [&](std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
    auto u16 = [&](std::uint16_t v) { f.write(reinterpret_cast<const char*>(&v), 2); };
    f.write("RIFF", 4);
    u32(36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    u32(16);
    u16(3);  // IEEE float
    u16(1);
    u32(rate);
    u32(rate * 4);
    u16(4);
    u16(32);
    f.write("data", 4);
    u32(data_bytes);
    for (float v : mono) f.write(reinterpret_cast<const char*>(&v), 4);
}

}  // namespace testutil
