#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "marl/nn.hpp"

namespace marl {

/// On-disk policy snapshot. Binary layout (all integers and floats
/// little-endian):
///   magic "MARLCKPT" (8 bytes)
///   u32 format version (currently 1)
///   string algorithm name, string environment name   (u32 length + bytes)
///   u32 net count; per net: string name, u32 layer count, i32 sizes[],
///     u8 hidden activation, u8 output activation,
///     f32 parameters in layer order (W0 row-major, b0, W1, b1, ...)
///   u32 hyperparam count; per entry: string key, f64 value
///   string rng state
///   u64 episode counter, u64 step counter
///
/// Parameters are stored in single precision; the runtime upcasts to double
/// on load, so a save/load round trip reproduces forward outputs bitwise at
/// single precision.
struct Checkpoint {
    static constexpr std::uint32_t kVersion = 1;

    std::string algorithm;
    std::string environment;
    std::vector<std::pair<std::string, Mlp>> nets;
    std::map<std::string, double> hyperparams;
    std::string rng_state;
    std::uint64_t episode_counter = 0;
    std::uint64_t step_counter = 0;

    const Mlp& net(const std::string& name) const;
    bool has_net(const std::string& name) const;
};

/// Writes the checkpoint; throws std::runtime_error on I/O failure.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);

/// Reads and validates a checkpoint. Throws std::runtime_error on bad
/// magic, unsupported version, or truncation.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace marl
