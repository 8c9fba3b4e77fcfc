#pragma once

#include "rsda/linalg.hpp"

#include <cstdint>
#include <random>

namespace rsda {

// Every random draw in the library comes from std::mt19937_64 seeded through
// splitmix64, with std::normal_distribution / std::uniform_real_distribution
// on top. Streams are reproducible within one build and standard library;
// bit-identical output across standard libraries is not promised.
using Rng = std::mt19937_64;

/// One step of the splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream tags for seed derivation.
enum class Stream : std::uint64_t {
  model = 0x6d6f64656cULL,
  train = 0x747261696eULL,
  test = 0x74657374ULL,
  method = 0x6d6574686fULL,
  diagnostic = 0x646961676eULL,
};

/// seed_i = mix(master, index, stream), so any replicate can be regenerated
/// in isolation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Stream stream);

Rng make_rng(std::uint64_t seed);

Matrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Vector standard_normal_vector(Eigen::Index n, Rng& rng);

}  // namespace rsda
