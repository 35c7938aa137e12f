#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ldr {

// Deterministic 64-bit mixer used to derive independent RNG substreams.
uint64_t splitmix64(uint64_t x);

// Substream seed for (scenario, reservoir) pairs under a master seed.
uint64_t substream_seed(uint64_t seed, uint64_t a, uint64_t b);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Shortest decimal text that round-trips a double (up to 17 significant digits).
std::string format_double(double v);

// Writes content to path via a temp file + rename so readers never see partial files.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Compact file-name tag for a lambda value, e.g. 0 -> "0", 1000 -> "1000", 0.1 -> "0.1".
std::string lambda_tag(double lambda);

}  // namespace ldr
