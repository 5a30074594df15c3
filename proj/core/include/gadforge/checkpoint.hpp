#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gadforge/params.hpp"

namespace gadforge {

struct RngState {
  std::string name;
  std::uint64_t key = 0;
  std::uint64_t counter = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

template <typename T>
struct Checkpoint {
  ModelParams<T> params;
  std::vector<RngState> rng;
  std::uint64_t epoch = 0;
  std::string phase;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Binary container, little-endian:
//   "GADCKPT1" | u32 version | u32 scalar bytes | u64 x4 shape | u64 adam step
//   u64 epoch | str phase | u32 #rng, {str name, u64 key, u64 counter}*
//   u32 #tensors, {str name, u64 rows, u64 cols, raw scalars}*
// where str is u32 length + bytes. Tensors are "param/<name>",
// "adam.m/<name>", "adam.v/<name>" in Weights enumeration order.
template <typename T>
void write_checkpoint(std::ostream& out, const Checkpoint<T>& ckpt);
template <typename T>
Checkpoint<T> read_checkpoint(std::istream& in);

template <typename T>
void save_checkpoint(const std::filesystem::path& path, const Checkpoint<T>& ckpt);
template <typename T>
Checkpoint<T> load_checkpoint(const std::filesystem::path& path);

}  // namespace gadforge
