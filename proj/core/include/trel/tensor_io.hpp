#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "trel/tensor.hpp"

namespace trel {

// Binary tensor containers. Both share the same layout and differ only in
// the 8-byte magic:
//   magic, u32 rank, u32 dims[rank], f32 payload (row-major, little-endian)
inline constexpr char kClipMagic[8] = {'T', 'R', 'E', 'L', 'C', 'L', 'P', '1'};
inline constexpr char kWeightMagic[8] = {'T', 'R', 'E', 'L', 'W', 'G', 'T', '1'};

void write_clip_tensor(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_clip_tensor(const std::filesystem::path& path);

void write_weight_tensor(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_weight_tensor(const std::filesystem::path& path);

// Reads a rank-4 TCLP file into a clip; clip_id defaults to the file stem.
ClipTensor read_clip(const std::filesystem::path& path);
void write_clip(const std::filesystem::path& path, const ClipTensor& clip);

// All .tclp files in a directory, sorted by filename; labels, when present,
// are attached by the caller.
std::vector<std::filesystem::path> list_clip_files(const std::filesystem::path& dir);

// Writes `bytes` to `path` via a temp file + rename so failures never leave
// a partial file behind.
void atomic_write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace trel
