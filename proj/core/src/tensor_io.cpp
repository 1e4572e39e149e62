#include "trel/tensor_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>

static_assert(__BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__, "TCLP/TWGT readers assume a little-endian host");

namespace trel {

namespace {

void write_tensor_file(const std::filesystem::path& path, const Tensor& tensor, const char magic[8]) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        raise(ErrorKind::IOFailure, "cannot open " + path.string() + " for writing");
    }
    out.write(magic, 8);
    const std::uint32_t rank = static_cast<std::uint32_t>(tensor.rank());
    out.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
    for (int d : tensor.shape()) {
        const std::uint32_t dim = static_cast<std::uint32_t>(d);
        out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    }
    out.write(reinterpret_cast<const char*>(tensor.data()),
              static_cast<std::streamsize>(tensor.size() * sizeof(float)));
    if (!out) {
        raise(ErrorKind::IOFailure, "short write to " + path.string());
    }
}

Tensor read_tensor_file(const std::filesystem::path& path, const char magic[8], const char* format_name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorKind::IOFailure, "cannot open " + path.string());
    }
    char header[8];
    in.read(header, 8);
    if (!in || std::memcmp(header, magic, 8) != 0) {
        raise(ErrorKind::IOFailure, path.string() + " is not a " + format_name + " file");
    }
    std::uint32_t rank = 0;
    in.read(reinterpret_cast<char*>(&rank), sizeof(rank));
    if (!in || rank == 0 || rank > 8) {
        raise(ErrorKind::IOFailure, "bad rank in " + path.string());
    }
    std::vector<int> shape(rank);
    for (std::uint32_t i = 0; i < rank; ++i) {
        std::uint32_t dim = 0;
        in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
        if (!in || dim == 0) {
            raise(ErrorKind::IOFailure, "bad dimension in " + path.string());
        }
        shape[i] = static_cast<int>(dim);
    }
    const std::size_t count = Tensor::element_count(shape);
    std::vector<float> data(count);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * sizeof(float)));
    if (!in || static_cast<std::size_t>(in.gcount()) != count * sizeof(float)) {
        raise(ErrorKind::IOFailure, "truncated payload in " + path.string());
    }
    return Tensor(std::move(shape), std::move(data));
}

}  // namespace

void write_clip_tensor(const std::filesystem::path& path, const Tensor& tensor) {
    write_tensor_file(path, tensor, kClipMagic);
}

Tensor read_clip_tensor(const std::filesystem::path& path) { return read_tensor_file(path, kClipMagic, "TCLP"); }

void write_weight_tensor(const std::filesystem::path& path, const Tensor& tensor) {
    write_tensor_file(path, tensor, kWeightMagic);
}

Tensor read_weight_tensor(const std::filesystem::path& path) { return read_tensor_file(path, kWeightMagic, "TWGT"); }

ClipTensor read_clip(const std::filesystem::path& path) {
    Tensor t = read_clip_tensor(path);
    if (t.rank() != 4) {
        raise(ErrorKind::ShapeMismatch, path.string() + ": clip tensor must be rank 4, got " + std::to_string(t.rank()));
    }
    return ClipTensor(std::move(t), path.stem().string());
}

void write_clip(const std::filesystem::path& path, const ClipTensor& clip) { write_clip_tensor(path, clip.data); }

std::vector<std::filesystem::path> list_clip_files(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        raise(ErrorKind::IOFailure, dir.string() + " is not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".tclp") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            raise(ErrorKind::IOFailure, "cannot open " + tmp.string() + " for writing");
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            std::filesystem::remove(tmp);
            raise(ErrorKind::IOFailure, "short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        raise(ErrorKind::IOFailure, "rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
    }
}

}  // namespace trel
