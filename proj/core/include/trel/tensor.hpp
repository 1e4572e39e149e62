#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trel/errors.hpp"

namespace trel {

// Dense row-major tensor of 32-bit floats. Shapes are immutable after
// construction; every dimension is >= 1.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<int> shape);
    Tensor(std::vector<int> shape, std::vector<float> data);

    static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<int> shape, float value);

    const std::vector<int>& shape() const noexcept { return shape_; }
    int rank() const noexcept { return static_cast<int>(shape_.size()); }
    int dim(int i) const { return shape_.at(static_cast<std::size_t>(i)); }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    float* data() noexcept { return data_.data(); }
    const float* data() const noexcept { return data_.data(); }
    std::vector<float>& values() noexcept { return data_; }
    const std::vector<float>& values() const noexcept { return data_; }

    float operator[](std::size_t i) const { return data_[i]; }
    float& operator[](std::size_t i) { return data_[i]; }

    bool same_shape(const Tensor& other) const noexcept { return shape_ == other.shape_; }
    bool all_finite() const noexcept;

    // Number of elements implied by a shape; rejects non-positive dims.
    static std::size_t element_count(const std::vector<int>& shape);

private:
    std::vector<int> shape_;
    std::vector<float> data_;
};

// A video clip laid out as [N, C, H, W].
struct ClipTensor {
    Tensor data;
    std::string clip_id;
    std::optional<int> label;

    ClipTensor() = default;
    ClipTensor(Tensor t, std::string id, std::optional<int> lbl = std::nullopt);

    int frames() const { return data.dim(0); }
    int channels() const { return data.dim(1); }
    int height() const { return data.dim(2); }
    int width() const { return data.dim(3); }

    std::size_t frame_stride() const { return data.size() / static_cast<std::size_t>(frames()); }
    const float* frame(int i) const { return data.data() + static_cast<std::size_t>(i) * frame_stride(); }
    float* frame(int i) { return data.data() + static_cast<std::size_t>(i) * frame_stride(); }
};

// Segment-center frame indices for uniform sampling: segment i spans
// [floor(i*N/F), floor((i+1)*N/F)-1], the lower center is taken.
std::vector<int> uniform_sample_indices(int total_frames, int sample_count);

// Selects one center frame per segment out of `video`; keeps id and label.
ClipTensor uniform_sample(const ClipTensor& video, int sample_count);

}  // namespace trel
