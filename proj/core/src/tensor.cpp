#include "trel/tensor.hpp"

#include <cmath>
#include <cstring>

namespace trel {

std::size_t Tensor::element_count(const std::vector<int>& shape) {
    if (shape.empty()) {
        raise(ErrorKind::ShapeMismatch, "tensor shape must have at least one dimension");
    }
    std::size_t n = 1;
    for (int d : shape) {
        if (d < 1) {
            raise(ErrorKind::ShapeMismatch, "tensor dimension must be >= 1, got " + std::to_string(d));
        }
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

Tensor::Tensor(std::vector<int> shape)
    : shape_(std::move(shape)), data_(element_count(shape_), 0.0f) {}

Tensor::Tensor(std::vector<int> shape, std::vector<float> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (element_count(shape_) != data_.size()) {
        raise(ErrorKind::ShapeMismatch,
              "data length " + std::to_string(data_.size()) + " does not match shape product " +
                  std::to_string(element_count(shape_)));
    }
}

Tensor Tensor::full(std::vector<int> shape, float value) {
    Tensor t(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), value);
    return t;
}

bool Tensor::all_finite() const noexcept {
    for (float v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

ClipTensor::ClipTensor(Tensor t, std::string id, std::optional<int> lbl)
    : data(std::move(t)), clip_id(std::move(id)), label(lbl) {
    if (data.rank() != 4) {
        raise(ErrorKind::ShapeMismatch, "clip tensor must be [N,C,H,W], got rank " + std::to_string(data.rank()));
    }
}

std::vector<int> uniform_sample_indices(int total_frames, int sample_count) {
    if (sample_count < 1 || sample_count > total_frames) {
        raise(ErrorKind::InvalidFrameCount,
              "cannot sample " + std::to_string(sample_count) + " frames from " + std::to_string(total_frames));
    }
    std::vector<int> indices;
    indices.reserve(static_cast<std::size_t>(sample_count));
    const std::int64_t n = total_frames;
    const std::int64_t f = sample_count;
    for (std::int64_t i = 0; i < f; ++i) {
        const std::int64_t start = i * n / f;
        const std::int64_t end = (i + 1) * n / f - 1;
        indices.push_back(static_cast<int>((start + end) / 2));
    }
    return indices;
}

ClipTensor uniform_sample(const ClipTensor& video, int sample_count) {
    const auto indices = uniform_sample_indices(video.frames(), sample_count);
    std::vector<int> shape = video.data.shape();
    shape[0] = sample_count;
    Tensor out(std::move(shape));
    const std::size_t stride = video.frame_stride();
    for (std::size_t i = 0; i < indices.size(); ++i) {
        std::memcpy(out.data() + i * stride, video.frame(indices[i]), stride * sizeof(float));
    }
    return ClipTensor(std::move(out), video.clip_id, video.label);
}

}  // namespace trel
