#pragma once

#include <span>
#include <string>
#include <string_view>

#include "trel/tensor.hpp"

namespace trel {

enum class LayerKind {
    Conv3D,
    Conv2DPerFrame,
    TemporalDepthwiseConv,
    Linear,
    ReLU,
    BatchNorm,
    SpatialMaxPool,
    SpatialAvgPool,
    GlobalSpatialAvgPool,
    ResidualAdd,
    PerFrameHead,
};

std::string_view to_string(LayerKind kind);
bool layer_kind_from_string(std::string_view name, LayerKind& out);

// True for kinds that own a weight tensor and mix it linearly with the input
// (the kinds the z+/z^beta/epsilon redistribution rules apply to).
bool is_weighted(LayerKind kind);
// True for kinds that mix information across frames.
bool is_temporal(LayerKind kind);

struct LayerParams {
    int out_channels = 0;
    int kernel_t = 1;
    int kernel_h = 1;
    int kernel_w = 1;
    int stride_h = 1;
    int stride_w = 1;
    int pad_t_front = 0;  // temporal zero padding, leading/trailing
    int pad_t_back = 0;
    int pad_h = 0;
    int pad_w = 0;
};

// One executable layer: kind + params + non-owning weight views. BatchNorm
// carries the folded inference-mode affine as weight=scale, bias=shift.
struct LayerDef {
    LayerKind kind = LayerKind::ReLU;
    LayerParams params;
    const Tensor* weight = nullptr;
    const Tensor* bias = nullptr;
};

// Output shape for `def` applied to inputs of the given shapes. Throws
// ShapeMismatch on any input/weight incompatibility.
std::vector<int> layer_output_shape(const LayerDef& def, std::span<const std::vector<int>> input_shapes);

// Runs one layer forward. All activations are [N,C,H,W] except the
// PerFrameHead output, which is [N,K]. Deterministic; accumulates in double.
Tensor layer_forward(const LayerDef& def, std::span<const Tensor* const> inputs);
Tensor layer_forward(const LayerDef& def, const Tensor& input);

// Throws NonFiniteValue if `t` contains NaN or Inf.
void ensure_finite(const Tensor& t, const std::string& context);

}  // namespace trel
