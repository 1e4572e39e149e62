#include "trel/layers.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace trel {

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv3D: return "Conv3D";
        case LayerKind::Conv2DPerFrame: return "Conv2DPerFrame";
        case LayerKind::TemporalDepthwiseConv: return "TemporalDepthwiseConv";
        case LayerKind::Linear: return "Linear";
        case LayerKind::ReLU: return "ReLU";
        case LayerKind::BatchNorm: return "BatchNorm";
        case LayerKind::SpatialMaxPool: return "SpatialMaxPool";
        case LayerKind::SpatialAvgPool: return "SpatialAvgPool";
        case LayerKind::GlobalSpatialAvgPool: return "GlobalSpatialAvgPool";
        case LayerKind::ResidualAdd: return "ResidualAdd";
        case LayerKind::PerFrameHead: return "PerFrameHead";
    }
    return "Unknown";
}

bool layer_kind_from_string(std::string_view name, LayerKind& out) {
    static constexpr std::array<LayerKind, 11> kinds = {
        LayerKind::Conv3D,        LayerKind::Conv2DPerFrame, LayerKind::TemporalDepthwiseConv,
        LayerKind::Linear,        LayerKind::ReLU,           LayerKind::BatchNorm,
        LayerKind::SpatialMaxPool, LayerKind::SpatialAvgPool, LayerKind::GlobalSpatialAvgPool,
        LayerKind::ResidualAdd,   LayerKind::PerFrameHead,
    };
    for (LayerKind k : kinds) {
        if (to_string(k) == name) {
            out = k;
            return true;
        }
    }
    return false;
}

bool is_weighted(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv3D:
        case LayerKind::Conv2DPerFrame:
        case LayerKind::TemporalDepthwiseConv:
        case LayerKind::Linear:
        case LayerKind::PerFrameHead:
            return true;
        default:
            return false;
    }
}

bool is_temporal(LayerKind kind) {
    return kind == LayerKind::Conv3D || kind == LayerKind::TemporalDepthwiseConv;
}

void ensure_finite(const Tensor& t, const std::string& context) {
    if (!t.all_finite()) {
        raise(ErrorKind::NonFiniteValue, "NaN/Inf in " + context);
    }
}

namespace {

[[noreturn]] void shape_fail(const LayerDef& def, const std::string& what) {
    raise(ErrorKind::ShapeMismatch, std::string(to_string(def.kind)) + ": " + what);
}

void require(bool cond, const LayerDef& def, const std::string& what) {
    if (!cond) shape_fail(def, what);
}

int pooled_extent(int in, int pad, int kernel, int stride) { return (in + 2 * pad - kernel) / stride + 1; }

const std::vector<int>& single_input(const LayerDef& def, std::span<const std::vector<int>> shapes) {
    if (shapes.size() != 1) shape_fail(def, "expects exactly one input");
    if (shapes[0].size() != 4) shape_fail(def, "input must be [N,C,H,W]");
    return shapes[0];
}

}  // namespace

std::vector<int> layer_output_shape(const LayerDef& def, std::span<const std::vector<int>> input_shapes) {
    const LayerParams& p = def.params;
    switch (def.kind) {
        case LayerKind::Conv3D: {
            const auto& in = single_input(def, input_shapes);
            require(def.weight != nullptr && def.weight->rank() == 5, def, "weight must be [Cout,Cin,Kt,Kh,Kw]");
            const auto& w = def.weight->shape();
            require(w[1] == in[1], def, "weight Cin " + std::to_string(w[1]) + " != input C " + std::to_string(in[1]));
            require(w[0] == p.out_channels, def, "weight Cout does not match params.out_channels");
            require(w[2] == p.kernel_t && w[3] == p.kernel_h && w[4] == p.kernel_w, def, "weight kernel dims mismatch");
            if (def.bias) require(def.bias->rank() == 1 && def.bias->dim(0) == w[0], def, "bias must be [Cout]");
            const int nt = in[0] + p.pad_t_front + p.pad_t_back - p.kernel_t + 1;
            const int ho = pooled_extent(in[2], p.pad_h, p.kernel_h, p.stride_h);
            const int wo = pooled_extent(in[3], p.pad_w, p.kernel_w, p.stride_w);
            require(nt >= 1 && ho >= 1 && wo >= 1, def, "kernel larger than padded input");
            return {nt, w[0], ho, wo};
        }
        case LayerKind::Conv2DPerFrame: {
            const auto& in = single_input(def, input_shapes);
            require(def.weight != nullptr && def.weight->rank() == 4, def, "weight must be [Cout,Cin,Kh,Kw]");
            const auto& w = def.weight->shape();
            require(w[1] == in[1], def, "weight Cin != input C");
            require(w[0] == p.out_channels, def, "weight Cout does not match params.out_channels");
            require(w[2] == p.kernel_h && w[3] == p.kernel_w, def, "weight kernel dims mismatch");
            if (def.bias) require(def.bias->rank() == 1 && def.bias->dim(0) == w[0], def, "bias must be [Cout]");
            const int ho = pooled_extent(in[2], p.pad_h, p.kernel_h, p.stride_h);
            const int wo = pooled_extent(in[3], p.pad_w, p.kernel_w, p.stride_w);
            require(ho >= 1 && wo >= 1, def, "kernel larger than padded input");
            return {in[0], w[0], ho, wo};
        }
        case LayerKind::TemporalDepthwiseConv: {
            const auto& in = single_input(def, input_shapes);
            require(def.weight != nullptr && def.weight->rank() == 2, def, "weight must be [C,Kt]");
            require(def.weight->dim(0) == in[1], def, "weight C != input C");
            require(def.weight->dim(1) == p.kernel_t, def, "weight Kt mismatch");
            if (def.bias) require(def.bias->rank() == 1 && def.bias->dim(0) == in[1], def, "bias must be [C]");
            const int nt = in[0] + p.pad_t_front + p.pad_t_back - p.kernel_t + 1;
            require(nt >= 1, def, "temporal kernel larger than padded input");
            return {nt, in[1], in[2], in[3]};
        }
        case LayerKind::Linear:
        case LayerKind::PerFrameHead: {
            const auto& in = single_input(def, input_shapes);
            require(in[2] == 1 && in[3] == 1, def, "input must be [N,C,1,1]; pool spatially first");
            require(def.weight != nullptr && def.weight->rank() == 2, def, "weight must be [Out,In]");
            require(def.weight->dim(1) == in[1], def, "weight In != input C");
            if (def.bias) require(def.bias->rank() == 1 && def.bias->dim(0) == def.weight->dim(0), def, "bias must be [Out]");
            if (def.kind == LayerKind::PerFrameHead) return {in[0], def.weight->dim(0)};
            return {in[0], def.weight->dim(0), 1, 1};
        }
        case LayerKind::ReLU:
            return single_input(def, input_shapes);
        case LayerKind::BatchNorm: {
            const auto& in = single_input(def, input_shapes);
            require(def.weight != nullptr && def.weight->rank() == 1 && def.weight->dim(0) == in[1], def,
                    "scale must be [C]");
            require(def.bias != nullptr && def.bias->rank() == 1 && def.bias->dim(0) == in[1], def, "shift must be [C]");
            return in;
        }
        case LayerKind::SpatialMaxPool:
        case LayerKind::SpatialAvgPool: {
            const auto& in = single_input(def, input_shapes);
            const int ho = pooled_extent(in[2], p.pad_h, p.kernel_h, p.stride_h);
            const int wo = pooled_extent(in[3], p.pad_w, p.kernel_w, p.stride_w);
            require(ho >= 1 && wo >= 1, def, "pool window larger than padded input");
            return {in[0], in[1], ho, wo};
        }
        case LayerKind::GlobalSpatialAvgPool: {
            const auto& in = single_input(def, input_shapes);
            return {in[0], in[1], 1, 1};
        }
        case LayerKind::ResidualAdd: {
            if (input_shapes.size() != 2) shape_fail(def, "expects exactly two inputs");
            require(input_shapes[0] == input_shapes[1], def, "addend shapes differ");
            return input_shapes[0];
        }
    }
    shape_fail(def, "unhandled kind");
}

namespace {

// x: [N,Cin,H,W] w: [Cout,Cin,Kt,Kh,Kw] -> [No,Cout,Ho,Wo], temporal stride 1
Tensor conv3d_forward(const LayerDef& def, const Tensor& x, const std::vector<int>& out_shape) {
    const LayerParams& p = def.params;
    const int n = x.dim(0), cin = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int no = out_shape[0], cout = out_shape[1], ho = out_shape[2], wo = out_shape[3];
    const Tensor& wt = *def.weight;
    Tensor out(out_shape);
    for (int t = 0; t < no; ++t) {
        for (int co = 0; co < cout; ++co) {
            const double b = def.bias ? (*def.bias)[static_cast<std::size_t>(co)] : 0.0;
            for (int oy = 0; oy < ho; ++oy) {
                for (int ox = 0; ox < wo; ++ox) {
                    double acc = b;
                    for (int ci = 0; ci < cin; ++ci) {
                        for (int dt = 0; dt < p.kernel_t; ++dt) {
                            const int it = t - p.pad_t_front + dt;
                            if (it < 0 || it >= n) continue;
                            for (int dy = 0; dy < p.kernel_h; ++dy) {
                                const int iy = oy * p.stride_h - p.pad_h + dy;
                                if (iy < 0 || iy >= h) continue;
                                for (int dx = 0; dx < p.kernel_w; ++dx) {
                                    const int ix = ox * p.stride_w - p.pad_w + dx;
                                    if (ix < 0 || ix >= w) continue;
                                    const std::size_t xi = ((static_cast<std::size_t>(it) * cin + ci) * h + iy) * w + ix;
                                    const std::size_t wi =
                                        (((static_cast<std::size_t>(co) * cin + ci) * p.kernel_t + dt) * p.kernel_h + dy) *
                                            p.kernel_w +
                                        dx;
                                    acc += static_cast<double>(x[xi]) * wt[wi];
                                }
                            }
                        }
                    }
                    out[((static_cast<std::size_t>(t) * cout + co) * ho + oy) * wo + ox] = static_cast<float>(acc);
                }
            }
        }
    }
    return out;
}

// x: [N,Cin,H,W] w: [Cout,Cin,Kh,Kw], frames independent
Tensor conv2d_forward(const LayerDef& def, const Tensor& x, const std::vector<int>& out_shape) {
    const LayerParams& p = def.params;
    const int n = x.dim(0), cin = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int cout = out_shape[1], ho = out_shape[2], wo = out_shape[3];
    const Tensor& wt = *def.weight;
    Tensor out(out_shape);
    for (int t = 0; t < n; ++t) {
        for (int co = 0; co < cout; ++co) {
            const double b = def.bias ? (*def.bias)[static_cast<std::size_t>(co)] : 0.0;
            for (int oy = 0; oy < ho; ++oy) {
                for (int ox = 0; ox < wo; ++ox) {
                    double acc = b;
                    for (int ci = 0; ci < cin; ++ci) {
                        for (int dy = 0; dy < p.kernel_h; ++dy) {
                            const int iy = oy * p.stride_h - p.pad_h + dy;
                            if (iy < 0 || iy >= h) continue;
                            for (int dx = 0; dx < p.kernel_w; ++dx) {
                                const int ix = ox * p.stride_w - p.pad_w + dx;
                                if (ix < 0 || ix >= w) continue;
                                const std::size_t xi = ((static_cast<std::size_t>(t) * cin + ci) * h + iy) * w + ix;
                                const std::size_t wi =
                                    ((static_cast<std::size_t>(co) * cin + ci) * p.kernel_h + dy) * p.kernel_w + dx;
                                acc += static_cast<double>(x[xi]) * wt[wi];
                            }
                        }
                    }
                    out[((static_cast<std::size_t>(t) * cout + co) * ho + oy) * wo + ox] = static_cast<float>(acc);
                }
            }
        }
    }
    return out;
}

// x: [N,C,H,W] w: [C,Kt], per-channel 1D convolution along time
Tensor temporal_depthwise_forward(const LayerDef& def, const Tensor& x, const std::vector<int>& out_shape) {
    const LayerParams& p = def.params;
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int no = out_shape[0];
    const Tensor& wt = *def.weight;
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    Tensor out(out_shape);
    for (int t = 0; t < no; ++t) {
        for (int ch = 0; ch < c; ++ch) {
            const double b = def.bias ? (*def.bias)[static_cast<std::size_t>(ch)] : 0.0;
            float* dst = out.data() + (static_cast<std::size_t>(t) * c + ch) * plane;
            for (std::size_t s = 0; s < plane; ++s) {
                double acc = b;
                for (int dt = 0; dt < p.kernel_t; ++dt) {
                    const int it = t - p.pad_t_front + dt;
                    if (it < 0 || it >= n) continue;
                    const std::size_t xi = (static_cast<std::size_t>(it) * c + ch) * plane + s;
                    acc += static_cast<double>(x[xi]) * wt[static_cast<std::size_t>(ch) * p.kernel_t + dt];
                }
                dst[s] = static_cast<float>(acc);
            }
        }
    }
    return out;
}

// x: [N,In,1,1] w: [Out,In]; PerFrameHead emits [N,Out]
Tensor linear_forward(const LayerDef& def, const Tensor& x, const std::vector<int>& out_shape) {
    const int n = x.dim(0), cin = x.dim(1);
    const Tensor& wt = *def.weight;
    const int cout = wt.dim(0);
    Tensor out(out_shape);
    for (int t = 0; t < n; ++t) {
        for (int co = 0; co < cout; ++co) {
            double acc = def.bias ? (*def.bias)[static_cast<std::size_t>(co)] : 0.0;
            for (int ci = 0; ci < cin; ++ci) {
                acc += static_cast<double>(x[static_cast<std::size_t>(t) * cin + ci]) *
                       wt[static_cast<std::size_t>(co) * cin + ci];
            }
            out[static_cast<std::size_t>(t) * cout + co] = static_cast<float>(acc);
        }
    }
    return out;
}

Tensor pool_forward(const LayerDef& def, const Tensor& x, const std::vector<int>& out_shape, bool is_max) {
    const LayerParams& p = def.params;
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int ho = out_shape[2], wo = out_shape[3];
    const double window = static_cast<double>(p.kernel_h) * p.kernel_w;  // zero padding counts toward the average
    Tensor out(out_shape);
    for (int t = 0; t < n; ++t) {
        for (int ch = 0; ch < c; ++ch) {
            const float* src = x.data() + (static_cast<std::size_t>(t) * c + ch) * h * w;
            float* dst = out.data() + (static_cast<std::size_t>(t) * c + ch) * ho * wo;
            for (int oy = 0; oy < ho; ++oy) {
                for (int ox = 0; ox < wo; ++ox) {
                    double acc = is_max ? -std::numeric_limits<double>::infinity() : 0.0;
                    for (int dy = 0; dy < p.kernel_h; ++dy) {
                        const int iy = oy * p.stride_h - p.pad_h + dy;
                        for (int dx = 0; dx < p.kernel_w; ++dx) {
                            const int ix = ox * p.stride_w - p.pad_w + dx;
                            const bool inside = iy >= 0 && iy < h && ix >= 0 && ix < w;
                            const double v = inside ? src[static_cast<std::size_t>(iy) * w + ix] : 0.0;
                            if (is_max) {
                                acc = std::max(acc, v);
                            } else {
                                acc += v;
                            }
                        }
                    }
                    dst[static_cast<std::size_t>(oy) * wo + ox] = static_cast<float>(is_max ? acc : acc / window);
                }
            }
        }
    }
    return out;
}

Tensor global_avg_pool_forward(const Tensor& x, const std::vector<int>& out_shape) {
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    Tensor out(out_shape);
    for (int t = 0; t < n; ++t) {
        for (int ch = 0; ch < c; ++ch) {
            const float* src = x.data() + (static_cast<std::size_t>(t) * c + ch) * plane;
            double acc = 0.0;
            for (std::size_t s = 0; s < plane; ++s) acc += src[s];
            out[static_cast<std::size_t>(t) * c + ch] = static_cast<float>(acc / static_cast<double>(plane));
        }
    }
    return out;
}

}  // namespace

Tensor layer_forward(const LayerDef& def, std::span<const Tensor* const> inputs) {
    std::vector<std::vector<int>> shapes;
    shapes.reserve(inputs.size());
    for (const Tensor* t : inputs) shapes.push_back(t->shape());
    const std::vector<int> out_shape = layer_output_shape(def, shapes);
    if (def.weight && !def.weight->all_finite()) {
        raise(ErrorKind::NonFiniteValue, std::string(to_string(def.kind)) + ": weight contains NaN/Inf");
    }

    Tensor out;
    switch (def.kind) {
        case LayerKind::Conv3D:
            out = conv3d_forward(def, *inputs[0], out_shape);
            break;
        case LayerKind::Conv2DPerFrame:
            out = conv2d_forward(def, *inputs[0], out_shape);
            break;
        case LayerKind::TemporalDepthwiseConv:
            out = temporal_depthwise_forward(def, *inputs[0], out_shape);
            break;
        case LayerKind::Linear:
        case LayerKind::PerFrameHead:
            out = linear_forward(def, *inputs[0], out_shape);
            break;
        case LayerKind::ReLU: {
            out = *inputs[0];
            for (float& v : out.values()) v = v > 0.0f ? v : 0.0f;
            break;
        }
        case LayerKind::BatchNorm: {
            const Tensor& x = *inputs[0];
            const int c = x.dim(1);
            const std::size_t plane = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
            out = Tensor(out_shape);
            for (int t = 0; t < x.dim(0); ++t) {
                for (int ch = 0; ch < c; ++ch) {
                    const float scale = (*def.weight)[static_cast<std::size_t>(ch)];
                    const float shift = (*def.bias)[static_cast<std::size_t>(ch)];
                    const std::size_t base = (static_cast<std::size_t>(t) * c + ch) * plane;
                    for (std::size_t s = 0; s < plane; ++s) out[base + s] = x[base + s] * scale + shift;
                }
            }
            break;
        }
        case LayerKind::SpatialMaxPool:
            out = pool_forward(def, *inputs[0], out_shape, /*is_max=*/true);
            break;
        case LayerKind::SpatialAvgPool:
            out = pool_forward(def, *inputs[0], out_shape, /*is_max=*/false);
            break;
        case LayerKind::GlobalSpatialAvgPool:
            out = global_avg_pool_forward(*inputs[0], out_shape);
            break;
        case LayerKind::ResidualAdd: {
            const Tensor& a = *inputs[0];
            const Tensor& b = *inputs[1];
            out = Tensor(out_shape);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
            break;
        }
    }
    ensure_finite(out, std::string(to_string(def.kind)) + " output");
    return out;
}

Tensor layer_forward(const LayerDef& def, const Tensor& input) {
    const Tensor* ptr = &input;
    return layer_forward(def, std::span<const Tensor* const>(&ptr, 1));
}

}  // namespace trel
