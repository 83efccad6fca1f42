#include "nudeblur/predict/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nudeblur/core/binary_io.hpp"
#include "nudeblur/error.hpp"
#include "nudeblur/simd/kernels.hpp"

namespace nudeblur {

namespace {

struct LayerShape {
  LayerType type;
  std::array<std::uint32_t, 4> dims;
};

constexpr std::array<LayerShape, 6> kReferenceStack{{
    {LayerType::Conv, {96, 3, 7, 7}},
    {LayerType::MaxPool, {0, 0, 2, 2}},
    {LayerType::Conv, {256, 96, 5, 5}},
    {LayerType::MaxPool, {0, 0, 2, 2}},
    {LayerType::FullyConnected, {1024, 256 * 4 * 4, 0, 0}},
    {LayerType::Softmax, {73, 1024, 0, 0}},
}};

std::size_t weight_count(LayerType type, const std::array<std::uint32_t, 4>& d) {
  switch (type) {
    case LayerType::Conv:
      return static_cast<std::size_t>(d[0]) * d[1] * d[2] * d[3];
    case LayerType::FullyConnected:
    case LayerType::Softmax:
      return static_cast<std::size_t>(d[0]) * d[1];
    case LayerType::MaxPool:
      return 0;
  }
  return 0;
}

std::size_t bias_count(LayerType type, const std::array<std::uint32_t, 4>& d) {
  return type == LayerType::MaxPool ? 0 : d[0];
}

const char* layer_name(LayerType t) {
  switch (t) {
    case LayerType::Conv: return "conv";
    case LayerType::MaxPool: return "maxpool";
    case LayerType::FullyConnected: return "fc";
    case LayerType::Softmax: return "softmax";
  }
  return "?";
}

// Activations in channel-major (C, H, W) layout.
struct Tensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;
};

Tensor conv_relu(const Tensor& in, const CnnLayer& layer) {
  const int out_c = static_cast<int>(layer.dims[0]);
  const int kh = static_cast<int>(layer.dims[2]);
  const int kw = static_cast<int>(layer.dims[3]);
  const int oh = in.height - kh + 1;
  const int ow = in.width - kw + 1;
  const std::size_t k = static_cast<std::size_t>(in.channels) * kh * kw;

  // im2col: one row per output position, ordered like a filter (c, ky, kx).
  std::vector<float> cols(static_cast<std::size_t>(oh) * ow * k);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      float* row = &cols[(static_cast<std::size_t>(y) * ow + x) * k];
      for (int c = 0; c < in.channels; ++c) {
        for (int ky = 0; ky < kh; ++ky) {
          const float* src = &in.data[(static_cast<std::size_t>(c) * in.height + y + ky) * in.width + x];
          std::copy(src, src + kw, row);
          row += kw;
        }
      }
    }
  }

  const auto& kernels = simd::active();
  Tensor out{out_c, oh, ow, std::vector<float>(static_cast<std::size_t>(out_c) * oh * ow)};
  for (int o = 0; o < out_c; ++o) {
    const float* filter = &layer.weights[static_cast<std::size_t>(o) * k];
    float* dst = &out.data[static_cast<std::size_t>(o) * oh * ow];
    for (int p = 0; p < oh * ow; ++p) {
      const float v = kernels.dot_f32(filter, &cols[static_cast<std::size_t>(p) * k], k) + layer.biases[o];
      dst[p] = std::max(v, 0.0f);
    }
  }
  return out;
}

Tensor max_pool(const Tensor& in, const CnnLayer& layer) {
  const int kh = static_cast<int>(layer.dims[2]);
  const int kw = static_cast<int>(layer.dims[3]);
  Tensor out{in.channels, in.height / kh, in.width / kw, {}};
  out.data.resize(static_cast<std::size_t>(out.channels) * out.height * out.width);
  for (int c = 0; c < in.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        float m = -INFINITY;
        for (int dy = 0; dy < kh; ++dy) {
          for (int dx = 0; dx < kw; ++dx) {
            m = std::max(m, in.data[(static_cast<std::size_t>(c) * in.height + y * kh + dy) * in.width + x * kw + dx]);
          }
        }
        out.data[(static_cast<std::size_t>(c) * out.height + y) * out.width + x] = m;
      }
    }
  }
  return out;
}

std::vector<float> dense(const std::vector<float>& in, const CnnLayer& layer) {
  const std::size_t out_n = layer.dims[0];
  const std::size_t in_n = layer.dims[1];
  const auto& kernels = simd::active();
  std::vector<float> out(out_n);
  for (std::size_t o = 0; o < out_n; ++o) {
    out[o] = kernels.dot_f32(&layer.weights[o * in_n], in.data(), in_n) + layer.biases[o];
  }
  return out;
}

}  // namespace

CnnModel make_constant_model(float value) {
  CnnModel model;
  for (const LayerShape& s : kReferenceStack) {
    CnnLayer layer{s.type, s.dims, {}, {}};
    layer.weights.assign(weight_count(s.type, s.dims), value);
    layer.biases.assign(bias_count(s.type, s.dims), value);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

void validate_model(const CnnModel& model) {
  if (model.layers.size() != kReferenceStack.size()) {
    throw Error(ErrorKind::ModelFormat, "expected " + std::to_string(kReferenceStack.size()) + " layers, got " +
                                            std::to_string(model.layers.size()));
  }
  for (std::size_t i = 0; i < kReferenceStack.size(); ++i) {
    const CnnLayer& l = model.layers[i];
    const LayerShape& s = kReferenceStack[i];
    if (l.type != s.type || l.dims != s.dims) {
      throw Error(ErrorKind::ModelFormat, "layer " + std::to_string(i) + " (" + layer_name(l.type) +
                                              ") does not match the expected " + layer_name(s.type) + " shape");
    }
    if (l.weights.size() != weight_count(l.type, l.dims) || l.biases.size() != bias_count(l.type, l.dims)) {
      throw Error(ErrorKind::ModelFormat, "layer " + std::to_string(i) + " has the wrong parameter count");
    }
  }
}

std::vector<std::uint8_t> encode_model(const CnnModel& model) {
  validate_model(model);
  binary::Writer w;
  w.magic("CNNW");
  w.u32(model.version);
  w.u32(static_cast<std::uint32_t>(model.layers.size()));
  if (model.version >= 2) {
    for (float m : model.channel_mean) w.f32(m);
  }
  for (const CnnLayer& l : model.layers) {
    w.u8(static_cast<std::uint8_t>(l.type));
    for (std::uint32_t d : l.dims) w.u32(d);
    for (float v : l.weights) w.f32(v);
    for (float v : l.biases) w.f32(v);
  }
  return w.bytes();
}

void save_model(const std::filesystem::path& path, const CnnModel& model) {
  binary::write_file(path, encode_model(model));
}

CnnModel decode_model(std::vector<std::uint8_t> bytes) {
  binary::Reader r(std::move(bytes), ErrorKind::ModelFormat, "CNNW");
  r.expect_magic("CNNW");
  CnnModel model;
  model.version = r.u32();
  if (model.version < 1 || model.version > 2) r.fail("unsupported version " + std::to_string(model.version));
  const std::uint32_t count = r.u32();
  if (count != kReferenceStack.size()) r.fail("expected 6 layers, header says " + std::to_string(count));
  if (model.version >= 2) {
    for (float& m : model.channel_mean) m = r.f32();
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t at = r.offset();
    const std::uint8_t tag = r.u8();
    if (tag > 3) r.fail_at(at, "unknown layer type tag " + std::to_string(tag));
    CnnLayer l{static_cast<LayerType>(tag), {}, {}, {}};
    for (std::uint32_t& d : l.dims) d = r.u32();
    const LayerShape& s = kReferenceStack[i];
    if (l.type != s.type || l.dims != s.dims) {
      r.fail_at(at, "layer " + std::to_string(i) + " shape does not match the expected " + layer_name(s.type));
    }
    l.weights.resize(weight_count(l.type, l.dims));
    for (float& v : l.weights) v = r.f32();
    l.biases.resize(bias_count(l.type, l.dims));
    for (float& v : l.biases) v = r.f32();
    model.layers.push_back(std::move(l));
  }
  r.expect_end();
  return model;
}

CnnModel load_model(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes = binary::read_file(path);
  try {
    return decode_model(std::move(bytes));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

MotionDistribution cnn_forward(const CnnModel& model, const ImageBuffer& patch) {
  if (patch.width() != kPatchSize || patch.height() != kPatchSize || patch.channels() != 3) {
    throw Error(ErrorKind::ModelFormat, "classifier input must be a 30x30x3 patch");
  }
  validate_model(model);

  Tensor t{3, kPatchSize, kPatchSize, std::vector<float>(3 * kPatchSize * kPatchSize)};
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < kPatchSize; ++y) {
      for (int x = 0; x < kPatchSize; ++x) {
        t.data[(static_cast<std::size_t>(c) * kPatchSize + y) * kPatchSize + x] =
            static_cast<float>(patch.at(x, y, c)) - model.channel_mean[c];
      }
    }
  }

  std::vector<float> flat;
  for (const CnnLayer& layer : model.layers) {
    switch (layer.type) {
      case LayerType::Conv:
        t = conv_relu(t, layer);
        break;
      case LayerType::MaxPool:
        t = max_pool(t, layer);
        break;
      case LayerType::FullyConnected:
        flat = dense(t.data.empty() ? flat : t.data, layer);
        t.data.clear();
        for (float& v : flat) v = std::max(v, 0.0f);
        break;
      case LayerType::Softmax:
        flat = dense(flat, layer);
        break;
    }
  }

  MotionDistribution d{CandidateSetId::Base, std::vector<double>(flat.size())};
  const double peak = *std::max_element(flat.begin(), flat.end());
  double z = 0.0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    d.probs[i] = std::exp(static_cast<double>(flat[i]) - peak);
    z += d.probs[i];
  }
  for (double& p : d.probs) p /= z;
  return d;
}

}  // namespace nudeblur
