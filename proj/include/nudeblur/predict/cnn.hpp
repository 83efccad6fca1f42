#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "nudeblur/predict/distribution.hpp"
#include "nudeblur/predict/patch.hpp"

namespace nudeblur {

enum class LayerType : std::uint8_t { Conv = 0, MaxPool = 1, FullyConnected = 2, Softmax = 3 };

/// dims are (out, in, kh, kw) with zeros where unused. Conv and fully
/// connected layers are followed by ReLU; pooling uses stride = window.
struct CnnLayer {
  LayerType type;
  std::array<std::uint32_t, 4> dims{};
  std::vector<float> weights;  // out-major, row-major within each filter
  std::vector<float> biases;
};

/// Patch classifier C1-M2-C3-M4-F5-S6 over a 30 x 30 x 3 input:
/// conv 96@7x7 -> pool 2 -> conv 256@5x5 -> pool 2 -> fc 1024 -> softmax 73.
struct CnnModel {
  std::uint32_t version = 1;
  std::vector<CnnLayer> layers;
  // Subtracted from the input channels; carried by version 2 files.
  std::array<float, 3> channel_mean{0.0f, 0.0f, 0.0f};
};

/// The reference layer stack with every weight and bias set to `value`.
CnnModel make_constant_model(float value = 0.0f);

/// Throws Error(ModelFormat) unless the layer stack is the reference one.
void validate_model(const CnnModel& model);

/// "CNNW", u32 version, u32 layer count, [version >= 2: 3 f32 channel means],
/// then per layer: u8 type, u32 dims[4], f32 weights then biases.
CnnModel load_model(const std::filesystem::path& path);
CnnModel decode_model(std::vector<std::uint8_t> bytes);
std::vector<std::uint8_t> encode_model(const CnnModel& model);
void save_model(const std::filesystem::path& path, const CnnModel& model);

/// Softmax over the 73 base candidates. Deterministic: identical inputs give
/// bit-identical outputs on a given kernel table.
MotionDistribution cnn_forward(const CnnModel& model, const ImageBuffer& patch);

}  // namespace nudeblur
