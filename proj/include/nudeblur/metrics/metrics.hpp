#pragma once

#include "nudeblur/core/image.hpp"
#include "nudeblur/core/kernel.hpp"
#include "nudeblur/core/motion_field.hpp"

namespace nudeblur {

/// (1 / 2|Omega|) * sum of (du^2 + dv^2) over pixels.
double mse_motion(const MotionField& estimate, const MotionField& truth);

/// -10 log10(mse / 25^2); +inf when the fields are equal.
double psnr_motion(const MotionField& estimate, const MotionField& truth);
double psnr_from_mse_motion(double mse);

/// Per-pixel mean squared difference of the two rasterized kernels on a
/// support x support grid, averaged over pixels.
double mse_ker(const MotionField& estimate, const MotionField& truth, int support = kDefaultKernelSupport);

/// PSNR with peak 1 over all samples of all channels; +inf for equal images.
double psnr_image(const ImageBuffer& image, const ImageBuffer& truth);

}  // namespace nudeblur
