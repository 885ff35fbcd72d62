#pragma once

#include <string>

#include "sparrow/image.hpp"

namespace sparrow {

/// Reads an 8- or 16-bit RGB PNG and normalizes intensities to [0,1]
/// by dividing by (2^bit_depth - 1). Throws IoError on unreadable or
/// non-RGB input.
LinearImage load_png16(const std::string& path);

/// Writes a 16-bit RGB PNG; values are clipped to [0,1] and quantized
/// by rounding to the nearest 16-bit code. Loading the result back is
/// bit-exact for images that came from load_png16.
void save_png16(const LinearImage& img, const std::string& path);

}  // namespace sparrow
