#pragma once

#include <filesystem>

#include "uvgb/image.hpp"

namespace uvgb {

// Reads an 8-bit grayscale PNG or binary PGM (P5). The format is taken from
// the file signature, not the extension. Colour and 16-bit inputs throw
// DataError.
MonoImage load_image(const std::filesystem::path& path);

// Writes PNG for a ".png" extension and P5 PGM for ".pgm".
void save_image(const MonoImage& img, const std::filesystem::path& path);

}  // namespace uvgb
