#include "uvgb/image_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "uvgb/error.hpp"

namespace uvgb {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw DataError("cannot open " + path.string());
    return f;
}

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    auto* what = static_cast<std::string*>(png_get_error_ptr(png));
    if (what) *what = msg;
    png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

MonoImage read_png(const fs::path& path) {
    auto file = open_file(path, "rb");
    std::string error;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
    if (!png) throw DataError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DataError("libpng initialisation failed");
    }

    // Nothing with a non-trivial destructor may be created between setjmp and
    // a longjmp back to it.
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0, height = 0;
    int bit_depth = 0, color_type = 0;
    enum class Reject { none, channels, depth };
    volatile Reject reject = Reject::none;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("corrupt PNG " + path.string() + ": " + error);
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);
    if (color_type != PNG_COLOR_TYPE_GRAY) {
        reject = Reject::channels;
    } else if (bit_depth != 8) {
        reject = Reject::depth;
    } else {
        pixels.resize(static_cast<std::size_t>(width) * height);
        rows.resize(height);
        for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * width;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    }
    png_destroy_read_struct(&png, &info, nullptr);

    if (reject == Reject::channels) throw DataError("multi-channel input: " + path.string());
    if (reject == Reject::depth) {
        throw DataError("unsupported format: " + std::to_string(bit_depth) + "-bit PNG " + path.string());
    }
    return MonoImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

void write_png(const MonoImage& img, const fs::path& path) {
    auto file = open_file(path, "wb");
    std::string error;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
    if (!png) throw DataError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DataError("libpng initialisation failed");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
    auto* base = const_cast<std::uint8_t*>(img.pixels().data());
    for (int y = 0; y < img.height(); ++y) rows[y] = base + static_cast<std::size_t>(y) * img.width();

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("failed writing PNG " + path.string() + ": " + error);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// Netpbm header token, skipping whitespace and '#' comments.
long read_pnm_token(std::istream& in, const fs::path& path) {
    int c = in.get();
    while (in && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            while (in && c != '\n') c = in.get();
        }
        c = in.get();
    }
    if (!in || !std::isdigit(c)) throw DataError("malformed PGM header in " + path.string());
    long value = 0;
    while (in && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > (1L << 30)) throw DataError("PGM dimension overflow in " + path.string());
        c = in.get();
    }
    return value;  // c is the single whitespace byte ending the token
}

MonoImage read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    char magic[2];
    in.read(magic, 2);
    if (magic[1] == '6' || magic[1] == '3') throw DataError("multi-channel input: " + path.string());
    if (magic[1] != '5') throw DataError("unsupported format: only binary P5 PGM is read, " + path.string());
    const long width = read_pnm_token(in, path);
    const long height = read_pnm_token(in, path);
    const long maxval = read_pnm_token(in, path);
    if (width <= 0 || height <= 0) throw DataError("PGM has zero dimension: " + path.string());
    if (maxval != 255) throw DataError("unsupported format: PGM maxval " + std::to_string(maxval) + " is not 8-bit");
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(pixels.size())) {
        throw DataError("truncated PGM data in " + path.string());
    }
    return MonoImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

void write_pgm(const MonoImage& img, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.size()));
    if (!out) throw DataError("failed writing " + path.string());
}

std::string lower_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return ext;
}

}  // namespace

MonoImage load_image(const fs::path& path) {
    if (!fs::exists(path)) throw DataError("missing file: " + path.string());
    std::array<unsigned char, 8> sig{};
    {
        std::ifstream in(path, std::ios::binary);
        in.read(reinterpret_cast<char*>(sig.data()), sig.size());
        if (in.gcount() < 2) throw DataError("unsupported format: " + path.string() + " is too short");
    }
    if (png_sig_cmp(sig.data(), 0, sig.size()) == 0) return read_png(path);
    if (sig[0] == 'P' && sig[1] >= '1' && sig[1] <= '6') return read_pgm(path);
    throw DataError("unsupported format: " + path.string());
}

void save_image(const MonoImage& img, const fs::path& path) {
    if (img.empty()) throw UsageError("cannot save an empty image");
    const auto ext = lower_extension(path);
    if (ext == ".png") {
        write_png(img, path);
    } else if (ext == ".pgm") {
        write_pgm(img, path);
    } else {
        throw UsageError("unsupported output extension '" + ext + "' (use .png or .pgm)");
    }
}

}  // namespace uvgb
