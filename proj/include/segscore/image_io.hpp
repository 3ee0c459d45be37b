#ifndef SEGSCORE_IMAGE_IO_HPP
#define SEGSCORE_IMAGE_IO_HPP

#include <png.h>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "segscore/core.hpp"

namespace segscore {

namespace detail {

// Minimal binary PGM (P5) reader. Header tokens may be separated by any
// whitespace and '#' comments; pixel data follows the single whitespace
// byte after maxval.
inline LabelMap load_pgm(const std::vector<unsigned char>& data, const std::string& name) {
    std::size_t pos = 2;  // past "P5"
    auto next_token = [&]() -> long {
        while (pos < data.size()) {
            if (std::isspace(data[pos])) { ++pos; continue; }
            if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= data.size() || !std::isdigit(data[pos]))
            throw IoError(name + ": corrupt PGM header");
        long v = 0;
        while (pos < data.size() && std::isdigit(data[pos])) v = v * 10 + (data[pos++] - '0');
        return v;
    };
    const long w = next_token();
    const long h = next_token();
    const long maxval = next_token();
    if (pos >= data.size() || !std::isspace(data[pos]))
        throw IoError(name + ": corrupt PGM header");
    ++pos;
    if (maxval < 1) throw IoError(name + ": corrupt PGM header");
    if (maxval > 255)
        throw ValidationError(name + ": unsupported pixel format (maxval " + std::to_string(maxval) +
                              " implies 16-bit samples); re-encode as 8-bit");
    if (w < 1 || h < 1) throw ValidationError(name + ": invalid PGM dimensions");
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (data.size() - pos < n) throw IoError(name + ": truncated PGM pixel data");
    std::vector<std::int32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = data[pos + i];
    return LabelMap(static_cast<int>(w), static_cast<int>(h), std::move(labels));
}

struct PngReadCtx {
    const unsigned char* data;
    std::size_t size;
    std::size_t pos;
};

inline void png_mem_read(png_structp png, png_bytep out, png_size_t len) {
    auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
    if (ctx->pos + len > ctx->size) png_error(png, "read past end of PNG data");
    std::copy(ctx->data + ctx->pos, ctx->data + ctx->pos + len, out);
    ctx->pos += len;
}

inline LabelMap load_png(const std::vector<unsigned char>& data, const std::string& name) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError(name + ": failed to initialize PNG reader");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError(name + ": failed to initialize PNG reader");
    }

    std::vector<std::int32_t> labels;
    int width = 0, height = 0;
    int color_type = 0, bit_depth = 0;
    bool unsupported = false;
    std::string unsupported_what;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(name + ": corrupt PNG data");
    }

    PngReadCtx ctx{data.data(), data.size(), 0};
    png_set_read_fn(png, &ctx, png_mem_read);
    png_read_info(png, info);

    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    color_type = png_get_color_type(png, info);
    bit_depth = png_get_bit_depth(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY) {
        unsupported = true;
        unsupported_what = name +
            ": unsupported pixel format (multi-channel or palette PNG); "
            "pre-quantize to single-channel 8-bit grayscale where pixel value = label id";
    } else if (bit_depth > 8) {
        unsupported = true;
        unsupported_what =
            name + ": unsupported pixel format (" + std::to_string(bit_depth) +
            "-bit PNG); re-encode as 8-bit grayscale";
    }
    if (unsupported) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ValidationError(unsupported_what);
    }

    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    std::vector<unsigned char> row(png_get_rowbytes(png, info));
    labels.resize(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < width; ++x)
            labels[static_cast<std::size_t>(y) * width + x] = row[x];
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return LabelMap(width, height, std::move(labels));
}

}  // namespace detail

/// Loads a label map from an 8-bit single-channel PGM (P5) or grayscale
/// PNG, pixel value = label id. The format is sniffed from the file's
/// magic bytes, not its extension.
inline LabelMap load_label_map(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(path.string() + ": read failure");
    if (data.size() >= 2 && data[0] == 'P' && data[1] == '5')
        return detail::load_pgm(data, path.string());
    static const unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (data.size() >= 8 && std::equal(kPngMagic, kPngMagic + 8, data.begin()))
        return detail::load_png(data, path.string());
    if (data.size() >= 2 && data[0] == 'P' && (data[1] == '2' || data[1] == '3' || data[1] == '6'))
        throw ValidationError(path.string() +
                              ": unsupported pixel format (only binary P5 PGM is supported; "
                              "P6/P3 color inputs must be pre-quantized to labels)");
    throw ValidationError(path.string() + ": unsupported image format (expected P5 PGM or PNG)");
}

/// Saves a label map as PGM or PNG depending on the file extension. Labels
/// must fit 8 bits.
inline void save_label_map(const LabelMap& map, const std::filesystem::path& path) {
    for (std::int32_t v : map.labels())
        if (v > 255)
            throw ValidationError(path.string() + ": label " + std::to_string(v) +
                                  " does not fit the 8-bit file format");

    const std::string ext = path.extension().string();
    if (ext == ".pgm") {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError(path.string() + ": cannot open for writing");
        out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
        for (std::int32_t v : map.labels()) out.put(static_cast<char>(v));
        out.flush();
        if (!out) throw IoError(path.string() + ": write failure");
        return;
    }
    if (ext == ".png") {
        std::FILE* fp = std::fopen(path.string().c_str(), "wb");
        if (!fp) throw IoError(path.string() + ": cannot open for writing");
        png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        png_infop info = png ? png_create_info_struct(png) : nullptr;
        if (!png || !info) {
            if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
            std::fclose(fp);
            throw IoError(path.string() + ": failed to initialize PNG writer");
        }
        if (setjmp(png_jmpbuf(png))) {
            png_destroy_write_struct(&png, &info);
            std::fclose(fp);
            throw IoError(path.string() + ": PNG write failure");
        }
        png_init_io(png, fp);
        png_set_IHDR(png, info, map.width(), map.height(), 8, PNG_COLOR_TYPE_GRAY,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        std::vector<unsigned char> row(map.width());
        for (int y = 0; y < map.height(); ++y) {
            for (int x = 0; x < map.width(); ++x) row[x] = static_cast<unsigned char>(map.at(x, y));
            png_write_row(png, row.data());
        }
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        return;
    }
    throw ValidationError(path.string() + ": unsupported output format (use .pgm or .png)");
}

}  // namespace segscore

#endif  // SEGSCORE_IMAGE_IO_HPP
