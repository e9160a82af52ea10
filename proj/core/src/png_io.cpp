#include "holo/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>

namespace holo {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

class PngWriter {
  public:
    PngWriter(const std::filesystem::path& path, int width, int height, int bit_depth, int color_type)
        : path_(path), file_(std::fopen(path.string().c_str(), "wb")) {
        if (!file_) fail(path, "cannot open for writing");
        png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (!png_) fail(path, "png_create_write_struct failed");
        info_ = png_create_info_struct(png_);
        if (!info_) fail(path, "png_create_info_struct failed");
        if (setjmp(png_jmpbuf(png_))) fail(path_, "libpng write error");
        png_init_io(png_, file_.get());
        png_set_IHDR(png_, info_, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                     bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
    }

    ~PngWriter() { png_destroy_write_struct(&png_, &info_); }

    png_structp png() { return png_; }
    png_infop info() { return info_; }

    void write_rows(std::vector<png_bytep>& rows) {
        if (setjmp(png_jmpbuf(png_))) fail(path_, "libpng write error");
        png_write_info(png_, info_);
        png_write_image(png_, rows.data());
        png_write_end(png_, nullptr);
    }

  private:
    std::filesystem::path path_;
    FilePtr file_;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
};

class PngReader {
  public:
    explicit PngReader(const std::filesystem::path& path)
        : path_(path), file_(std::fopen(path.string().c_str(), "rb")) {
        if (!file_) fail(path, "cannot open for reading");
        png_byte header[8];
        if (std::fread(header, 1, 8, file_.get()) != 8 || png_sig_cmp(header, 0, 8))
            fail(path, "not a PNG file");
        png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (!png_) fail(path, "png_create_read_struct failed");
        info_ = png_create_info_struct(png_);
        if (!info_) fail(path, "png_create_info_struct failed");
        if (setjmp(png_jmpbuf(png_))) fail(path_, "libpng read error");
        png_init_io(png_, file_.get());
        png_set_sig_bytes(png_, 8);
        png_read_info(png_, info_);
        width_ = static_cast<int>(png_get_image_width(png_, info_));
        height_ = static_cast<int>(png_get_image_height(png_, info_));
        bit_depth_ = png_get_bit_depth(png_, info_);
        color_type_ = png_get_color_type(png_, info_);
    }

    ~PngReader() { png_destroy_read_struct(&png_, &info_, nullptr); }

    int width() const { return width_; }
    int height() const { return height_; }
    int bit_depth() const { return bit_depth_; }
    int color_type() const { return color_type_; }
    const std::filesystem::path& path() const { return path_; }

    void read_rows(std::vector<png_bytep>& rows) {
        if (setjmp(png_jmpbuf(png_))) fail(path_, "libpng read error");
        png_read_image(png_, rows.data());
    }

  private:
    std::filesystem::path path_;
    FilePtr file_;
    png_structp png_ = nullptr;
    png_infop info_ = nullptr;
    int width_ = 0, height_ = 0, bit_depth_ = 0, color_type_ = 0;
};

}  // namespace

Grid2<float> snap_to_u8(const Grid2<float>& g) {
    Grid2<float> out(g.height, g.width);
    for (size_t i = 0; i < g.size(); ++i)
        out.data[i] = static_cast<float>(quantize_u8(g.data[i])) / 255.0f;
    return out;
}

Grid2<float> snap_to_u16(const Grid2<float>& g) {
    Grid2<float> out(g.height, g.width);
    for (size_t i = 0; i < g.size(); ++i)
        out.data[i] = static_cast<float>(quantize_u16(g.data[i])) / 65535.0f;
    return out;
}

void write_png_rgb8(const std::filesystem::path& path, const std::vector<Grid2<float>>& channels) {
    if (channels.size() != 3) fail(path, "expected 3 channels");
    const int h = channels[0].height, w = channels[0].width;
    for (const auto& c : channels)
        if (c.height != h || c.width != w) fail(path, "channel shape mismatch");
    std::vector<uint8_t> buf(static_cast<size_t>(h) * w * 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                buf[(static_cast<size_t>(y) * w + x) * 3 + c] = quantize_u8(channels[c].at(y, x));
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<size_t>(y) * w * 3;
    PngWriter writer(path, w, h, 8, PNG_COLOR_TYPE_RGB);
    writer.write_rows(rows);
}

std::vector<Grid2<float>> read_png_rgb8(const std::filesystem::path& path) {
    PngReader reader(path);
    if (reader.color_type() != PNG_COLOR_TYPE_RGB || reader.bit_depth() != 8)
        fail(path, "expected 8-bit RGB");
    const int h = reader.height(), w = reader.width();
    std::vector<uint8_t> buf(static_cast<size_t>(h) * w * 3);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<size_t>(y) * w * 3;
    reader.read_rows(rows);
    std::vector<Grid2<float>> channels(3, Grid2<float>(h, w));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                channels[c].at(y, x) =
                    static_cast<float>(buf[(static_cast<size_t>(y) * w + x) * 3 + c]) / 255.0f;
    return channels;
}

void write_png_gray16(const std::filesystem::path& path, const Grid2<float>& image) {
    const int h = image.height, w = image.width;
    std::vector<uint8_t> buf(static_cast<size_t>(h) * w * 2);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const uint16_t q = quantize_u16(image.at(y, x));
            buf[(static_cast<size_t>(y) * w + x) * 2] = static_cast<uint8_t>(q >> 8);
            buf[(static_cast<size_t>(y) * w + x) * 2 + 1] = static_cast<uint8_t>(q & 0xFF);
        }
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<size_t>(y) * w * 2;
    PngWriter writer(path, w, h, 16, PNG_COLOR_TYPE_GRAY);
    writer.write_rows(rows);
}

Grid2<float> read_png_gray16(const std::filesystem::path& path) {
    PngReader reader(path);
    if (reader.color_type() != PNG_COLOR_TYPE_GRAY || reader.bit_depth() != 16)
        fail(path, "expected 16-bit grayscale");
    const int h = reader.height(), w = reader.width();
    std::vector<uint8_t> buf(static_cast<size_t>(h) * w * 2);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<size_t>(y) * w * 2;
    reader.read_rows(rows);
    Grid2<float> image(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const uint16_t q = static_cast<uint16_t>(
                (buf[(static_cast<size_t>(y) * w + x) * 2] << 8) |
                buf[(static_cast<size_t>(y) * w + x) * 2 + 1]);
            image.at(y, x) = static_cast<float>(q) / 65535.0f;
        }
    return image;
}

Grid2<float> read_png_gray_any(const std::filesystem::path& path) {
    {
        PngReader probe(path);
        if (probe.color_type() != PNG_COLOR_TYPE_GRAY) fail(path, "expected grayscale");
        if (probe.bit_depth() == 16) {
            // fall through to the strict 16-bit reader below
        } else if (probe.bit_depth() == 8) {
            const int h = probe.height(), w = probe.width();
            std::vector<uint8_t> buf(static_cast<size_t>(h) * w);
            std::vector<png_bytep> rows(h);
            for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<size_t>(y) * w;
            probe.read_rows(rows);
            Grid2<float> image(h, w);
            for (size_t i = 0; i < image.size(); ++i)
                image.data[i] = static_cast<float>(buf[i]) / 255.0f;
            return image;
        } else {
            fail(path, "expected 8- or 16-bit grayscale");
        }
    }
    return read_png_gray16(path);
}

void write_png_indexed(const std::filesystem::path& path, const Grid2<uint8_t>& labels) {
    const int h = labels.height, w = labels.width;
    for (uint8_t v : labels.data)
        if (v >= 16) throw std::invalid_argument(path.string() + ": label out of palette range");
    // Fixed 16-entry palette; distinct hues so masks are inspectable.
    static const png_color kPalette[16] = {
        {0, 0, 0},       {230, 25, 75},   {60, 180, 75},   {0, 130, 200},  {255, 225, 25}, {145, 30, 180},
        {70, 240, 240},  {245, 130, 48},  {240, 50, 230},  {210, 245, 60}, {0, 128, 128},  {220, 190, 255},
        {170, 110, 40},  {128, 0, 0},     {170, 255, 195}, {128, 128, 0}};
    std::vector<uint8_t> buf(labels.data.begin(), labels.data.end());
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<size_t>(y) * w;
    PngWriter writer(path, w, h, 8, PNG_COLOR_TYPE_PALETTE);
    png_set_PLTE(writer.png(), writer.info(), kPalette, 16);
    writer.write_rows(rows);
}

Grid2<uint8_t> read_png_indexed(const std::filesystem::path& path) {
    PngReader reader(path);
    if (reader.color_type() != PNG_COLOR_TYPE_PALETTE || reader.bit_depth() != 8)
        fail(path, "expected 8-bit paletted image");
    const int h = reader.height(), w = reader.width();
    std::vector<uint8_t> buf(static_cast<size_t>(h) * w);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<size_t>(y) * w;
    reader.read_rows(rows);
    Grid2<uint8_t> labels(h, w);
    labels.data.assign(buf.begin(), buf.end());
    return labels;
}

void write_png_gray8(const std::filesystem::path& path, const Grid2<float>& image, float lo, float hi) {
    if (!(hi > lo)) fail(path, "invalid display range");
    Grid2<float> norm(image.height, image.width);
    for (size_t i = 0; i < image.size(); ++i) norm.data[i] = (image.data[i] - lo) / (hi - lo);
    const int h = image.height, w = image.width;
    std::vector<uint8_t> buf(static_cast<size_t>(h) * w);
    for (size_t i = 0; i < norm.size(); ++i) buf[i] = quantize_u8(norm.data[i]);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<size_t>(y) * w;
    PngWriter writer(path, w, h, 8, PNG_COLOR_TYPE_GRAY);
    writer.write_rows(rows);
}

}  // namespace holo
