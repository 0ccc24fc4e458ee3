#include <cctype>
#include <fstream>
#include <iterator>

#include "repclust/error.hpp"
#include "repclust/overlap.hpp"

namespace repclust {

namespace {

class NetpbmReader {
public:
    NetpbmReader(const std::string& path, std::string bytes)
        : path_(path), bytes_(std::move(bytes)) {}

    std::size_t next_uint() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_])))
            throw FormatError(FormatErrorKind::malformed, path_, "expected an unsigned integer");
        std::size_t v = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            v = v * 10 + std::size_t(bytes_[pos_] - '0');
            if (v > (1u << 24)) throw FormatError(FormatErrorKind::malformed, path_, "value too large");
            ++pos_;
        }
        return v;
    }

    // Exactly one whitespace byte separates the header from binary data.
    void skip_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw FormatError(FormatErrorKind::malformed, path_, "missing separator before raster");
        ++pos_;
    }

    std::string_view rest() const { return std::string_view(bytes_).substr(pos_); }
    std::string_view magic() const { return std::string_view(bytes_).substr(0, 2); }
    void skip_magic() { pos_ = 2; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string path_;
    std::string bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

ToyImage load_netpbm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(path, "cannot open for reading");
    NetpbmReader r(path, std::string((std::istreambuf_iterator<char>(f)),
                                     std::istreambuf_iterator<char>()));
    const std::string magic(r.magic());
    std::size_t channels;
    bool binary;
    if (magic == "P2") channels = 1, binary = false;
    else if (magic == "P5") channels = 1, binary = true;
    else if (magic == "P3") channels = 3, binary = false;
    else if (magic == "P6") channels = 3, binary = true;
    else throw FormatError(FormatErrorKind::malformed, path, "not a PGM/PPM file");
    r.skip_magic();
    const std::size_t w = r.next_uint();
    const std::size_t h = r.next_uint();
    const std::size_t maxval = r.next_uint();
    if (w == 0 || h == 0) throw FormatError(FormatErrorKind::malformed, path, "empty image");
    if (maxval == 0 || maxval > 255)
        throw FormatError(FormatErrorKind::malformed, path, "maxval must lie in [1, 255]");

    const std::size_t count = w * h * channels;
    std::vector<std::uint8_t> px(count);
    if (binary) {
        r.skip_single_space();
        const auto raster = r.rest();
        if (raster.size() < count)
            throw FormatError(FormatErrorKind::truncated, path,
                              "raster holds " + std::to_string(raster.size()) + " of " +
                                  std::to_string(count) + " samples");
        for (std::size_t i = 0; i < count; ++i) {
            px[i] = static_cast<std::uint8_t>(raster[i]);
            if (px[i] > maxval)
                throw FormatError(FormatErrorKind::malformed, path, "sample exceeds maxval",
                                  i / (w * channels), (i / channels) % w);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t v;
            try {
                v = r.next_uint();
            } catch (const FormatError&) {
                throw FormatError(FormatErrorKind::truncated, path,
                                  "expected " + std::to_string(count) + " samples, found " +
                                      std::to_string(i));
            }
            if (v > maxval)
                throw FormatError(FormatErrorKind::malformed, path, "sample exceeds maxval",
                                  i / (w * channels), (i / channels) % w);
            px[i] = static_cast<std::uint8_t>(v);
        }
    }
    return ToyImage(h, w, channels, std::move(px));
}

void save_netpbm(const ToyImage& img, const std::string& path) {
    if (img.channels != 1 && img.channels != 3)
        throw InvalidArgument("netpbm output supports 1 or 3 channels");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path, "cannot open for writing");
    f << (img.channels == 1 ? "P5" : "P6") << '\n' << img.width << ' ' << img.height << "\n255\n";
    f.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (!f) throw IoError(path, "write failed");
}

}  // namespace repclust
