#include "histspec/cli/pgm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

#include "histspec/errors.hpp"

namespace histspec::pgm {

namespace {

void skip_space_and_comments(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

unsigned long read_number(std::istream& in, const char* what) {
    skip_space_and_comments(in);
    if (!std::isdigit(in.peek())) {
        throw FormatError(std::string("PGM: expected ") + what);
    }
    unsigned long value = 0;
    while (std::isdigit(in.peek())) {
        value = value * 10 + static_cast<unsigned long>(in.get() - '0');
        if (value > (1ul << 31)) {
            throw FormatError(std::string("PGM: ") + what + " out of range");
        }
    }
    return value;
}

}  // namespace

GrayImage read(std::istream& in) {
    char magic[2] = {};
    if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
        throw FormatError("PGM: missing P2/P5 magic number");
    }
    const bool binary = magic[1] == '5';

    const unsigned long width = read_number(in, "width");
    const unsigned long height = read_number(in, "height");
    const unsigned long maxval = read_number(in, "maxval");
    if (width == 0 || height == 0) {
        throw FormatError("PGM: zero image dimension");
    }
    if (maxval == 0 || maxval > 255) {
        throw FormatError("PGM: maxval must be in [1, 255], got " + std::to_string(maxval));
    }

    if (width * height > (1ul << 30)) {
        throw FormatError("PGM: image too large");
    }
    const std::size_t count = width * height;
    std::vector<Intensity> data(count);
    if (binary) {
        // Exactly one whitespace byte separates maxval from the raster.
        if (!std::isspace(in.get())) {
            throw FormatError("PGM: missing whitespace after maxval");
        }
        std::vector<unsigned char> raw(count);
        if (!in.read(reinterpret_cast<char*>(raw.data()),
                     static_cast<std::streamsize>(count))) {
            throw FormatError("PGM: truncated binary raster");
        }
        for (std::size_t i = 0; i < count; ++i) {
            data[i] = raw[i];
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            data[i] = static_cast<Intensity>(std::min(read_number(in, "sample"), 65535ul));
        }
    }
    for (Intensity v : data) {
        if (v > maxval) {
            throw FormatError("PGM: sample exceeds maxval");
        }
    }
    return GrayImage(width, height, static_cast<std::uint32_t>(maxval + 1), std::move(data));
}

GrayImage read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return read(in);
}

void write(std::ostream& out, const GrayImage& img) {
    if (img.levels() > 256 || img.levels() < 2) {
        throw InvalidArgument("PGM writer supports 2..256 levels");
    }
    out << "P5\n" << img.width() << ' ' << img.height() << '\n' << (img.levels() - 1) << '\n';
    std::vector<char> raw(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        raw[i] = static_cast<char>(img.pixels()[i]);
    }
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

void write_file(const std::filesystem::path& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write " + path.string());
    }
    write(out, img);
    if (!out) {
        throw FormatError("write failed for " + path.string());
    }
}

}  // namespace histspec::pgm
