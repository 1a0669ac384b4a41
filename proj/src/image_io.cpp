#include "expbasin/image_io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace expbasin {

namespace {

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path);
}

std::uint32_t crc32(const unsigned char* data, std::size_t n, std::uint32_t crc = 0) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    crc ^= 0xFFFFFFFFu;
    for (std::size_t i = 0; i < n; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

std::uint32_t adler32(const unsigned char* data, std::size_t n) {
    std::uint32_t a = 1, b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        a = (a + data[i]) % 65521u;
        b = (b + a) % 65521u;
    }
    return (b << 16) | a;
}

void put_u32be(std::string& s, std::uint32_t v) {
    s.push_back(static_cast<char>((v >> 24) & 0xFF));
    s.push_back(static_cast<char>((v >> 16) & 0xFF));
    s.push_back(static_cast<char>((v >> 8) & 0xFF));
    s.push_back(static_cast<char>(v & 0xFF));
}

void append_chunk(std::string& out, const char type[4], const std::string& data) {
    put_u32be(out, static_cast<std::uint32_t>(data.size()));
    std::string body(type, 4);
    body += data;
    out += body;
    put_u32be(out, crc32(reinterpret_cast<const unsigned char*>(body.data()), body.size()));
}

}  // namespace

void write_pgm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& gray) {
    if (gray.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw std::invalid_argument("pixel buffer does not match dimensions");
    char header[64];
    int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", width, height);
    std::string bytes(header, static_cast<std::size_t>(n));
    bytes.append(reinterpret_cast<const char*>(gray.data()), gray.size());
    write_file(path, bytes);
}

void write_png_gray(const std::string& path, int width, int height,
                    const std::vector<std::uint8_t>& gray) {
    if (gray.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw std::invalid_argument("pixel buffer does not match dimensions");
    // raw scanlines, filter byte 0 per row
    std::string raw;
    raw.reserve(gray.size() + static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r) {
        raw.push_back('\0');
        raw.append(reinterpret_cast<const char*>(gray.data()) +
                       static_cast<std::size_t>(r) * static_cast<std::size_t>(width),
                   static_cast<std::size_t>(width));
    }
    // zlib stream with stored deflate blocks
    std::string z;
    z.push_back(0x78);
    z.push_back(0x01);
    std::size_t pos = 0;
    while (pos < raw.size()) {
        std::size_t len = std::min<std::size_t>(65535, raw.size() - pos);
        bool final = pos + len == raw.size();
        z.push_back(final ? 0x01 : 0x00);
        z.push_back(static_cast<char>(len & 0xFF));
        z.push_back(static_cast<char>((len >> 8) & 0xFF));
        z.push_back(static_cast<char>(~len & 0xFF));
        z.push_back(static_cast<char>((~len >> 8) & 0xFF));
        z.append(raw, pos, len);
        pos += len;
    }
    put_u32be(z, adler32(reinterpret_cast<const unsigned char*>(raw.data()), raw.size()));

    std::string png("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    put_u32be(ihdr, static_cast<std::uint32_t>(width));
    put_u32be(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(0);   // grayscale
    ihdr.push_back(0);   // compression
    ihdr.push_back(0);   // filter
    ihdr.push_back(0);   // no interlace
    append_chunk(png, "IHDR", ihdr);
    append_chunk(png, "IDAT", z);
    append_chunk(png, "IEND", "");
    write_file(path, png);
}

}  // namespace expbasin
