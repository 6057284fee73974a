#pragma once

// Little-endian encode/decode helpers for the dataset file formats.

#include "motifbench/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace motifbench::binio {

static_assert(std::endian::native == std::endian::little, "file formats assume a little-endian host");

template <typename T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <typename T>
T get(std::string_view in, std::size_t offset) {
    T v;
    std::memcpy(&v, in.data() + offset, sizeof(T));
    return v;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    return os;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
    return is;
}

inline void write_bytes(std::ofstream& os, const void* data, std::size_t len, const std::filesystem::path& path) {
    os.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!os) throw IoError("write failed on '" + path.string() + "'");
}

inline void read_exact(std::ifstream& is, void* data, std::size_t len, const std::filesystem::path& path) {
    is.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
    if (static_cast<std::size_t>(is.gcount()) != len) {
        throw IoError("truncated file '" + path.string() + "'");
    }
}

inline void expect_magic(std::string_view got, std::string_view magic, const std::filesystem::path& path) {
    if (got != magic) {
        throw IoError("'" + path.string() + "' is not a " + std::string(magic) + " file");
    }
}

}  // namespace motifbench::binio
