#pragma once

#include "sensekit/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace sensekit::binary {

template <class T>
void write_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> buf;
    std::memcpy(buf.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
    out.write(buf.data(), buf.size());
}

template <class T>
T decode_le(const char* bytes) {
    std::array<char, sizeof(T)> buf;
    std::memcpy(buf.data(), bytes, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
    T value;
    std::memcpy(&value, buf.data(), sizeof(T));
    return value;
}

// Stream reader that tracks the byte offset for error messages.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::size_t offset() const noexcept { return offset_; }

    void read_bytes(char* dst, std::size_t n, const char* what) {
        in_.read(dst, static_cast<std::streamsize>(n));
        const auto got = static_cast<std::size_t>(in_.gcount());
        if (got != n) throw FormatError(offset_ + got, std::string("truncated while reading ") + what);
        offset_ += n;
    }

    template <class T>
    T read_le(const char* what) {
        char buf[sizeof(T)];
        read_bytes(buf, sizeof(T), what);
        return decode_le<T>(buf);
    }

    // Next byte without consuming it, or -1 at end of stream.
    int peek() { return in_.peek(); }

    int get() {
        const int c = in_.get();
        if (c != std::char_traits<char>::eof()) ++offset_;
        return c;
    }

private:
    std::istream& in_;
    std::size_t offset_ = 0;
};

}  // namespace sensekit::binary
