#pragma once

#include <cstdint>
#include <vector>

#include "nnintra/common.hpp"

namespace nnintra {

// MSB-first bit packing; the final byte is zero-padded.
class BitWriter {
  public:
    void put_bit(int b) {
        size_t byte = cursor_ >> 3;
        if (byte >= buf_.size()) buf_.push_back(0);
        if (b) buf_[byte] |= static_cast<uint8_t>(0x80u >> (cursor_ & 7));
        ++cursor_;
    }

    // Writes the low `n` bits of `v`, most significant first.
    void put_bits(uint64_t v, int n) {
        for (int i = n - 1; i >= 0; --i) put_bit(static_cast<int>((v >> i) & 1));
    }

    void put_byte(uint8_t b) { put_bits(b, 8); }

    void append(const BitWriter& other) {
        for (size_t i = 0; i < other.cursor_; ++i)
            put_bit((other.buf_[i >> 3] >> (7 - (i & 7))) & 1);
    }

    size_t bit_count() const { return cursor_; }
    const std::vector<uint8_t>& bytes() const { return buf_; }

  private:
    std::vector<uint8_t> buf_;
    size_t cursor_ = 0;
};

class BitReader {
  public:
    explicit BitReader(const std::vector<uint8_t>& bytes) : buf_(bytes.data()), size_(bytes.size()) {}
    BitReader(const uint8_t* data, size_t size) : buf_(data), size_(size) {}

    int get_bit() {
        if (cursor_ >= size_ * 8) throw FormatError("bitstream truncated");
        int b = (buf_[cursor_ >> 3] >> (7 - (cursor_ & 7))) & 1;
        ++cursor_;
        return b;
    }

    uint64_t get_bits(int n) {
        uint64_t v = 0;
        for (int i = 0; i < n; ++i) v = (v << 1) | static_cast<uint64_t>(get_bit());
        return v;
    }

    size_t bit_position() const { return cursor_; }
    size_t bits_available() const { return size_ * 8 - cursor_; }

  private:
    const uint8_t* buf_;
    size_t size_;
    size_t cursor_ = 0;
};

}  // namespace nnintra
