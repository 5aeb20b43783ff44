#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace pcram {

/// Packed vector of bits. Bit i lives in word i/64 at position i%64.
/// Words are little-endian within the vector: appending a w-bit value
/// stores its least significant bit first.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    void set(size_t i, bool v) {
        uint64_t mask = uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    /// Appends the low `count` bits of `value`, LSB first. count <= 64.
    void append_bits(uint64_t value, unsigned count) {
        if (count == 0) return;
        if (count < 64) value &= (uint64_t{1} << count) - 1;
        size_t word = nbits_ >> 6;
        unsigned off = nbits_ & 63;
        words_.resize((nbits_ + count + 63) / 64, 0);
        words_[word] |= value << off;
        if (off + count > 64) words_[word + 1] |= value >> (64 - off);
        nbits_ += count;
    }

    void append_bit(bool v) { append_bits(v ? 1 : 0, 1); }

    /// Reads `count` bits starting at bit `pos` as an integer, LSB first.
    /// count <= 64.
    uint64_t extract_bits(size_t pos, unsigned count) const {
        if (count == 0) return 0;
        size_t word = pos >> 6;
        unsigned off = pos & 63;
        uint64_t v = words_[word] >> off;
        if (off + count > 64 && word + 1 < words_.size()) v |= words_[word + 1] << (64 - off);
        if (count < 64) v &= (uint64_t{1} << count) - 1;
        return v;
    }

    const std::vector<uint64_t>& words() const { return words_; }

    bool operator==(const BitVec& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }

    /// "0101..." rendering, bit 0 first. Debug aid.
    std::string to_string() const {
        std::string s;
        s.reserve(nbits_);
        for (size_t i = 0; i < nbits_; ++i) s.push_back(get(i) ? '1' : '0');
        return s;
    }

  private:
    size_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

/// Packs the low w bits of each word, in order.
inline BitVec pack_words(const std::vector<uint64_t>& vals, unsigned w) {
    BitVec b;
    for (uint64_t v : vals) b.append_bits(v, w);
    return b;
}

/// Inverse of pack_words.
inline std::vector<uint64_t> unpack_words(const BitVec& b, unsigned w, size_t count) {
    std::vector<uint64_t> out(count);
    for (size_t i = 0; i < count; ++i) out[i] = b.extract_bits(i * w, w);
    return out;
}

} // namespace pcram
