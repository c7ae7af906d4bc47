#include "ultralevy/random.hpp"

#include <bit>

namespace ultralevy {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

// Counter layout: [block, event low 32 bits, event high 24 bits | field << 24, path low 32 bits],
// with the high half of the path index folded into the key.
RandomStream::RandomStream(std::uint64_t seed, std::uint64_t path, std::uint64_t event, StreamField field)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32) ^
                                                 static_cast<std::uint32_t>(path >> 32) * 0x9E3779B1u},
      path_(path),
      event_lo_(static_cast<std::uint32_t>(event)),
      event_hi_field_(static_cast<std::uint32_t>((event >> 32) & 0xFFFFFF) |
                      (static_cast<std::uint32_t>(field) << 24)) {}

void RandomStream::refill() {
  buffer_ = philox4x32({block_++, event_lo_, event_hi_field_, static_cast<std::uint32_t>(path_)}, key_);
  used_ = 0;
}

std::uint64_t RandomStream::next_u64() {
  if (used_ + 2 > 4) refill();
  const std::uint64_t out = (static_cast<std::uint64_t>(buffer_[used_]) << 32) | buffer_[used_ + 1];
  used_ += 2;
  return out;
}

double RandomStream::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::next_open_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below needs a positive bound");
  if (bound == 1) return 0;
  const std::uint64_t top = bound - 1;
  const std::uint64_t mask = top == 0 ? 0 : (~std::uint64_t{0} >> std::countl_zero(top));
  for (;;) {
    const std::uint64_t candidate = next_u64() & mask;
    if (candidate < bound) return candidate;
  }
}

Natural RandomStream::uniform_below(const Natural& bound) {
  if (bound <= 0) throw std::invalid_argument("uniform_below needs a positive bound");
  if (bound <= Natural(UINT64_MAX)) return Natural(uniform_below(bound.convert_to<std::uint64_t>()));
  const Natural top = bound - 1;
  const std::size_t bits = msb(top) + 1;
  const std::size_t words = (bits + 63) / 64;
  const unsigned spare = static_cast<unsigned>(words * 64 - bits);
  for (;;) {
    Natural candidate = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t word = next_u64();
      if (w == 0 && spare > 0) word >>= spare;
      candidate <<= 64;
      candidate |= Natural(word);
    }
    if (candidate < bound) return candidate;
  }
}

}  // namespace ultralevy
