// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Little-endian encoding helpers shared by the embedding and checkpoint
// formats.

#ifndef ACROTAG_BINARY_IO_H_
#define ACROTAG_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace acrotag {
namespace binary {

template <typename U>
void WriteUint(std::ostream& out, U value) {
  char bytes[sizeof(U)];
  for (size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes, sizeof(U));
}

template <typename U>
bool ReadUint(std::istream& in, U& value) {
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U))) return false;
  value = 0;
  for (size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(bytes[i]) << (8 * i);
  }
  return true;
}

inline void WriteFloat32(std::ostream& out, float v) {
  WriteUint(out, std::bit_cast<uint32_t>(v));
}
inline void WriteFloat64(std::ostream& out, double v) {
  WriteUint(out, std::bit_cast<uint64_t>(v));
}

inline bool ReadFloat64(std::istream& in, double& v) {
  uint64_t bits;
  if (!ReadUint(in, bits)) return false;
  v = std::bit_cast<double>(bits);
  return true;
}

inline float DecodeFloat32(const unsigned char* p) {
  const uint32_t bits = static_cast<uint32_t>(p[0]) |
                        static_cast<uint32_t>(p[1]) << 8 |
                        static_cast<uint32_t>(p[2]) << 16 |
                        static_cast<uint32_t>(p[3]) << 24;
  return std::bit_cast<float>(bits);
}

// u32 length followed by the bytes.
inline void WriteString(std::ostream& out, std::string_view s) {
  WriteUint(out, static_cast<uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline bool ReadString(std::istream& in, std::string& s, uint32_t max_len) {
  uint32_t len;
  if (!ReadUint(in, len) || len > max_len) return false;
  s.resize(len);
  return static_cast<bool>(in.read(s.data(), len));
}

}  // namespace binary
}  // namespace acrotag

#endif  // ACROTAG_BINARY_IO_H_
