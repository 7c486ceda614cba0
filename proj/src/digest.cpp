#include "masc/digest.hpp"

#include <openssl/sha.h>

#include <array>

namespace masc {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> hash{};
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), hash.data());
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(hash.size() * 2);
  for (auto byte : hash) {
    out += kHex[byte >> 4];
    out += kHex[byte & 0xf];
  }
  return out;
}

} // namespace masc
