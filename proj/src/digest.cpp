/*
 * Copyright 2026 The distb contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "distb/digest.hpp"

#include <openssl/evp.h>

#include <bit>

#include "distb/error.hpp"

namespace distb::chain {

namespace {

EVP_MD_CTX* as_ctx(void* p) { return static_cast<EVP_MD_CTX*>(p); }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr || EVP_DigestInit_ex(as_ctx(ctx_), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: EVP init failed");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(as_ctx(ctx_)); }

Sha256::Sha256(const Sha256& other) : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr || EVP_MD_CTX_copy_ex(as_ctx(ctx_), as_ctx(other.ctx_)) != 1) {
    throw std::runtime_error("sha256: EVP copy failed");
  }
}

Sha256& Sha256::operator=(const Sha256& other) {
  if (this != &other && EVP_MD_CTX_copy_ex(as_ctx(ctx_), as_ctx(other.ctx_)) != 1) {
    throw std::runtime_error("sha256: EVP copy failed");
  }
  return *this;
}

void Sha256::update(std::span<const std::uint8_t> data) {
  EVP_DigestUpdate(as_ctx(ctx_), data.data(), data.size());
}

Digest Sha256::finish() const {
  EVP_MD_CTX* tmp = EVP_MD_CTX_new();
  EVP_MD_CTX_copy_ex(tmp, as_ctx(ctx_));
  Digest out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(tmp, out.data(), &len);
  EVP_MD_CTX_free(tmp);
  return out;
}

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
  return out;
}

Digest sha256(std::string_view data) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

int leading_zero_bits(const Digest& d) {
  int bits = 0;
  for (std::uint8_t byte : d) {
    if (byte == 0) {
      bits += 8;
      continue;
    }
    return bits + std::countl_zero(byte);
  }
  return bits;
}

std::string to_hex(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) {
    throw Error(ErrorCode::invalid_argument, "hex string has odd length");
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::invalid_argument, "invalid hex digit");
    }
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  const Bytes raw = from_hex(hex);
  if (raw.size() != 32) {
    throw Error(ErrorCode::invalid_argument, "digest must be 32 bytes");
  }
  Digest d{};
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

void ByteWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::bytes(std::span<const std::uint8_t> b) {
  u64(b.size());
  out_.insert(out_.end(), b.begin(), b.end());
}

void ByteWriter::str(std::string_view s) {
  bytes(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

std::uint64_t ByteReader::u64() {
  if (in_.size() - pos_ < 8) {
    throw Error(ErrorCode::integrity, "canonical decode: truncated integer");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | in_[pos_++];
  return v;
}

Bytes ByteReader::bytes() {
  const std::uint64_t n = u64();
  if (n > in_.size() - pos_) {
    throw Error(ErrorCode::integrity, "canonical decode: truncated byte field");
  }
  Bytes out(in_.begin() + static_cast<std::ptrdiff_t>(pos_),
            in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return out;
}

std::string ByteReader::str() {
  const Bytes b = bytes();
  return {b.begin(), b.end()};
}

Digest ByteReader::digest() {
  const Bytes b = bytes();
  if (b.size() != 32) {
    throw Error(ErrorCode::integrity, "canonical decode: digest field is not 32 bytes");
  }
  Digest d{};
  std::copy(b.begin(), b.end(), d.begin());
  return d;
}

}  // namespace distb::chain
