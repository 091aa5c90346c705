#include "ccnsim/crypto.hpp"

#include <cstdio>

namespace ccnsim {
namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

void append_hex_u64(std::string& out, std::uint64_t v) {
  for (int shift = 60; shift >= 0; shift -= 4) {
    out.push_back(kHexDigits[(v >> shift) & 0xf]);
  }
}

}  // namespace

std::string to_string(VerifyResult r) {
  switch (r) {
    case VerifyResult::valid: return "valid";
    case VerifyResult::invalid: return "invalid";
    case VerifyResult::unverifiable: return "unverifiable";
  }
  return "?";
}

std::string hex(const KeyId& k) {
  std::string out;
  append_hex_u64(out, k.id);
  return out;
}

std::string hex(const Digest& d) {
  std::string out;
  out.reserve(d.size() * 2);
  for (auto b : d) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xf]);
  }
  return out;
}

std::string hex(const Bytes& b) {
  std::string out;
  out.reserve(b.size() * 2);
  for (auto c : b) {
    out.push_back(kHexDigits[c >> 4]);
    out.push_back(kHexDigits[c & 0xf]);
  }
  return out;
}

Bytes from_hex(const std::string& text) {
  if (text.size() % 2 != 0) throw std::invalid_argument("odd hex length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  Bytes out(text.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((nibble(text[2 * i]) << 4) |
                                       nibble(text[2 * i + 1]));
  }
  return out;
}

Digest keyed_digest(std::uint64_t secret, const Name& name, const Bytes& payload) {
  // Four independent splitmix64 lanes absorb every byte of
  // canonical(name) ∥ 0x00 ∥ payload; the separator keeps (name, payload)
  // boundaries unambiguous.
  std::uint64_t lanes[4] = {
      splitmix64(secret ^ 0x243f6a8885a308d3ULL),
      splitmix64(secret ^ 0x13198a2e03707344ULL),
      splitmix64(secret ^ 0xa4093822299f31d0ULL),
      splitmix64(secret ^ 0x082efa98ec4e6c89ULL),
  };
  auto absorb = [&](std::uint8_t byte) {
    for (int i = 0; i < 4; ++i) {
      lanes[i] = splitmix64(lanes[i] ^ (static_cast<std::uint64_t>(byte) + 1) ^
                            (static_cast<std::uint64_t>(i) << 56));
    }
  };
  for (char c : name.render()) absorb(static_cast<std::uint8_t>(c));
  absorb(0x00);
  for (auto b : payload) absorb(b);

  Digest out{};
  for (int i = 0; i < 4; ++i) {
    std::uint64_t v = splitmix64(lanes[i]);
    for (int j = 0; j < 8; ++j) {
      out[static_cast<std::size_t>(i * 8 + j)] =
          static_cast<std::uint8_t>(v >> (8 * j));
    }
  }
  return out;
}

KeyId KeyRegistry::fresh_id() {
  ++counter_;
  // Mix the counter so successive ids don't look sequential in traces.
  return KeyId{splitmix64(counter_ * 0x9e3779b97f4a7c15ULL)};
}

KeyId KeyRegistry::register_key(const std::string& principal) {
  KeyId key = fresh_id();
  secrets_[key] = splitmix64(key.id ^ fnv1a64(principal));
  owners_[key] = principal;
  return key;
}

KeyId KeyRegistry::ephemeral_key(const std::string& principal, Rng& rng) {
  KeyId key = fresh_id();
  secrets_[key] = rng.next_u64();
  owners_[key] = principal;
  return key;
}

const std::string& KeyRegistry::owner(const KeyId& key) const {
  auto it = owners_.find(key);
  if (it == owners_.end()) throw std::out_of_range("unknown key id");
  return it->second;
}

Signature KeyRegistry::sign(const KeyId& key, const Name& name,
                            const Bytes& payload) const {
  auto it = secrets_.find(key);
  if (it == secrets_.end()) throw std::out_of_range("sign: unknown key id");
  return Signature{key, keyed_digest(it->second, name, payload)};
}

VerifyResult KeyRegistry::verify(const Name& name, const Bytes& payload,
                                 const Signature& sig) const {
  auto it = secrets_.find(sig.key_id);
  if (it == secrets_.end()) return VerifyResult::unverifiable;
  return keyed_digest(it->second, name, payload) == sig.digest
             ? VerifyResult::valid
             : VerifyResult::invalid;
}

Signature KeyRegistry::forge_unverifiable(std::uint64_t hint) {
  Signature sig;
  sig.key_id = KeyId{splitmix64(hint ^ 0xdeadbeefcafef00dULL) | 1};
  std::uint64_t v = splitmix64(hint);
  for (std::size_t i = 0; i < sig.digest.size(); ++i) {
    if (i % 8 == 0) v = splitmix64(v);
    sig.digest[i] = static_cast<std::uint8_t>(v >> (8 * (i % 8)));
  }
  return sig;
}

namespace {

Bytes keystream_xor(const Bytes& key, const Bytes& data) {
  if (key.empty()) throw std::invalid_argument("empty symmetric key");
  std::uint64_t state = 0x6a09e667f3bcc908ULL;
  for (auto b : key) state = splitmix64(state ^ b);
  Bytes out(data.size());
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i % 8 == 0) {
      state = splitmix64(state);
      word = state;
    }
    out[i] = static_cast<std::uint8_t>(data[i] ^ (word >> (8 * (i % 8))));
  }
  return out;
}

}  // namespace

Bytes sym_encrypt(const Bytes& key, const Bytes& plaintext) {
  return keystream_xor(key, plaintext);
}

Bytes sym_decrypt(const Bytes& key, const Bytes& ciphertext) {
  return keystream_xor(key, ciphertext);
}

}  // namespace ccnsim
