#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccnsim/name.hpp"
#include "ccnsim/rng.hpp"

namespace ccnsim {

// Signing and encryption are simulated: keyed digests and a reversible
// keystream transform stand in for real asymmetric/symmetric primitives.
// Only verifiability semantics matter to the model.

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

/// Opaque 8-byte key identifier.
struct KeyId {
  std::uint64_t id = 0;
  auto operator<=>(const KeyId&) const = default;
};

struct Signature {
  KeyId key_id;
  Digest digest{};
  bool operator==(const Signature&) const = default;
};

enum class VerifyResult { valid, invalid, unverifiable };

std::string to_string(VerifyResult r);
std::string hex(const KeyId& k);
std::string hex(const Digest& d);
std::string hex(const Bytes& b);
Bytes from_hex(const std::string& text);

/// Keyed 32-byte digest over canonical(name) ∥ payload.
Digest keyed_digest(std::uint64_t secret, const Name& name, const Bytes& payload);

/// Global registry of signing keys. Immutable after setup except for
/// ephemeral_key, which runs inside the single-threaded simulation loop.
class KeyRegistry {
 public:
  /// Registers a long-lived key for a principal; returns its KeyId.
  KeyId register_key(const std::string& principal);

  /// Registers a fresh key owned by principal; successive calls are distinct.
  KeyId ephemeral_key(const std::string& principal, Rng& rng);

  bool known(const KeyId& key) const { return secrets_.count(key) > 0; }
  const std::string& owner(const KeyId& key) const;

  Signature sign(const KeyId& key, const Name& name, const Bytes& payload) const;
  VerifyResult verify(const Name& name, const Bytes& payload,
                      const Signature& sig) const;

  /// A signature that fails verification under any registered key: the
  /// KeyId is never registered, so verify() reports unverifiable.
  static Signature forge_unverifiable(std::uint64_t hint);

 private:
  KeyId fresh_id();

  std::map<KeyId, std::uint64_t> secrets_;
  std::map<KeyId, std::string> owners_;
  std::uint64_t counter_ = 0;
};

/// XOR keystream transform; encrypt and decrypt are the same involution,
/// so layered wrapping unwraps under LIFO key order.
Bytes sym_encrypt(const Bytes& key, const Bytes& plaintext);
Bytes sym_decrypt(const Bytes& key, const Bytes& ciphertext);

}  // namespace ccnsim
