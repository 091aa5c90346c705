#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccnsim/crypto.hpp"
#include "ccnsim/metrics.hpp"
#include "ccnsim/name.hpp"
#include "ccnsim/rng.hpp"

namespace ccnsim {

/// An ephemeral two-relay circuit. It carries exactly one interest:
/// fresh → used → closed, never back.
struct Circuit {
  enum class State { fresh, used, closed };
  std::string entry_ar;
  std::string exit_ar;
  Bytes k1;  // entry key
  Bytes k2;  // exit key
  std::string cid;  // circuit id, hex
  State state = State::fresh;
};

/// Picks two distinct relays from the directory and draws the two symmetric
/// keys. Throws if the directory holds fewer than two relays. Key setup
/// messages are the caller's job (they cost real round trips).
Circuit build_circuit(const std::vector<std::string>& directory, Rng& rng,
                      const std::string& cid);

/// Routable prefix of a relay: /ar/<id>.
Name ar_prefix(const std::string& ar);

/// Key-setup interest name: /ar/<id>/setup/<cid>/<hex key>.
Name setup_name(const std::string& ar, const std::string& cid, const Bytes& key);

struct SetupParts {
  std::string ar;
  std::string cid;
  Bytes key;
};
std::optional<SetupParts> parse_setup(const Name& name);

struct RelayParts {
  std::string ar;
  std::string cid;
  std::string blob;  // hex ciphertext
};
std::optional<RelayParts> parse_relay(const Name& name);

/// Relay-hop interest name: /ar/<id>/relay/<cid>/<hex blob>.
Name relay_name(const std::string& ar, const std::string& cid,
                const std::string& blob);

/// Encrypts the serialized payload into a single opaque hex component.
std::string wrap_blob(const Bytes& key, const std::string& plaintext);
/// Inverse; nullopt when the blob is not valid hex.
std::optional<std::string> unwrap_blob(const Bytes& key,
                                       const std::string& hexblob);

/// Wraps an interest name in both layers (k2 inner, k1 outer) and returns the
/// routable outer name /ar/<entry>/relay/<cid>/<blob>. Consumes the circuit:
/// a used or closed circuit throws.
Name wrap_interest(Circuit& circuit, const Name& inner);

struct OverheadReport {
  double rtt_ratio = 0;       // overlay / direct mean RTT
  double direct_hit_rate = 0;
  double overlay_hit_rate = 0;
};

/// Compares a paired direct and overlay run: RTT ratio at `consumer` and the
/// consumer-side edge router's cache hit rates.
OverheadReport measure_overhead(const MetricsTable& direct,
                                const MetricsTable& overlay,
                                const std::string& consumer,
                                const std::string& edge_router);

}  // namespace ccnsim
