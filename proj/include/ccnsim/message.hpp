#pragma once

#include <cstdint>
#include <optional>

#include "ccnsim/crypto.hpp"
#include "ccnsim/name.hpp"

namespace ccnsim {

/// The request half of the exchange. Deliberately carries no consumer
/// identifier of any kind — delivery relies solely on PIT breadcrumbs.
/// A structural test binds exactly these five fields; adding one that
/// identifies the sender breaks the address-freedom contract.
struct Interest {
  Name name;
  ExcludeFilter exclude;
  std::uint64_t nonce = 0;
  bool non_invasive = false;     // answer from caches only, leave no trace
  bool no_cache_request = false; // skip caches, go to the producer
};

/// Named, signed payload answering an interest.
struct ContentObject {
  Name name;
  Bytes payload;
  std::uint64_t payload_size = 0;  // declared size; payload may be a stand-in
  Signature signature;
  bool no_cache = false;
  std::optional<std::uint32_t> chunk_index;
  std::optional<std::uint32_t> total_chunks;

  std::uint64_t size_bytes() const {
    return payload_size ? payload_size : payload.size();
  }
};

}  // namespace ccnsim
