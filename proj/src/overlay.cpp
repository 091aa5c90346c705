#include "ccnsim/overlay.hpp"

#include "json.hpp"

namespace ccnsim {

Circuit build_circuit(const std::vector<std::string>& directory, Rng& rng,
                      const std::string& cid) {
  if (directory.size() < 2) {
    throw std::invalid_argument("circuit needs at least two relays");
  }
  Circuit c;
  std::size_t e = rng.uniform_index(directory.size());
  std::size_t x = rng.uniform_index(directory.size() - 1);
  if (x >= e) ++x;  // distinct exit
  c.entry_ar = directory[e];
  c.exit_ar = directory[x];
  c.k1.resize(16);
  c.k2.resize(16);
  rng.fill_bytes(c.k1.data(), c.k1.size());
  rng.fill_bytes(c.k2.data(), c.k2.size());
  c.cid = cid;
  return c;
}

Name ar_prefix(const std::string& ar) {
  return Name(std::vector<std::string>{"ar", ar});
}

Name setup_name(const std::string& ar, const std::string& cid,
                const Bytes& key) {
  return Name(std::vector<std::string>{"ar", ar, "setup", cid, hex(key)});
}

std::optional<SetupParts> parse_setup(const Name& name) {
  if (name.size() != 5 || name.at(0) != "ar" || name.at(2) != "setup") {
    return std::nullopt;
  }
  SetupParts parts;
  parts.ar = name.at(1);
  parts.cid = name.at(3);
  try {
    parts.key = from_hex(name.at(4));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  return parts;
}

std::optional<RelayParts> parse_relay(const Name& name) {
  if (name.size() != 5 || name.at(0) != "ar" || name.at(2) != "relay") {
    return std::nullopt;
  }
  return RelayParts{name.at(1), name.at(3), name.at(4)};
}

std::string wrap_blob(const Bytes& key, const std::string& plaintext) {
  Bytes plain(plaintext.begin(), plaintext.end());
  return hex(sym_encrypt(key, plain));
}

std::optional<std::string> unwrap_blob(const Bytes& key,
                                       const std::string& hexblob) {
  Bytes cipher;
  try {
    cipher = from_hex(hexblob);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  Bytes plain = sym_decrypt(key, cipher);
  return std::string(plain.begin(), plain.end());
}

Name relay_name(const std::string& ar, const std::string& cid,
                const std::string& blob) {
  return Name(std::vector<std::string>{"ar", ar, "relay", cid, blob});
}

Name wrap_interest(Circuit& circuit, const Name& inner) {
  if (circuit.state != Circuit::State::fresh) {
    throw std::logic_error("circuit carries exactly one interest");
  }
  // Inner layer: the plain name under the exit key; outer layer: routing
  // instruction plus inner blob under the entry key. JSON keeps the framing
  // self-describing without a bespoke codec.
  nlohmann::json inner_json{{"name", inner.render()}};
  std::string inner_blob = wrap_blob(circuit.k2, inner_json.dump());
  nlohmann::json outer_json{{"next", circuit.exit_ar}, {"blob", inner_blob}};
  std::string outer_blob = wrap_blob(circuit.k1, outer_json.dump());
  circuit.state = Circuit::State::used;
  return relay_name(circuit.entry_ar, circuit.cid, outer_blob);
}

OverheadReport measure_overhead(const MetricsTable& direct,
                                const MetricsTable& overlay,
                                const std::string& consumer,
                                const std::string& edge_router) {
  OverheadReport report;
  double direct_rtt = direct.at(consumer, "rtt_mean_ms");
  double overlay_rtt = overlay.at(consumer, "rtt_mean_ms");
  report.rtt_ratio = direct_rtt > 0 ? overlay_rtt / direct_rtt : 0;
  report.direct_hit_rate = direct.get(edge_router, "hit_rate").value_or(0);
  report.overlay_hit_rate = overlay.get(edge_router, "hit_rate").value_or(0);
  return report;
}

}  // namespace ccnsim
