#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ccnsim/engine.hpp"
#include "ccnsim/overlay.hpp"

namespace ccnsim {

/// Deterministic content object exactly as a producer would mint it:
/// payload bytes derive from the name, so re-fetches agree byte for byte.
ContentObject synth_object(const KeyRegistry& registry, KeyId key,
                           const Name& name, std::uint64_t declared_size,
                           bool no_cache);

struct ProcessSpec {
  enum class Kind { poisson, periodic, schedule };
  Kind kind = Kind::poisson;
  double rate_per_s = 1.0;                 // poisson
  SimTime start = 0;                       // poisson / periodic
  SimTime period = msec(100);              // periodic
  std::uint64_t count = UINT64_MAX;        // periodic: ticks to emit
  std::vector<SimTime> times;              // schedule
};

struct NamePickerSpec {
  enum class Kind { fixed, zipf, sequence, unique, conversation };
  Kind kind = Kind::fixed;
  Name fixed;                   // fixed
  Name prefix;                  // zipf / unique
  std::uint64_t catalog = 0;    // zipf rank count
  double alpha = 1.0;           // zipf exponent
  std::vector<Name> sequence;   // sequence (wraps around)
  std::string conversation_producer;  // conversation: mirrors that producer
  std::uint64_t offset = 0;           // conversation: first message index
};

struct WorkloadSpec {
  ProcessSpec process;
  NamePickerSpec names;
  bool via_overlay = false;
};

struct OverlayConfig {
  std::vector<std::string> ars;  // relay directory (node names)
};

struct ConsumerStats {
  std::uint64_t sent = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t rejected = 0;     // delivered but failed verification
  std::uint64_t unsolicited = 0;
  std::uint64_t verify_valid = 0;
  std::uint64_t verify_invalid = 0;
  std::uint64_t verify_unverifiable = 0;
  double rtt_sum_ms = 0;
  double rtt_min_ms = 0;
  double rtt_max_ms = 0;
};

class ConsumerBehavior : public NodeBehavior {
 public:
  ConsumerBehavior(std::string node_name, std::vector<WorkloadSpec> workloads,
                   SimTime timeout, std::optional<OverlayConfig> overlay);

  void start(Engine&) override;
  void on_data(Engine&, const ContentObject&, SimTime) override;
  void on_timer(Engine&, std::uint64_t tag, SimTime) override;
  void finish(Engine&) override;
  void report(Engine&, MetricsTable&) const override;

  const ConsumerStats& stats() const { return stats_; }
  /// (inner name, rtt) per satisfied request, in completion order.
  const std::vector<std::pair<Name, SimTime>>& satisfied_log() const {
    return satisfied_log_;
  }
  const std::map<Name, Bytes>& received_payloads() const { return payloads_; }
  std::uint64_t pending() const { return pending_.size(); }

 private:
  struct OverlayFlow {
    Circuit circuit;
    Name setup_entry;
    Name setup_exit;
    Name outer;
    int acks = 0;
  };
  struct Pending {
    Name display;  // the logical (inner) name
    SimTime sent = 0;
    std::unique_ptr<OverlayFlow> overlay;
  };

  void fire_workload(Engine&, std::size_t index, SimTime now);
  void schedule_next(Engine&, std::size_t index, SimTime now, bool first);
  Name pick_name(Engine&, std::size_t index);
  void request_direct(Engine&, const Name&, SimTime now);
  void request_overlay(Engine&, const Name&, SimTime now);
  void complete(Engine&, std::uint64_t id, Pending& req,
                const ContentObject& candidate, const Name& logical_name,
                const Bytes& payload, const Signature& sig, SimTime now);
  std::optional<Name> match(const Name& name);
  void handle_match(Engine&, std::uint64_t id, Pending& req,
                    const ContentObject& obj, SimTime now);
  void unregister(const Pending& req, std::uint64_t id);
  Rng& nonce_rng(Engine&);
  Rng& workload_rng(Engine&, std::size_t index);

  std::string node_name_;
  int node_id_ = -1;
  std::vector<WorkloadSpec> workloads_;
  SimTime timeout_;
  std::optional<OverlayConfig> overlay_;

  std::vector<std::uint64_t> tick_counts_;
  std::vector<std::unique_ptr<ZipfSampler>> zipfs_;
  std::uint64_t next_request_ = 1;
  std::uint64_t unique_counter_ = 0;
  std::map<std::uint64_t, Pending> pending_;
  std::map<Name, std::deque<std::uint64_t>> by_name_;
  ConsumerStats stats_;
  std::vector<std::pair<Name, SimTime>> satisfied_log_;
  std::map<Name, Bytes> payloads_;
};

struct ConversationSpec {
  SimTime start = 0;
  SimTime period = msec(200);
  std::uint64_t count = 0;
  bool opaque = false;  // opaque per-message suffixes instead of 1,2,3…
};

struct ProducerSpec {
  Name prefix;
  std::string key_mode = "longlived";  // longlived | ephemeral
  SimTime service_delay = msec(5);
  double slow_factor = 1.0;  // colluding producers answer this much slower
  std::string mode = "open";  // open | catalog | conversation
  std::vector<Name> catalog;
  std::uint32_t chunks = 1;  // catalog items served as this many chunks
  std::uint64_t payload_size = 4096;
  bool mark_no_cache = false;
  std::optional<SimTime> stale_at;  // before this insert time content is stale
  ConversationSpec conversation;
};

class ProducerBehavior : public NodeBehavior {
 public:
  ProducerBehavior(std::string node_name, ProducerSpec spec, KeyId key);

  void start(Engine&) override;
  void on_interest(Engine&, const Interest&, SimTime) override;
  void on_timer(Engine&, std::uint64_t tag, SimTime) override;
  void report(Engine&, MetricsTable&) const override;

  const ProducerSpec& spec() const { return spec_; }
  /// Conversation message name for index i (0-based); count must allow it.
  Name conversation_name(std::uint64_t i) const;
  std::uint64_t served() const { return served_; }

 private:
  std::optional<ContentObject> resolve(Engine&, const Name& name, SimTime now);
  ContentObject make_object(Engine&, const Name& name, std::uint64_t size,
                            std::optional<std::uint32_t> chunk,
                            std::optional<std::uint32_t> total);
  KeyId signing_key(Engine&, const Name& name);

  std::string node_name_;
  int node_id_ = -1;
  ProducerSpec spec_;
  KeyId key_;
  std::map<Name, KeyId> ephemeral_keys_;
  std::vector<std::string> conv_tokens_;
  std::vector<ContentObject> outbox_;
  std::uint64_t served_ = 0;
  std::uint64_t unserved_ = 0;
};

class ArBehavior : public NodeBehavior {
 public:
  ArBehavior(std::string node_name, KeyId key);

  void start(Engine&) override;
  void on_interest(Engine&, const Interest&, SimTime) override;
  void on_data(Engine&, const ContentObject&, SimTime) override;
  void on_timer(Engine&, std::uint64_t tag, SimTime) override;
  void report(Engine&, MetricsTable&) const override;

 private:
  struct PendingRelay {
    Name outer;      // name to answer toward the consumer
    Bytes key;       // layer key for the return wrap
    bool exit_role = false;
  };

  void relay(Engine&, const Interest&, SimTime now);

  std::string node_name_;
  int node_id_ = -1;
  KeyId key_;
  std::map<std::string, Bytes> circuit_keys_;  // cid → key
  std::map<Name, std::deque<PendingRelay>> pending_;
  std::vector<ContentObject> outbox_;
  std::uint64_t setups_ = 0;
  std::uint64_t relays_in_ = 0;
  std::uint64_t relays_out_ = 0;
  std::uint64_t returns_ = 0;
  std::uint64_t drops_ = 0;
};

}  // namespace ccnsim
