#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "ccnsim/crypto.hpp"
#include "ccnsim/message.hpp"
#include "ccnsim/metrics.hpp"
#include "ccnsim/rng.hpp"
#include "ccnsim/router.hpp"
#include "ccnsim/time.hpp"

namespace ccnsim {

class Engine;

/// Endpoint logic (consumers, producers, attackers, anonymizing routers) is
/// expressed as a behavior driven by arrivals and timers inside the single
/// simulation loop.
class NodeBehavior {
 public:
  virtual ~NodeBehavior() = default;
  virtual void start(Engine&) {}
  virtual void on_interest(Engine&, const Interest&, SimTime) {}
  virtual void on_data(Engine&, const ContentObject&, SimTime) {}
  virtual void on_timer(Engine&, std::uint64_t, SimTime) {}
  /// Called once at end of run; emit metrics / attack result rows here.
  virtual void finish(Engine&) {}
  virtual void report(Engine&, MetricsTable&) const {}
};

enum class NodeKind { router, consumer, producer, attacker, ar };

std::string to_string(NodeKind k);

struct FaceRef {
  int link = -1;
  int peer = -1;
  int peer_face = -1;
};

struct Node {
  int id = 0;
  std::string name;
  NodeKind kind = NodeKind::consumer;
  std::vector<FaceRef> faces;
  std::unique_ptr<Router> router;      // kind == router
  std::unique_ptr<NodeBehavior> behavior;  // endpoints
};

struct Link {
  int a = -1;
  int b = -1;
  int face_a = -1;
  int face_b = -1;
  SimTime delay = 0;
  double loss = 0;
};

enum class TimerKind : std::uint8_t {
  pit_expire,
  detector,
  revalidate,
  state_dump,
  blacklist,
  behavior,
  warmup,
};

struct RequestRecord {
  SimTime time = 0;
  int node = -1;
  Name name;
};

/// A legitimate request the engine knows about: the ground truth that attack
/// soundness checks compare against.
class Engine {
 public:
  Engine(std::uint64_t seed, std::string scenario_id);
  ~Engine();

  // --- construction ---
  int add_router(const std::string& name, const RouterConfig& cfg);
  int add_endpoint(const std::string& name, NodeKind kind,
                   std::unique_ptr<NodeBehavior> behavior);
  int connect(const std::string& a, const std::string& b, SimTime delay,
              double loss = 0);
  void add_fib(const std::string& router, const Name& prefix,
               const std::string& next_hop);
  void schedule_state_dump(SimTime at, const std::string& node);
  void schedule_blacklist(SimTime at, std::vector<Name> names,
                          const std::string& origin);
  void set_stats_warmup(SimTime t) { stats_warmup_ = t; }
  void set_trace(std::ostream* os) { trace_ = os; }
  void set_audit(bool on) { audit_ = on; }
  void set_staleness_oracle(
      std::function<bool(const Name&, SimTime insert_time, SimTime now)> fn) {
    staleness_ = std::move(fn);
  }

  // --- runtime API used by behaviors ---
  SimTime now() const { return now_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& scenario_id() const { return scenario_id_; }
  KeyRegistry& registry() { return registry_; }
  const KeyRegistry& registry() const { return registry_; }
  Rng& rng(const std::string& stream);

  void send_interest(int node, const Interest& interest);
  void send_data(int node, const ContentObject& object);
  void schedule_behavior_timer(int node, SimTime delay, std::uint64_t tag);
  void log_request(int node, const Name& name);
  void report_attack(const std::string& attack_id, const std::string& variant,
                     const std::string& param_hash, const std::string& metric,
                     double value);
  void trace_record(const std::string& node, const std::string& kind,
                    const std::string& name, const std::string& face,
                    const std::string& outcome);

  int node_id(const std::string& name) const;
  Node& node(int id) { return *nodes_.at(static_cast<std::size_t>(id)); }
  const Node& node(int id) const { return *nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t node_count() const { return nodes_.size(); }
  Router& router(const std::string& name);
  const std::vector<RequestRecord>& request_log() const { return request_log_; }
  NodeBehavior* behavior(const std::string& node_name);

  // --- execution ---
  void run_until(SimTime t_end);
  SimTime end_time() const { return end_time_; }

  MetricsTable collect_metrics();
  const std::vector<AttackRow>& attack_rows() const { return attack_rows_; }

 private:
  struct EvInterest {
    int node;
    int face;
    Interest interest;
  };
  struct EvData {
    int node;
    int face;
    ContentObject object;
  };
  struct EvTimer {
    int node;
    TimerKind kind;
    std::uint64_t tag;
  };
  using EventPayload = std::variant<EvInterest, EvData, EvTimer>;
  struct Event {
    SimTime time;
    std::uint64_t seq;
    EventPayload payload;
  };
  struct EventOrder {
    bool operator()(const Event& x, const Event& y) const {
      if (x.time != y.time) return x.time > y.time;
      return x.seq > y.seq;
    }
  };

  struct Broadcast {
    std::vector<Name> names;
    std::string origin;
  };

  void schedule(SimTime at, EventPayload payload);
  void transmit(int node, int face, EventPayload&& payload_template,
                SimTime extra_delay, bool is_interest, const Interest* interest,
                const ContentObject* object);
  void send_via_face(int node, int face, const Interest& interest,
                     SimTime extra_delay);
  void send_data_via_face(int node, int face, const ContentObject& object,
                          SimTime extra_delay);
  void dispatch(const Event& ev);
  void handle_interest(const EvInterest& ev);
  void handle_data(const EvData& ev);
  void handle_timer(const EvTimer& ev);
  void apply_actions(int node, const std::vector<Action>& actions);
  void run_warmup_reset();
  void audit_invariants();
  void deep_audit();
  void emit_flags(int node, const std::vector<Flag>& flags);
  std::map<int, SimTime> control_distances(int origin) const;

  std::uint64_t seed_;
  std::string scenario_id_;
  SimTime now_ = 0;
  SimTime end_time_ = 0;
  bool started_ = false;
  std::uint64_t next_seq_ = 0;
  std::uint64_t events_processed_ = 0;
  SimTime stats_warmup_ = 0;

  std::vector<std::unique_ptr<Node>> nodes_;
  std::map<std::string, int> node_index_;
  std::vector<Link> links_;
  std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
  KeyRegistry registry_;
  std::map<std::string, Rng> rngs_;
  std::vector<RequestRecord> request_log_;
  std::vector<AttackRow> attack_rows_;
  std::vector<Broadcast> broadcasts_;
  std::uint64_t blacklist_messages_ = 0;
  std::uint64_t blacklist_removed_ = 0;
  std::ostream* trace_ = nullptr;
  bool audit_ = true;
  std::function<bool(const Name&, SimTime, SimTime)> staleness_;
};

}  // namespace ccnsim
