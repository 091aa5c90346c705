#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ccnsim/engine.hpp"
#include "json.hpp"

namespace ccnsim {

/// One adversary procedure. `params` is variant-specific and hashes into the
/// results CSV so sweeps can distinguish parameterizations.
struct AttackSpec {
  std::string id;
  std::string variant;  // Enumerate | TimingSequential | TimingParallel |
                        // CloneConversation | IFASameName | IFADistinctNames |
                        // IFANonexistent | IFACollusion | CachePollution |
                        // ContentPoisoning
  std::vector<std::string> nodes;  // attacker endpoints
  std::string router;              // compromised router (ContentPoisoning)
  nlohmann::json params = nlohmann::json::object();
  SimTime start = 0;
  SimTime stop = kNever;

  std::string param_hash() const;
};

/// Hit/miss RTT calibration record.
struct RttCalibration {
  std::vector<double> hit_rtt_ms;
  std::vector<double> miss_rtt_ms;
  double threshold_ms = 0;  // midpoint of the sample means
  double margin_ms = 0;     // min(miss) − max(hit); ≤ 0 means overlap
  bool unreliable = false;
};

struct Detection {
  SimTime lo = 0;  // exclusive
  SimTime hi = 0;  // inclusive: some request for the target lies in (lo, hi]
  double confidence = 0;  // calibration separation margin, ms
};

struct TimingProbeState {
  Name target;
  double t_c_ms = 0;
  double epsilon_ms = 0;
  double rtt_threshold_ms = 0;
  std::uint32_t chunk_cursor = 0;
  std::vector<Detection> detections;
};

/// Shared probe bookkeeping: attacks observe the network only through
/// interests they send and the data (or silence) that comes back.
class AttackBehavior : public NodeBehavior {
 public:
  AttackBehavior(AttackSpec spec, std::string node);

  void start(Engine&) override;
  void on_data(Engine&, const ContentObject&, SimTime) override;
  void on_timer(Engine&, std::uint64_t tag, SimTime) override;
  void finish(Engine&) override;

  const AttackSpec& spec() const { return spec_; }

 protected:
  struct Probe {
    std::uint64_t id = 0;
    Name name;
    SimTime sent = 0;
    bool non_invasive = false;
    std::uint64_t ctx = 0;
  };

  virtual void begin(Engine&, SimTime now) = 0;
  virtual void step(Engine&, std::uint64_t /*code*/, SimTime /*now*/) {}
  virtual void handle_probe(Engine&, const Probe&,
                            const std::optional<ContentObject>&, SimTime) {}
  virtual void conclude(Engine&, SimTime) {}

  std::uint64_t send_probe(Engine&, const Name& name,
                           const ExcludeFilter& exclude, bool non_invasive,
                           SimTime timeout, std::uint64_t ctx);
  void schedule_step(Engine&, SimTime delay, std::uint64_t code);
  void row(Engine&, const std::string& metric, double value) const;
  Rng& rng(Engine&);
  bool within_window(SimTime now) const {
    return now >= spec_.start && now < spec_.stop;
  }

  AttackSpec spec_;
  std::string node_name_;
  int node_id_ = -1;
  std::uint64_t probes_sent_ = 0;

 private:
  std::uint64_t next_probe_ = 1;
  std::map<std::uint64_t, Probe> pending_;
  std::map<Name, std::deque<std::uint64_t>> by_name_;
  bool concluded_ = false;
};

/// Exclude-driven cache walk: non-invasive prefix queries with a growing exclude
/// filter until the terminating miss.
class EnumerateAttack : public AttackBehavior {
 public:
  EnumerateAttack(AttackSpec spec, std::string node);

  const std::vector<Name>& discovered() const { return discovered_; }
  std::uint64_t queries() const { return queries_; }
  bool blocked() const { return blocked_; }

 protected:
  void begin(Engine&, SimTime) override;
  void handle_probe(Engine&, const Probe&,
                    const std::optional<ContentObject>&, SimTime) override;
  void conclude(Engine&, SimTime) override;

 private:
  void next_query(Engine&, SimTime now);

  Name prefix_;
  std::uint64_t limit_ = 0;
  SimTime probe_timeout_ = 0;
  ExcludeFilter exclude_;
  std::vector<Name> discovered_;
  std::uint64_t queries_ = 0;
  bool blocked_ = false;
  bool done_ = false;
  SimTime started_at_ = 0;
};

/// Cache timing side channel: RTT calibration, characteristic-time
/// estimation, then the sequential or parallel probe loop.
class TimingAttack : public AttackBehavior {
 public:
  TimingAttack(AttackSpec spec, std::string node);

  const RttCalibration& calibration() const { return calib_; }
  const TimingProbeState& state() const { return state_; }
  const std::vector<double>& tc_estimates_ms() const { return tc_estimates_; }
  double accuracy() const { return eval_total_ ? static_cast<double>(eval_correct_) / static_cast<double>(eval_total_) : 0; }
  bool chunk_blocked() const { return chunk_blocked_; }
  std::uint64_t probe_hits() const { return probe_hits_; }
  std::uint64_t probe_misses() const { return probe_misses_; }

 protected:
  void begin(Engine&, SimTime) override;
  void step(Engine&, std::uint64_t code, SimTime now) override;
  void handle_probe(Engine&, const Probe&,
                    const std::optional<ContentObject>&, SimTime) override;
  void conclude(Engine&, SimTime) override;

 private:
  enum class Phase { idle, calibrating, evaluating, estimating, probing, done };

  void next_phase(Engine&, SimTime now);
  void calib_step(Engine&, SimTime now);
  void eval_step(Engine&, SimTime now);
  void finish_calibration(Engine&, SimTime now);
  void start_estimate_rep(Engine&, SimTime now);
  void run_experiment(Engine&, SimTime now);
  void experiment_result(Engine&, bool hit, SimTime now);
  void finish_estimation(Engine&, SimTime now);
  void start_probe_loop(Engine&, SimTime now);
  void probe_tick(Engine&, SimTime now);
  void classify_probe(Engine&, const Probe&, bool hit, bool timeout,
                      SimTime now);
  Name chunk_name(std::uint32_t chunk) const;
  void record_detection(SimTime lo, SimTime hi);

  // configuration
  Name target_;
  std::uint32_t total_chunks_ = 1;  // >1 only in the parallel variant
  bool parallel_ = false;
  SimTime probe_timeout_ = 0;
  // calibration
  bool do_calibrate_ = false;
  Name calib_cached_;
  Name calib_miss_prefix_;
  std::uint64_t calib_n_ = 0;
  std::uint64_t eval_n_ = 0;
  SimTime calib_gap_ = 0;
  // estimation
  bool do_estimate_ = false;
  Name est_prefix_;
  std::uint64_t est_reps_ = 1;
  SimTime est_gap0_ = 0;
  SimTime est_max_gap_ = 0;
  SimTime est_tol_ = 0;
  // probe loop
  bool do_probe_ = false;
  SimTime probe_until_ = kNever;

  // state
  Phase phase_ = Phase::idle;
  RttCalibration calib_;
  std::uint64_t calib_count_ = 0;
  bool calib_expect_hit_ = false;
  std::uint64_t eval_count_ = 0;
  std::uint64_t eval_correct_ = 0;
  std::uint64_t eval_total_ = 0;

  std::vector<double> tc_estimates_;
  std::vector<double> tc_brackets_;
  std::uint64_t est_rep_ = 0;
  std::uint64_t est_exp_ = 0;
  bool est_bisecting_ = false;
  SimTime est_lo_ = 0;
  SimTime est_hi_ = 0;
  SimTime est_gap_ = 0;
  Name est_current_name_;
  bool est_failed_ = false;

  TimingProbeState state_;
  SimTime period_ = 0;
  std::uint64_t slot_ = 0;
  std::vector<SimTime> last_probe_at_;  // per chunk: latest probe send
  std::vector<SimTime> prev_probe_at_;  // per chunk: the send before that
  bool chunk_blocked_ = false;
  std::uint64_t probe_hits_ = 0;
  std::uint64_t probe_misses_ = 0;
  std::uint64_t probe_timeouts_ = 0;
};

/// Conversation cloning: snapshot the cache to learn the sequence, then
/// chase successive message names in real time.
class CloneAttack : public AttackBehavior {
 public:
  CloneAttack(AttackSpec spec, std::string node);

  struct Fetched {
    Name name;
    SimTime at = 0;
    std::uint64_t payload_size = 0;
  };
  const std::vector<Fetched>& fetched() const { return fetched_; }
  const std::vector<Name>& snapshot() const { return snapshot_; }
  bool blocked() const { return blocked_; }

 protected:
  void begin(Engine&, SimTime) override;
  void step(Engine&, std::uint64_t code, SimTime now) override;
  void handle_probe(Engine&, const Probe&,
                    const std::optional<ContentObject>&, SimTime) override;
  void conclude(Engine&, SimTime) override;

 private:
  void poll(Engine&, SimTime now);

  Name prefix_;
  SimTime poll_gap_ = 0;
  SimTime probe_timeout_ = 0;
  std::uint64_t max_fetch_ = 0;

  ExcludeFilter exclude_;
  std::vector<Name> snapshot_;
  bool snapshotting_ = true;
  bool blocked_ = false;
  std::uint64_t next_seq_ = 1;
  std::vector<Fetched> fetched_;
  std::uint64_t queries_ = 0;
};

/// Interest generators: the four IFA modes and cache pollution share one
/// per-bot engine; only the name construction differs.
class FloodAttack : public AttackBehavior {
 public:
  FloodAttack(AttackSpec spec, std::string node);

  std::uint64_t sent() const { return sent_; }

 protected:
  void begin(Engine&, SimTime) override;
  void step(Engine&, std::uint64_t code, SimTime now) override;
  void handle_probe(Engine&, const Probe&,
                    const std::optional<ContentObject>&, SimTime) override {}
  void conclude(Engine&, SimTime) override;
  void on_data(Engine&, const ContentObject&, SimTime) override;

 private:
  void tick(Engine&, SimTime now);
  Name next_name(Engine&);

  Name prefix_;
  Name fixed_name_;
  double rate_per_s_ = 0;
  bool periodic_ = false;
  std::uint64_t catalog_size_ = 0;  // pollution: 0 means unique per request
  std::uint64_t counter_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t received_ = 0;
};

/// Builds the behavior for one attacker node of the spec. ContentPoisoning
/// has no node behavior; it reconfigures the compromised router instead.
std::unique_ptr<AttackBehavior> make_attack_behavior(const AttackSpec& spec,
                                                     const std::string& node);

/// Applies a ContentPoisoning spec to a router config before construction.
void configure_poisoning(RouterConfig& cfg, const AttackSpec& spec,
                         KeyRegistry& registry);

/// Post-run result rows for ContentPoisoning, read from router counters.
void append_poisoning_rows(Engine& engine, const AttackSpec& spec);

}  // namespace ccnsim
