#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccnsim/attacks.hpp"
#include "ccnsim/behaviors.hpp"
#include "ccnsim/engine.hpp"
#include "ccnsim/router.hpp"

using namespace ccnsim;

namespace {

RouterConfig cache_cfg(std::size_t cap, CachePolicy pol = CachePolicy::LRU) {
  RouterConfig c;
  c.cs.capacity = cap;
  c.cs.policy = pol;
  return c;
}

ProducerSpec open_producer(const std::string& prefix, SimTime service = msec(1)) {
  ProducerSpec s;
  s.prefix = Name::parse(prefix);
  s.service_delay = service;
  return s;
}

void add_producer(Engine& e, const std::string& node, ProducerSpec spec) {
  KeyId k = e.registry().register_key(node);
  e.add_endpoint(node, NodeKind::producer,
                 std::make_unique<ProducerBehavior>(node, std::move(spec), k));
}

void add_consumer(Engine& e, const std::string& node,
                  std::vector<WorkloadSpec> w, SimTime timeout = sec(1)) {
  e.add_endpoint(node, NodeKind::consumer,
                 std::make_unique<ConsumerBehavior>(node, std::move(w), timeout,
                                                    std::nullopt));
}

WorkloadSpec at_times(const std::string& name, std::vector<SimTime> times) {
  WorkloadSpec w;
  w.process.kind = ProcessSpec::Kind::schedule;
  w.process.times = std::move(times);
  w.names.kind = NamePickerSpec::Kind::fixed;
  w.names.fixed = Name::parse(name);
  return w;
}

WorkloadSpec zipf_poisson(const std::string& prefix, std::uint64_t catalog,
                          double alpha, double rate) {
  WorkloadSpec w;
  w.process.kind = ProcessSpec::Kind::poisson;
  w.process.rate_per_s = rate;
  w.names.kind = NamePickerSpec::Kind::zipf;
  w.names.prefix = Name::parse(prefix);
  w.names.catalog = catalog;
  w.names.alpha = alpha;
  return w;
}

void add_attackers(Engine& e, const AttackSpec& spec) {
  for (const std::string& n : spec.nodes) {
    e.add_endpoint(n, NodeKind::attacker, make_attack_behavior(spec, n));
  }
}

double arow(const Engine& e, const std::string& id, const std::string& metric) {
  for (const AttackRow& r : e.attack_rows()) {
    if (r.attack_id == id && r.metric == metric) return r.value;
  }
  throw std::runtime_error("missing attack row: " + id + "/" + metric);
}

ContentObject signed_object(Engine& e, KeyId key, const std::string& name) {
  ContentObject o;
  o.name = Name::parse(name);
  o.payload = {42};
  o.payload_size = 64;
  o.signature = e.registry().sign(key, o.name, o.payload);
  return o;
}

}  // namespace

TEST_CASE("param_hash is a stable 16-digit hex keyed by the parameters") {
  AttackSpec a;
  a.params = nlohmann::json{{"rate_per_s", 100}, {"prefix", "/junk"}};
  AttackSpec b = a;
  AttackSpec c = a;
  c.params["rate_per_s"] = 101;
  std::string ha = a.param_hash();
  CHECK(ha.size() == 16);
  CHECK(ha.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(ha == b.param_hash());
  CHECK(ha != c.param_hash());
}

TEST_CASE("enumeration recovers exactly the cached set under the prefix") {
  Engine e(3, "t");
  e.add_router("edge", cache_cfg(32));
  AttackSpec spec;
  spec.id = "enum";
  spec.variant = "Enumerate";
  spec.nodes = {"atk"};
  spec.params = nlohmann::json{{"prefix", "/m"}, {"probe_timeout_ms", 100.0}};
  add_attackers(e, spec);
  e.connect("atk", "edge", msec(1));

  // Preload: ten names under the walked prefix, three bystanders.
  KeyId k = e.registry().register_key("seed");
  Rng preload_rng(1);
  Router& edge = e.router("edge");
  for (char c = 'a'; c <= 'j'; ++c) {
    edge.cs().insert(signed_object(e, k, std::string("/m/") + c), 0,
                     preload_rng);
  }
  for (const char* n : {"/x/1", "/x/2", "/x/3"}) {
    edge.cs().insert(signed_object(e, k, n), 0, preload_rng);
  }
  std::vector<Name> oracle;
  for (const auto& [name, entry] : edge.cs().entries()) {
    if (Name::parse("/m").is_prefix_of(name)) oracle.push_back(name);
  }
  REQUIRE(oracle.size() == 10);

  e.run_until(sec(2));

  auto* atk = dynamic_cast<EnumerateAttack*>(e.behavior("atk"));
  REQUIRE(atk != nullptr);
  CHECK(atk->discovered() == oracle);  // walk returns them smallest-first
  CHECK(atk->queries() == 11);         // K hits + one terminating miss
  CHECK_FALSE(atk->blocked());
  CHECK(arow(e, "enum", "discovered") == 10);
  CHECK(arow(e, "enum", "queries") == 11);
  CHECK(arow(e, "enum", "blocked") == 0);
  CHECK(e.attack_rows().front().param_hash == spec.param_hash());

  // The walk was non-invasive: no entry saw its recency or hit count move.
  for (const auto& [name, entry] : edge.cs().entries()) {
    CHECK(entry.hit_count == 0);
    CHECK(entry.last_use == 0);
  }
}

TEST_CASE("enumeration reports blocked when the router ignores excludes") {
  Engine e(3, "t");
  RouterConfig cfg = cache_cfg(8);
  cfg.allow_exclude = false;
  e.add_router("edge", cfg);
  AttackSpec spec;
  spec.id = "enum";
  spec.variant = "Enumerate";
  spec.nodes = {"atk"};
  spec.params = nlohmann::json{{"prefix", "/m"}, {"probe_timeout_ms", 100.0}};
  add_attackers(e, spec);
  e.connect("atk", "edge", msec(1));

  KeyId k = e.registry().register_key("seed");
  Rng preload_rng(1);
  for (const char* n : {"/m/a", "/m/b", "/m/c"}) {
    e.router("edge").cs().insert(signed_object(e, k, n), 0, preload_rng);
  }
  e.run_until(sec(1));

  auto* atk = dynamic_cast<EnumerateAttack*>(e.behavior("atk"));
  REQUIRE(atk != nullptr);
  CHECK(atk->blocked());
  CHECK(atk->discovered().size() == 1);  // the repeat gave the game away
  CHECK(atk->queries() == 2);
  CHECK(e.router("edge").counters().exclude_ignored == 1);
  CHECK(arow(e, "enum", "blocked") == 1);
}

TEST_CASE("rtt calibration separates hit and miss populations exactly") {
  Engine e(5, "t");
  e.add_router("edge", cache_cfg(16));
  add_producer(e, "origin", open_producer("/cal"));
  AttackSpec spec;
  spec.id = "cal";
  spec.variant = "TimingSequential";
  spec.nodes = {"atk"};
  spec.params = nlohmann::json::parse(R"({
    "target": "/t/x",
    "probe_timeout_ms": 100,
    "calibrate": {"cached": "/cal/keep", "miss_prefix": "/cal/miss",
                  "n": 8, "gap_ms": 10}
  })");
  add_attackers(e, spec);
  e.connect("atk", "edge", msec(1));
  e.connect("edge", "origin", msec(10));
  e.add_fib("edge", Name::parse("/cal"), "origin");

  e.run_until(sec(2));

  auto* atk = dynamic_cast<TimingAttack*>(e.behavior("atk"));
  REQUIRE(atk != nullptr);
  const RttCalibration& cal = atk->calibration();
  REQUIRE(cal.hit_rtt_ms.size() == 8);
  REQUIRE(cal.miss_rtt_ms.size() == 8);
  // Hit: 2×1 ms link. Miss: 2×1 + 2×10 links + 1 ms service.
  for (double h : cal.hit_rtt_ms) CHECK(h == doctest::Approx(2.0));
  for (double m : cal.miss_rtt_ms) CHECK(m == doctest::Approx(23.0));
  CHECK(cal.threshold_ms == doctest::Approx(12.5));
  CHECK(cal.margin_ms == doctest::Approx(21.0));
  CHECK_FALSE(cal.unreliable);
  CHECK(arow(e, "cal", "threshold_ms") == doctest::Approx(12.5));
  CHECK(arow(e, "cal", "calib_unreliable") == 0);
}

TEST_CASE("characteristic-time estimate brackets the true content lifetime") {
  Engine e(7, "t");
  RouterConfig cfg = cache_cfg(64, CachePolicy::FIFO);
  cfg.cs.lifetime.kind = LifetimeDist::Kind::fixed;
  cfg.cs.lifetime.fixed = msec(300);
  e.add_router("edge", cfg);
  add_producer(e, "origin", open_producer("/est"));
  AttackSpec spec;
  spec.id = "ct";
  spec.variant = "TimingSequential";
  spec.nodes = {"atk"};
  spec.params = nlohmann::json::parse(R"({
    "target": "/t/x",
    "probe_timeout_ms": 100,
    "estimate": {"prefix": "/est", "reps": 4, "gap0_ms": 50,
                 "max_gap_ms": 2000, "tol_ms": 10}
  })");
  add_attackers(e, spec);
  e.connect("atk", "edge", msec(1));
  e.connect("edge", "origin", msec(10));
  e.add_fib("edge", Name::parse("/est"), "origin");

  e.run_until(sec(20));

  auto* atk = dynamic_cast<TimingAttack*>(e.behavior("atk"));
  REQUIRE(atk != nullptr);
  REQUIRE(atk->tc_estimates_ms().size() == 4);
  for (double est : atk->tc_estimates_ms()) {
    CHECK(est > 285.0);  // truth 300 ms, tol 10 ms, ~2 ms probe transit
    CHECK(est < 312.0);
  }
  CHECK(arow(e, "ct", "t_c_reps") == 4);
  CHECK(arow(e, "ct", "t_c_failed") == 0);
  CHECK(arow(e, "ct", "t_c_bracket_ms") <= 10.01);

  // Ground truth from the store's own eviction log: every expiry-driven
  // departure sat in the cache for exactly the configured lifetime.
  Router& edge = e.router("edge");
  edge.cs().purge_expired(e.end_time());
  std::size_t expired = 0;
  for (const CsEviction& ev : edge.cs().evictions()) {
    if (!ev.expired) continue;
    expired++;
    CHECK(ev.residency == msec(300));
  }
  CHECK(expired >= 8);
}

TEST_CASE("probe-loop detections are sound against the legit request log") {
  auto build = [](bool with_victim) {
    auto e = std::make_unique<Engine>(11, "t");
    RouterConfig cfg = cache_cfg(32);
    cfg.cs.lifetime.kind = LifetimeDist::Kind::fixed;
    cfg.cs.lifetime.fixed = msec(400);
    e->add_router("edge", cfg);
    add_producer(*e, "origin", open_producer("/t"));
    AttackSpec spec;
    spec.id = "probe";
    spec.variant = "TimingSequential";
    spec.nodes = {"atk"};
    spec.params = nlohmann::json::parse(R"({
      "target": "/t/x",
      "probe_timeout_ms": 100,
      "threshold_ms": 12.5,
      "t_c_ms": 400,
      "probe": {"epsilon_ms": 100, "until_ms": 12000}
    })");
    add_attackers(*e, spec);
    if (with_victim) {
      add_consumer(*e, "c", {at_times("/t/x", {msec(3210), msec(9470)})});
      e->connect("c", "edge", msec(1));
    }
    e->connect("atk", "edge", msec(1));
    e->connect("edge", "origin", msec(10));
    e->add_fib("edge", Name::parse("/t"), "origin");
    e->run_until(msec(13000));
    return e;
  };

  auto quiet = build(false);
  auto* quiet_atk = dynamic_cast<TimingAttack*>(quiet->behavior("atk"));
  REQUIRE(quiet_atk != nullptr);
  CHECK(quiet_atk->state().detections.empty());
  CHECK(quiet_atk->probe_hits() == 0);  // own refetches expire before reprobe

  auto live = build(true);
  auto* atk = dynamic_cast<TimingAttack*>(live->behavior("atk"));
  REQUIRE(atk != nullptr);
  const auto& detections = atk->state().detections;
  REQUIRE(detections.size() == 2);

  std::vector<SimTime> victims;
  for (const RequestRecord& r : live->request_log()) {
    if (r.name == Name::parse("/t/x")) victims.push_back(r.time);
  }
  REQUIRE(victims.size() == 2);
  for (const Detection& d : detections) {
    bool contains_victim = false;
    for (SimTime v : victims) {
      // Allow the fetch latency between the request and the cache insert.
      if (v > d.lo - msec(30) && v <= d.hi) contains_victim = true;
    }
    CHECK(contains_victim);
  }
  for (SimTime v : victims) {
    bool covered = false;
    for (const Detection& d : detections) {
      if (v > d.lo - msec(30) && v <= d.hi) covered = true;
    }
    CHECK(covered);
  }
  CHECK(arow(*live, "probe", "detections") == 2);
}

TEST_CASE("parallel chunk probes catch a victim the sequential loop misses") {
  // Victim lands inside the post-probe blind window (period = t_c + eps,
  // request at probe+50ms with eps=100): aging hides it from the next
  // sequential probe, while rotating chunk probes sample soon enough.
  auto run = [](bool parallel) {
    auto e = std::make_unique<Engine>(13, "t");
    RouterConfig cfg = cache_cfg(32);
    cfg.cs.lifetime.kind = LifetimeDist::Kind::fixed;
    cfg.cs.lifetime.fixed = msec(400);
    e->add_router("edge", cfg);
    add_producer(*e, "origin", open_producer("/t"));
    AttackSpec spec;
    spec.id = "blind";
    spec.variant = parallel ? "TimingParallel" : "TimingSequential";
    spec.nodes = {"atk"};
    spec.params = nlohmann::json::parse(R"({
      "target": "/t/x",
      "probe_timeout_ms": 100,
      "threshold_ms": 12.5,
      "t_c_ms": 400,
      "probe": {"epsilon_ms": 100, "until_ms": 6000}
    })");
    if (parallel) spec.params["chunks"] = 4;
    add_attackers(*e, spec);
    std::vector<WorkloadSpec> w;
    if (parallel) {
      for (int c = 0; c < 4; ++c) {
        w.push_back(at_times("/t/x/" + std::to_string(c), {msec(2550)}));
      }
    } else {
      w.push_back(at_times("/t/x", {msec(2550)}));
    }
    add_consumer(*e, "c", std::move(w));
    e->connect("c", "edge", msec(1));
    e->connect("atk", "edge", msec(1));
    e->connect("edge", "origin", msec(10));
    e->add_fib("edge", Name::parse("/t"), "origin");
    e->run_until(msec(7000));
    return e;
  };

  auto seq = run(false);
  auto* seq_atk = dynamic_cast<TimingAttack*>(seq->behavior("atk"));
  REQUIRE(seq_atk != nullptr);
  CHECK(seq_atk->state().detections.empty());
  CHECK(seq_atk->probe_hits() == 0);

  auto par = run(true);
  auto* par_atk = dynamic_cast<TimingAttack*>(par->behavior("atk"));
  REQUIRE(par_atk != nullptr);
  REQUIRE(par_atk->state().detections.size() == 1);
  CHECK(par_atk->probe_hits() >= 2);
  const Detection& d = par_atk->state().detections.front();
  CHECK(msec(2550) > d.lo);
  CHECK(msec(2550) <= d.hi);
}

TEST_CASE("nonexistent-name flood fills the PIT to the rate-timeout product") {
  Engine e(17, "t");
  RouterConfig transit = cache_cfg(64);
  transit.pit_timeout = msec(500);
  e.add_router("transit", transit);
  e.add_router("border", cache_cfg(4));  // empty FIB: interests die here
  AttackSpec spec;
  spec.id = "ifa";
  spec.variant = "IFANonexistent";
  spec.nodes = {"b1", "b2"};
  spec.params = nlohmann::json{{"prefix", "/junk"}, {"rate_per_s", 100.0}};
  add_attackers(e, spec);
  e.connect("b1", "transit", msec(1));
  e.connect("b2", "transit", msec(1));
  e.connect("transit", "border", msec(2));
  e.add_fib("transit", Name::parse("/junk"), "border");
  e.set_stats_warmup(sec(2));

  e.run_until(sec(12));

  // Little's law: 200/s held 500 ms each → 100 entries on average.
  MetricsTable t = e.collect_metrics();
  double occupancy = t.at("transit", "pit_mean");
  CHECK(occupancy > 90.0);
  CHECK(occupancy < 110.0);
  CHECK(t.at("border", "drop_no_route") > 1500.0);
  double sent1 = arow(e, "ifa", "sent_b1");
  double sent2 = arow(e, "ifa", "sent_b2");
  CHECK(sent1 > 1050);  // Poisson(1200) within ±4σ
  CHECK(sent1 < 1350);
  CHECK(sent2 > 1050);
  CHECK(sent2 < 1350);
  CHECK(arow(e, "ifa", "recv_b1") == 0);
}

TEST_CASE("same-name floods collapse into one upstream fetch per generation") {
  Engine e(19, "t");
  e.add_router("transit", cache_cfg(16));
  ProducerSpec p = open_producer("/svc", msec(40));
  p.mark_no_cache = true;  // keep every request on the PIT path
  add_producer(e, "origin", p);
  AttackSpec spec;
  spec.id = "same";
  spec.variant = "IFASameName";
  spec.nodes = {"b"};
  spec.params = nlohmann::json{
      {"name", "/svc/hot"}, {"rate_per_s", 400.0}, {"periodic", true}};
  spec.stop = sec(5);
  add_attackers(e, spec);
  e.connect("b", "transit", msec(1));
  e.connect("transit", "origin", msec(1));
  e.add_fib("transit", Name::parse("/svc"), "origin");

  e.run_until(sec(6));

  const RouterCounters& c = e.router("transit").counters();
  CHECK(c.interests == 2000);  // periodic: 400/s for 5 s exactly
  CHECK(c.cs_hits == 0);
  CHECK(c.forwarded > 80);
  CHECK(c.forwarded < 150);
  CHECK(c.aggregated == c.interests - c.forwarded);
  CHECK(c.drop_dup_nonce == 0);
  // All aggregated interests share the bot's face, so each generation emits
  // one data copy: the flood amplifies nothing.
  CHECK(c.data_faces == c.forwarded);
  CHECK(arow(e, "same", "sent_b") == 2000);
  CHECK(arow(e, "same", "recv_b") == c.forwarded);
  MetricsTable t = e.collect_metrics();
  CHECK(t.at("transit", "pit_peak") == 1);
}

TEST_CASE("pollution flooding collapses the legit hit experience") {
  auto legit_hit_rate = [](bool with_attack) {
    Engine e(23, "t");
    e.add_router("edge", cache_cfg(12));
    add_producer(e, "origin", open_producer("/media"));
    add_producer(e, "junkfarm", open_producer("/junk"));
    add_consumer(e, "c", {zipf_poisson("/media", 40, 1.2, 150)});
    e.connect("c", "edge", msec(1));
    e.connect("edge", "origin", msec(10));
    e.connect("edge", "junkfarm", msec(10));
    e.add_fib("edge", Name::parse("/media"), "origin");
    e.add_fib("edge", Name::parse("/junk"), "junkfarm");
    if (with_attack) {
      AttackSpec spec;
      spec.id = "poll";
      spec.variant = "CachePollution";
      spec.nodes = {"b1", "b2"};
      spec.params = nlohmann::json{
          {"prefix", "/junk"}, {"rate_per_s", 500.0}, {"catalog", 400}};
      spec.start = sec(1);
      add_attackers(e, spec);
      e.connect("b1", "edge", msec(1));
      e.connect("b2", "edge", msec(1));
    }
    e.run_until(sec(8));
    auto* c = dynamic_cast<ConsumerBehavior*>(e.behavior("c"));
    REQUIRE(c != nullptr);
    std::uint64_t hits = 0;
    // Hits answer in 2 ms, origin fetches in 23 ms: threshold at 10 ms.
    for (const auto& [name, rtt] : c->satisfied_log()) {
      if (rtt < msec(10)) hits++;
    }
    REQUIRE(!c->satisfied_log().empty());
    return static_cast<double>(hits) /
           static_cast<double>(c->satisfied_log().size());
  };

  double quiet = legit_hit_rate(false);
  double polluted = legit_hit_rate(true);
  CHECK(quiet > 0.45);
  CHECK(polluted < quiet / 2);
}

TEST_CASE("conversation clone chases every message it can reach") {
  Engine e(29, "t");
  RouterConfig cfg = cache_cfg(6);
  cfg.pit_timeout = msec(120);  // unanswered polls must not pin the PIT
  e.add_router("edge", cfg);
  ProducerSpec p = open_producer("/chat/s1");
  p.mode = "conversation";
  p.conversation.start = msec(100);
  p.conversation.period = msec(100);
  p.conversation.count = 20;
  add_producer(e, "p", p);
  WorkloadSpec follow;
  follow.process.kind = ProcessSpec::Kind::periodic;
  follow.process.start = msec(120);
  follow.process.period = msec(100);
  follow.process.count = 20;
  follow.names.kind = NamePickerSpec::Kind::conversation;
  follow.names.conversation_producer = "p";
  add_consumer(e, "c", {follow});
  AttackSpec spec;
  spec.id = "clone";
  spec.variant = "CloneConversation";
  spec.nodes = {"atk"};
  spec.params = nlohmann::json{
      {"prefix", "/chat/s1"}, {"poll_ms", 50.0}, {"probe_timeout_ms", 200.0}};
  spec.start = msec(850);
  add_attackers(e, spec);
  e.connect("c", "edge", msec(1));
  e.connect("atk", "edge", msec(1));
  e.connect("edge", "p", msec(10));
  e.add_fib("edge", Name::parse("/chat"), "p");

  e.run_until(msec(4500));

  auto* atk = dynamic_cast<CloneAttack*>(e.behavior("atk"));
  REQUIRE(atk != nullptr);
  CHECK_FALSE(atk->blocked());
  // At 850 ms messages 1–8 have been fetched; the 6-slot cache holds 3–8.
  REQUIRE(atk->snapshot().size() == 6);
  std::vector<Name> want_snapshot;
  for (int i = 3; i <= 8; ++i) {
    want_snapshot.push_back(Name::parse("/chat/s1/" + std::to_string(i)));
  }
  CHECK(atk->snapshot() == want_snapshot);
  // Everything published after the snapshot point arrives, in order.
  REQUIRE(atk->fetched().size() == 12);
  for (std::size_t i = 0; i < atk->fetched().size(); ++i) {
    CHECK(atk->fetched()[i].name ==
          Name::parse("/chat/s1/" + std::to_string(9 + i)));
  }
  CHECK(arow(e, "clone", "fetched") == 12);
  CHECK(arow(e, "clone", "blocked") == 0);
}

TEST_CASE("opaque message names defeat the clone's sequence prediction") {
  Engine e(29, "t");
  RouterConfig cfg = cache_cfg(6);
  cfg.pit_timeout = msec(120);
  e.add_router("edge", cfg);
  ProducerSpec p = open_producer("/chat/s1");
  p.mode = "conversation";
  p.conversation.start = msec(100);
  p.conversation.period = msec(100);
  p.conversation.count = 20;
  p.conversation.opaque = true;
  add_producer(e, "p", p);
  WorkloadSpec follow;
  follow.process.kind = ProcessSpec::Kind::periodic;
  follow.process.start = msec(120);
  follow.process.period = msec(100);
  follow.process.count = 20;
  follow.names.kind = NamePickerSpec::Kind::conversation;
  follow.names.conversation_producer = "p";
  add_consumer(e, "c", {follow});
  AttackSpec spec;
  spec.id = "clone";
  spec.variant = "CloneConversation";
  spec.nodes = {"atk"};
  spec.params = nlohmann::json{{"prefix", "/chat/s1"}};
  spec.start = msec(850);
  add_attackers(e, spec);
  e.connect("c", "edge", msec(1));
  e.connect("atk", "edge", msec(1));
  e.connect("edge", "p", msec(10));
  e.add_fib("edge", Name::parse("/chat"), "p");

  e.run_until(msec(4500));

  auto* atk = dynamic_cast<CloneAttack*>(e.behavior("atk"));
  REQUIRE(atk != nullptr);
  CHECK(atk->snapshot().size() == 6);  // the cache still leaks history...
  CHECK(atk->blocked());               // ...but the next name is unguessable
  CHECK(atk->fetched().empty());
  CHECK(arow(e, "clone", "blocked") == 1);
}

TEST_CASE("poisoning rows tie the substitution and blocking counters") {
  auto run = [](bool edge_verifies) {
    auto e = std::make_unique<Engine>(31, "t");
    RouterConfig edge = cache_cfg(16);
    edge.verify_signatures = edge_verifies;
    edge.verify_cost = usec(50);
    e->add_router("edge", edge);
    AttackSpec spec;
    spec.id = "poison";
    spec.variant = "ContentPoisoning";
    spec.router = "evil";
    spec.params = nlohmann::json{{"prefix", "/media"}};
    RouterConfig evil = cache_cfg(16);
    configure_poisoning(evil, spec, e->registry());
    e->add_router("evil", evil);
    add_producer(*e, "origin", open_producer("/media"));
    WorkloadSpec w;
    w.process.kind = ProcessSpec::Kind::periodic;
    w.process.start = msec(100);
    w.process.period = msec(50);
    w.process.count = 30;
    w.names.kind = NamePickerSpec::Kind::unique;
    w.names.prefix = Name::parse("/media");
    add_consumer(*e, "c", {w});
    e->connect("c", "edge", msec(1));
    e->connect("edge", "evil", msec(1));
    e->connect("evil", "origin", msec(1));
    e->add_fib("edge", Name::parse("/media"), "evil");
    e->add_fib("evil", Name::parse("/media"), "origin");
    e->run_until(sec(4));
    append_poisoning_rows(*e, spec);
    return e;
  };

  auto guarded = run(true);
  CHECK(guarded->router("evil").counters().poison_substituted == 30);
  CHECK(guarded->router("edge").counters().poison_blocked == 30);
  CHECK(guarded->router("edge").counters().verify_calls == 30);
  CHECK(guarded->router("edge").counters().verify_cpu == usec(50) * 30);
  CHECK(guarded->router("edge").cs().size() == 0);  // junk never cached
  auto* gc = dynamic_cast<ConsumerBehavior*>(guarded->behavior("c"));
  REQUIRE(gc != nullptr);
  CHECK(gc->stats().sent == 30);
  CHECK(gc->stats().satisfied == 0);
  CHECK(gc->stats().timeouts == 30);
  CHECK(arow(*guarded, "poison", "substituted") == 30);
  CHECK(arow(*guarded, "poison", "verify_blocked") == 30);

  auto open = run(false);
  auto* oc = dynamic_cast<ConsumerBehavior*>(open->behavior("c"));
  REQUIRE(oc != nullptr);
  CHECK(oc->stats().satisfied == 0);
  CHECK(oc->stats().rejected == 30);  // junk reached the consumer instead
  CHECK(oc->stats().verify_unverifiable == 30);
  CHECK(open->router("edge").cs().size() > 0);  // and polluted the cache
  CHECK(arow(*open, "poison", "verify_blocked") == 0);
}
