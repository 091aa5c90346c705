#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ccnsim/behaviors.hpp"
#include "ccnsim/engine.hpp"

using namespace ccnsim;

namespace {

// Minimal scripted consumer: sends named interests at fixed times and logs
// every arrival with its timestamp.
class Probe : public NodeBehavior {
 public:
  Probe(std::string name, std::vector<std::pair<std::string, SimTime>> plan)
      : name_(std::move(name)), plan_(std::move(plan)) {}

  void start(Engine& e) override {
    id_ = e.node_id(name_);
    for (std::size_t i = 0; i < plan_.size(); ++i) {
      e.schedule_behavior_timer(id_, plan_[i].second, i);
    }
  }
  void on_timer(Engine& e, std::uint64_t tag, SimTime) override {
    Interest i;
    i.name = Name::parse(plan_[tag].first);
    i.nonce = ++nonce_;
    sent_.emplace_back(i.name, e.now());
    e.send_interest(id_, i);
  }
  void on_data(Engine&, const ContentObject& obj, SimTime now) override {
    got_.emplace_back(obj.name, now);
  }

  const std::vector<std::pair<Name, SimTime>>& sent() const { return sent_; }
  const std::vector<std::pair<Name, SimTime>>& got() const { return got_; }

 private:
  std::string name_;
  std::vector<std::pair<std::string, SimTime>> plan_;
  int id_ = -1;
  std::uint64_t nonce_ = 0;
  std::vector<std::pair<Name, SimTime>> sent_;
  std::vector<std::pair<Name, SimTime>> got_;
};

ProducerSpec open_producer(const std::string& prefix, SimTime service) {
  ProducerSpec spec;
  spec.prefix = Name::parse(prefix);
  spec.service_delay = service;
  return spec;
}

RouterConfig small_router() {
  RouterConfig cfg;
  cfg.cs.capacity = 16;
  return cfg;
}

}  // namespace

TEST_CASE("round trips decompose into link delays plus service time") {
  Engine e(1, "t");
  KeyId k = e.registry().register_key("p");
  auto probe = std::make_unique<Probe>(
      "c", std::vector<std::pair<std::string, SimTime>>{
               {"/d/x", msec(10)}, {"/d/x", msec(200)}});
  Probe* c = probe.get();
  e.add_router("r", small_router());
  e.add_endpoint("c", NodeKind::consumer, std::move(probe));
  e.add_endpoint("p", NodeKind::producer,
                 std::make_unique<ProducerBehavior>("p", open_producer("/d", msec(5)), k));
  e.connect("c", "r", msec(2));
  e.connect("r", "p", msec(10));
  e.add_fib("r", Name::parse("/d"), "p");
  e.set_audit(true);
  e.run_until(sec(1));

  REQUIRE(c->got().size() == 2);
  // Miss: 2 + 10 (out) + 5 (service) + 10 + 2 (back) = 29 ms after send.
  CHECK(c->got()[0].second - c->sent()[0].second == msec(29));
  // Hit from r's cache: 2 out + 2 back.
  CHECK(c->got()[1].second - c->sent()[1].second == msec(4));
  CHECK(e.router("r").counters().cs_hits == 1);
}

TEST_CASE("aggregated requests ride the same upstream fetch") {
  Engine e(1, "t");
  KeyId k = e.registry().register_key("p");
  auto p1 = std::make_unique<Probe>(
      "c1", std::vector<std::pair<std::string, SimTime>>{{"/d/v", msec(10)}});
  auto p2 = std::make_unique<Probe>(
      "c2", std::vector<std::pair<std::string, SimTime>>{{"/d/v", msec(11)}});
  Probe* c1 = p1.get();
  Probe* c2 = p2.get();
  e.add_router("r", small_router());
  e.add_endpoint("c1", NodeKind::consumer, std::move(p1));
  e.add_endpoint("c2", NodeKind::consumer, std::move(p2));
  auto prod = std::make_unique<ProducerBehavior>("p", open_producer("/d", msec(5)), k);
  ProducerBehavior* pp = prod.get();
  e.add_endpoint("p", NodeKind::producer, std::move(prod));
  e.connect("c1", "r", msec(2));
  e.connect("c2", "r", msec(2));
  e.connect("r", "p", msec(10));
  e.add_fib("r", Name::parse("/d"), "p");
  e.run_until(sec(1));

  CHECK(pp->served() == 1);  // one upstream fetch served both
  REQUIRE(c1->got().size() == 1);
  REQUIRE(c2->got().size() == 1);
  CHECK(e.router("r").counters().aggregated == 1);
  CHECK(e.router("r").counters().forwarded == 1);
  // Both replies leave the router together when the data lands.
  CHECK(c1->got()[0].second == c2->got()[0].second);
}

TEST_CASE("identical seeds give byte-identical traces; different seeds differ") {
  auto run = [](std::uint64_t seed) {
    std::ostringstream trace;
    Engine e(seed, "t");
    KeyId k = e.registry().register_key("p");
    std::vector<std::pair<std::string, SimTime>> plan;
    for (int i = 0; i < 40; ++i) {
      plan.emplace_back("/d/" + std::to_string(i % 7), msec(1 + 3 * i));
    }
    e.add_router("r", small_router());
    e.add_endpoint("c", NodeKind::consumer, std::make_unique<Probe>("c", plan));
    e.add_endpoint("p", NodeKind::producer,
                   std::make_unique<ProducerBehavior>("p", open_producer("/d", msec(5)), k));
    e.connect("c", "r", msec(2), /*loss=*/0.3);
    e.connect("r", "p", msec(10));
    e.add_fib("r", Name::parse("/d"), "p");
    e.set_trace(&trace);
    e.run_until(sec(1));
    return trace.str();
  };
  std::string a = run(7);
  std::string b = run(7);
  std::string c = run(8);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.find(" lost") != std::string::npos);  // loss actually exercised
}

TEST_CASE("full loss delivers nothing; lossless delivers everything") {
  auto run = [](double loss) {
    Engine e(3, "t");
    KeyId k = e.registry().register_key("p");
    auto probe = std::make_unique<Probe>(
        "c", std::vector<std::pair<std::string, SimTime>>{{"/d/a", msec(1)},
                                                          {"/d/b", msec(2)}});
    Probe* c = probe.get();
    e.add_router("r", small_router());
    e.add_endpoint("c", NodeKind::consumer, std::move(probe));
    e.add_endpoint("p", NodeKind::producer,
                   std::make_unique<ProducerBehavior>("p", open_producer("/d", msec(5)), k));
    e.connect("c", "r", msec(2), loss);
    e.connect("r", "p", msec(10));
    e.add_fib("r", Name::parse("/d"), "p");
    e.run_until(sec(1));
    return c->got().size();
  };
  CHECK(run(1.0) == 0);
  CHECK(run(0.0) == 2);
}

TEST_CASE("construction errors are loud") {
  Engine e(1, "t");
  e.add_router("r", small_router());
  CHECK_THROWS_AS(e.add_router("r", small_router()), std::invalid_argument);
  e.add_endpoint("c", NodeKind::consumer,
                 std::make_unique<Probe>("c", std::vector<std::pair<std::string, SimTime>>{}));
  CHECK_THROWS_AS(e.connect("c", "r", -1), std::invalid_argument);
  e.connect("c", "r", msec(1));
  // FIB on a non-router, and a next hop that is not adjacent.
  CHECK_THROWS_AS(e.add_fib("c", Name::parse("/a"), "r"), std::invalid_argument);
  CHECK_THROWS_AS(e.add_fib("r", Name::parse("/a"), "nothere"), std::out_of_range);
  e.add_router("far", small_router());
  CHECK_THROWS_AS(e.add_fib("r", Name::parse("/a"), "far"), std::invalid_argument);
  CHECK_THROWS_AS(e.router("c"), std::invalid_argument);
  CHECK_THROWS_AS(e.node_id("ghost"), std::out_of_range);
  // Scheduling into the past is a logic error.
  CHECK_THROWS_AS(e.schedule_behavior_timer(0, -1, 0), std::logic_error);
}

TEST_CASE("warmup restarts router counters but not delivery") {
  Engine e(1, "t");
  KeyId k = e.registry().register_key("p");
  std::vector<std::pair<std::string, SimTime>> plan;
  for (int i = 0; i < 10; ++i) {
    plan.emplace_back("/d/" + std::to_string(i), msec(10 * (i + 1)));
  }
  auto probe = std::make_unique<Probe>("c", plan);
  Probe* c = probe.get();
  e.add_router("r", small_router());
  e.add_endpoint("c", NodeKind::consumer, std::move(probe));
  e.add_endpoint("p", NodeKind::producer,
                 std::make_unique<ProducerBehavior>("p", open_producer("/d", msec(1)), k));
  e.connect("c", "r", msec(1));
  e.connect("r", "p", msec(1));
  e.add_fib("r", Name::parse("/d"), "p");
  // Warmup cuts between the 6th and 7th interest (60 ms < 65 < 70).
  e.set_stats_warmup(msec(65));
  e.run_until(sec(1));

  CHECK(c->got().size() == 10);  // deliveries unaffected
  CHECK(e.router("r").counters().interests == 4);  // counters restarted
}

TEST_CASE("blacklist broadcasts purge every router in the neighborhood") {
  Engine e(1, "t");
  KeyId k = e.registry().register_key("p");
  auto probe = std::make_unique<Probe>(
      "c", std::vector<std::pair<std::string, SimTime>>{{"/d/a", msec(1)},
                                                        {"/d/b", msec(2)}});
  e.add_router("r1", small_router());
  e.add_router("r2", small_router());
  e.add_endpoint("c", NodeKind::consumer, std::move(probe));
  e.add_endpoint("p", NodeKind::producer,
                 std::make_unique<ProducerBehavior>("p", open_producer("/d", msec(1)), k));
  e.connect("c", "r1", msec(1));
  e.connect("r1", "r2", msec(1));
  e.connect("r2", "p", msec(1));
  e.add_fib("r1", Name::parse("/d"), "r2");
  e.add_fib("r2", Name::parse("/d"), "p");
  e.schedule_blacklist(msec(100), {Name::parse("/d/a")}, "r1");
  e.run_until(sec(1));

  // Both caches held /d/a and /d/b after the fetches; the broadcast removed
  // /d/a everywhere, /d/b nowhere.
  for (const char* r : {"r1", "r2"}) {
    CHECK_FALSE(e.router(r).cs().contains(Name::parse("/d/a"), e.now()));
    CHECK(e.router(r).cs().contains(Name::parse("/d/b"), e.now()));
    CHECK(e.router(r).counters().blacklist_removed == 1);
  }
}

TEST_CASE("trace records interest sends with outcome fields") {
  std::ostringstream trace;
  Engine e(1, "t");
  KeyId k = e.registry().register_key("p");
  e.add_router("r", small_router());
  e.add_endpoint("c", NodeKind::consumer,
                 std::make_unique<Probe>(
                     "c", std::vector<std::pair<std::string, SimTime>>{{"/d/a", msec(1)}}));
  e.add_endpoint("p", NodeKind::producer,
                 std::make_unique<ProducerBehavior>("p", open_producer("/d", msec(1)), k));
  e.connect("c", "r", msec(1));
  e.connect("r", "p", msec(1));
  e.add_fib("r", Name::parse("/d"), "p");
  e.set_trace(&trace);
  e.run_until(sec(1));
  std::string t = trace.str();
  CHECK(t.find("1000 c interest /d/a 0 sent") != std::string::npos);
  CHECK(t.find("r interest /d/a 0 forwarded") != std::string::npos);
  CHECK(t.find("r data /d/a 1 delivered") != std::string::npos);
}
