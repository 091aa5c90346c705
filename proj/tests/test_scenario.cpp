#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ccnsim/behaviors.hpp"
#include "ccnsim/scenario.hpp"

using namespace ccnsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_doc() {
  return json::parse(R"({
    "id": "unit",
    "version": 1,
    "t_end_ms": 1000,
    "nodes": [
      {"name": "c1", "type": "consumer",
       "workloads": [{"process": {"kind": "periodic", "period_ms": 100, "count": 5},
                      "names": {"kind": "fixed", "name": "/video/a"}}]},
      {"name": "edge", "type": "router", "cache": {"capacity": 8}},
      {"name": "origin", "type": "producer", "prefix": "/video"}
    ],
    "links": [
      {"a": "c1", "b": "edge", "delay_ms": 1},
      {"a": "edge", "b": "origin", "delay_ms": 2}
    ],
    "fib": [{"router": "edge", "prefix": "/video", "next_hop": "origin"}]
  })");
}

void expect_err(const json& doc, const std::string& path,
                const std::string& fragment) {
  INFO("expected failure at ", path, " mentioning '", fragment, "'");
  try {
    parse_scenario(doc);
    FAIL_CHECK("parse_scenario accepted an invalid document");
  } catch (const ScenarioError& e) {
    CHECK(e.path() == path);
    CHECK(std::string(e.what()).find(fragment) != std::string::npos);
  }
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("ccnsim_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("the base document and every bundled scenario validate") {
  Scenario sc = parse_scenario(base_doc());
  CHECK(sc.id == "unit");
  CHECK(sc.t_end == sec(1));
  CHECK(sc.default_seed == 1);

#ifdef CCNSIM_SCENARIO_DIR
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(CCNSIM_SCENARIO_DIR)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    INFO("scenario ", entry.path().filename().string());
    Scenario bundled = load_scenario(entry.path().string());
    CHECK_FALSE(bundled.id.empty());
    CHECK(bundled.t_end > 0);
    ++seen;
  }
  CHECK(seen >= 10);
#endif
}

TEST_CASE("validation errors cite the JSON pointer of the offending value") {
  {
    json d = base_doc();
    d["bogus"] = 1;
    expect_err(d, "/bogus", "unknown key");
  }
  {
    json d = base_doc();
    d.erase("id");
    expect_err(d, "", "missing required key 'id'");
  }
  {
    json d = base_doc();
    d["t_end_ms"] = "soon";
    expect_err(d, "/t_end_ms", "expected a number");
  }
  {
    json d = base_doc();
    d["t_end_ms"] = 0;
    expect_err(d, "/t_end_ms", "must be > 0");
  }
  {
    json d = base_doc();
    d["stats_warmup_ms"] = 1000;
    expect_err(d, "/stats_warmup_ms", "must be < t_end_ms");
  }
  {
    json d = base_doc();
    d["version"] = 2;
    expect_err(d, "/version", "unsupported");
  }
  {
    json d = base_doc();
    d["nodes"][1]["type"] = "switch";
    expect_err(d, "/nodes/1/type", "expected router");
  }
  {
    json d = base_doc();
    d["nodes"][2]["name"] = "c1";
    expect_err(d, "/nodes/2/name", "duplicate node name");
  }
  {
    json d = base_doc();
    d["nodes"][1]["cache"]["policy"] = "MRU";
    expect_err(d, "/nodes/1/cache/policy", "MRU");
  }
  {
    json d = base_doc();
    d["nodes"][1]["cache"]["lifetime"] = {{"dist", "uniform"}, {"lo_ms", 50}, {"hi_ms", 50}};
    expect_err(d, "/nodes/1/cache/lifetime/hi_ms", "must be > lo_ms");
  }
  {
    json d = base_doc();
    d["nodes"][1]["pit_timeout_ms"] = 0;
    expect_err(d, "/nodes/1/pit_timeout_ms", "must be > 0");
  }
  {
    json d = base_doc();
    d["nodes"][0]["workloads"][0]["process"] = {{"kind", "schedule"},
                                                {"times_ms", {10, 5}}};
    expect_err(d, "/nodes/0/workloads/0/process/times_ms/1", "nondecreasing");
  }
  {
    json d = base_doc();
    d["nodes"][0]["workloads"][0]["via_overlay"] = true;
    expect_err(d, "/nodes/0/workloads/0/via_overlay", "no overlay config");
  }
  {
    json d = base_doc();
    d["nodes"][0]["overlay"] = {{"ars", {"a1"}}};
    expect_err(d, "/nodes/0/overlay/ars", "at least 2");
  }
  {
    json d = base_doc();
    d["nodes"][2]["mode"] = "catalog";
    expect_err(d, "/nodes/2/catalog", "non-empty catalog");
  }
  {
    json d = base_doc();
    d["nodes"][2]["catalog"] = {"/other/x"};
    expect_err(d, "/nodes/2/catalog/0", "not under producer prefix");
  }
  {
    json d = base_doc();
    d["links"][0]["a"] = "ghost";
    expect_err(d, "/links/0/a", "unknown node");
  }
  {
    json d = base_doc();
    d["links"][0]["b"] = "c1";
    expect_err(d, "/links/0", "endpoints must differ");
  }
  {
    json d = base_doc();
    d["links"][0]["loss"] = 1.5;
    expect_err(d, "/links/0/loss", "in [0, 1]");
  }
  {
    json d = base_doc();
    d["links"].push_back({{"a", "c1"}, {"b", "origin"}, {"delay_ms", 1}});
    expect_err(d, "/links", "exactly one link");
  }
  {
    json d = base_doc();
    d["fib"][0]["router"] = "c1";
    expect_err(d, "/fib/0/router", "not a router");
  }
  {
    json d = base_doc();
    d["fib"][0]["prefix"] = "video";
    expect_err(d, "/fib/0/prefix", "bad name");
  }
  {
    json d = base_doc();
    d["fib"][0]["next_hop"] = "c1";
    expect_err(d, "/fib/0/next_hop", "no link between");
  }
  {
    json d = base_doc();
    d["nodes"][1]["preload"] = {{{"name", "/video/a"}, {"producer", "nobody"}}};
    expect_err(d, "/nodes", "unknown producer");
  }
  {
    json d = base_doc();
    d["blacklist_broadcasts"] = {{{"at_ms", 10}, {"origin", "c1"}, {"names", {"/video/a"}}}};
    expect_err(d, "/blacklist_broadcasts/0/origin", "not a router");
  }
  {
    json d = base_doc();
    d["state_dumps"] = {{{"at_ms", 10}, {"node", "origin"}}};
    expect_err(d, "/state_dumps/0/node", "not a router");
  }
}

TEST_CASE("attack validation checks nodes, ids, and params up front") {
  json d = base_doc();
  d["nodes"].push_back({{"name", "b1"}, {"type", "attacker"}});
  d["links"].push_back({{"a", "b1"}, {"b", "edge"}, {"delay_ms", 1}});
  d["attacks"] = json::array(
      {{{"id", "f1"},
        {"variant", "IFASameName"},
        {"nodes", {"b1"}},
        {"params", {{"rate_per_s", 50}, {"name", "/video/hot"}}}}});
  CHECK_NOTHROW(parse_scenario(d));

  {
    json bad = d;
    bad["attacks"].push_back(bad["attacks"][0]);  // duplicate id, reused bot
    expect_err(bad, "/attacks/1/id", "duplicate attack id");
  }
  {
    json bad = d;
    bad["attacks"][1] = bad["attacks"][0];
    bad["attacks"][1]["id"] = "f2";
    expect_err(bad, "/attacks/1/nodes", "already used");
  }
  {
    json bad = d;
    bad["attacks"][0]["nodes"] = {"c1"};
    expect_err(bad, "/attacks/0/nodes", "not an attacker node");
  }
  {
    json bad = d;
    bad["attacks"][0]["params"].erase("name");
    expect_err(bad, "/attacks/0/params", "name");
  }
  {
    json bad = d;
    bad["attacks"][0]["variant"] = "Enumerate";
    bad["attacks"][0]["params"] = json::object();
    expect_err(bad, "/attacks/0/params", "prefix");
  }
  {
    json bad = d;
    bad["attacks"][0]["stop_ms"] = 0;
    expect_err(bad, "/attacks/0/stop_ms", "must be > start_ms");
  }
  {
    json bad = d;
    bad["attacks"] = json::array();
    expect_err(bad, "/nodes", "not referenced by any attack");
  }
  {
    json bad = d;
    bad["attacks"][0]["variant"] = "ContentPoisoning";
    bad["attacks"][0]["params"] = {{"prefix", "/video"}};
    expect_err(bad, "/attacks/0/nodes", "runs on a router");
  }

  // well-formed specs surface through scenario_attacks in document order
  json two = d;
  two["nodes"].push_back({{"name", "b2"}, {"type", "attacker"}});
  two["links"].push_back({{"a", "b2"}, {"b", "edge"}, {"delay_ms", 1}});
  two["attacks"].push_back({{"id", "e1"},
                            {"variant", "Enumerate"},
                            {"nodes", {"b2"}},
                            {"params", {{"prefix", "/video"}}},
                            {"start_ms", 250},
                            {"stop_ms", 900}});
  std::vector<AttackSpec> specs = scenario_attacks(parse_scenario(two));
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].id == "f1");
  CHECK(specs[0].stop == kNever);
  CHECK(specs[1].id == "e1");
  CHECK(specs[1].variant == "Enumerate");
  CHECK(specs[1].nodes == std::vector<std::string>{"b2"});
  CHECK(specs[1].start == msec(250));
  CHECK(specs[1].stop == msec(900));
  CHECK(specs[1].params.at("prefix") == "/video");
}

TEST_CASE("load_scenario distinguishes missing files from bad JSON") {
  CHECK_THROWS_WITH_AS(load_scenario("/nonexistent/nope.json"),
                       doctest::Contains("cannot open"), ScenarioError);
  fs::path dir = fresh_dir("badjson");
  fs::path file = dir / "broken.json";
  std::ofstream(file) << "{ not json";
  CHECK_THROWS_WITH_AS(load_scenario(file.string()),
                       doctest::Contains("invalid JSON"), ScenarioError);
}

TEST_CASE("build_engine applies preload, seed, and document order") {
  json d = base_doc();
  d["seed"] = 77;
  d["nodes"][1]["preload"] = json::array({{{"name", "/video/a"}, {"producer", "origin"}},
                                          {{"name", "/video/b"}, {"producer", "origin"}}});
  Scenario sc = parse_scenario(d);
  CHECK(sc.default_seed == 77);
  auto e = build_engine(sc, sc.default_seed);
  CHECK(e->router("edge").cs().size() == 2);
  CHECK(e->router("edge").cs().find(Name::parse("/video/a")) != nullptr);

  e->run_until(sc.t_end);
  auto* c1 = dynamic_cast<ConsumerBehavior*>(e->behavior("c1"));
  REQUIRE(c1 != nullptr);
  CHECK(c1->stats().sent == 5);
  CHECK(c1->stats().satisfied == 5);
}

TEST_CASE("same seed reproduces byte-identical outputs; new seeds diverge") {
  json d = json::parse(R"({
    "id": "det",
    "t_end_ms": 3000,
    "stats_warmup_ms": 500,
    "nodes": [
      {"name": "c1", "type": "consumer",
       "workloads": [{"process": {"kind": "poisson", "rate_per_s": 40},
                      "names": {"kind": "zipf", "prefix": "/v", "catalog": 30, "alpha": 1.0}}]},
      {"name": "b1", "type": "attacker"},
      {"name": "edge", "type": "router", "cache": {"capacity": 16}},
      {"name": "origin", "type": "producer", "prefix": "/v", "service_delay_ms": 2}
    ],
    "links": [
      {"a": "c1", "b": "edge", "delay_ms": 1},
      {"a": "b1", "b": "edge", "delay_ms": 1},
      {"a": "edge", "b": "origin", "delay_ms": 5, "loss": 0.05}
    ],
    "fib": [{"router": "edge", "prefix": "/v", "next_hop": "origin"}],
    "attacks": [{"id": "f1", "variant": "IFASameName", "nodes": ["b1"],
                 "params": {"rate_per_s": 100, "name": "/v/hot"}, "start_ms": 500}]
  })");
  Scenario sc = parse_scenario(d);

  fs::path a = fresh_dir("det_a");
  fs::path b = fresh_dir("det_b");
  fs::path c = fresh_dir("det_c");
  run_scenario(sc, 9, a.string(), true);
  run_scenario(sc, 9, b.string(), true);
  run_scenario(sc, 10, c.string(), true);

  for (const char* f : {"metrics.csv", "attack_results.csv", "trace.log"}) {
    INFO("file ", f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "metrics.csv") != slurp(c / "metrics.csv"));

  // golden column layout
  std::istringstream ms(slurp(a / "metrics.csv"));
  std::string header;
  std::getline(ms, header);
  CHECK(header == "scenario_id,seed,entity,metric,value");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(ms, line)) {
    auto cols = split(line, ',');
    REQUIRE(cols.size() == 5);
    CHECK(cols[0] == "det");
    CHECK(cols[1] == "9");
    ++rows;
  }
  CHECK(rows > 10);

  std::istringstream as(slurp(a / "attack_results.csv"));
  std::getline(as, header);
  CHECK(header == "scenario_id,seed,attack_id,variant,param_hash,metric,value");
  bool saw_sent = false;
  while (std::getline(as, line)) {
    auto cols = split(line, ',');
    REQUIRE(cols.size() == 7);
    CHECK(cols[2] == "f1");
    CHECK(cols[3] == "IFASameName");
    CHECK(cols[4].size() == 16);
    if (cols[5] == "sent_b1") saw_sent = true;
  }
  CHECK(saw_sent);
}

TEST_CASE("sweep runs the full grid cross product and labels each cell") {
  json grid = json::parse(R"({
    "/nodes/0/workloads/0/process/period_ms": [50, 100, 200],
    "/nodes/1/cache/capacity": [8, 16]
  })");
  Scenario sc = parse_scenario(base_doc());
  fs::path dir = fresh_dir("sweep");
  run_sweep(sc, grid, 3, 4, dir.string());

  std::istringstream ms(slurp(dir / "sweep_metrics.csv"));
  std::string header;
  std::getline(ms, header);
  CHECK(header == "scenario_id,seed,cell,entity,metric,value");

  std::set<std::pair<std::string, std::string>> combos;  // (seed, cell)
  std::string line;
  while (std::getline(ms, line)) {
    auto cols = split(line, ',');
    REQUIRE(cols.size() == 6);
    CHECK(cols[0] == "unit");
    combos.insert({cols[1], cols[2]});
  }
  CHECK(combos.size() == 12);  // 3 x 2 cells x 2 seeds
  std::set<std::string> cells;
  for (const auto& [seed, cell] : combos) {
    CHECK((seed == "3" || seed == "4"));
    cells.insert(cell);
  }
  std::set<std::string> expect;
  for (const char* p : {"50", "100", "200"}) {
    for (const char* c : {"8", "16"}) {
      expect.insert("/nodes/0/workloads/0/process/period_ms=" + std::string(p) +
                    ";/nodes/1/cache/capacity=" + c);
    }
  }
  CHECK(cells == expect);

  std::istringstream as(slurp(dir / "sweep_attacks.csv"));
  std::getline(as, header);
  CHECK(header == "scenario_id,seed,cell,attack_id,variant,param_hash,metric,value");
}

TEST_CASE("sweeping a string axis rewrites the document per cell") {
  Scenario sc = parse_scenario(base_doc());
  fs::path dir = fresh_dir("sweep_id");
  run_sweep(sc, json::parse(R"({"/id": ["alpha", "beta"]})"), 5, 5, dir.string());
  std::istringstream ms(slurp(dir / "sweep_metrics.csv"));
  std::string line;
  std::getline(ms, line);  // header
  std::set<std::pair<std::string, std::string>> pairs;
  while (std::getline(ms, line)) {
    auto cols = split(line, ',');
    pairs.insert({cols[0], cols[2]});
  }
  std::set<std::pair<std::string, std::string>> expect{
      {"alpha", "/id=alpha"}, {"beta", "/id=beta"}};
  CHECK(pairs == expect);
}

TEST_CASE("sweep rejects malformed grids before running anything") {
  Scenario sc = parse_scenario(base_doc());
  CHECK_THROWS_WITH_AS(run_sweep(sc, json::parse("[1]"), 1, 1, ""),
                       doctest::Contains("non-empty JSON object"), ScenarioError);
  CHECK_THROWS_WITH_AS(run_sweep(sc, json::parse(R"({"id": [1]})"), 1, 1, ""),
                       doctest::Contains("not a JSON pointer"), ScenarioError);
  CHECK_THROWS_WITH_AS(run_sweep(sc, json::parse(R"({"/nope": [1]})"), 1, 1, ""),
                       doctest::Contains("does not exist"), ScenarioError);
  CHECK_THROWS_WITH_AS(run_sweep(sc, json::parse(R"({"/t_end_ms": []})"), 1, 1, ""),
                       doctest::Contains("non-empty array"), ScenarioError);
  CHECK_THROWS_WITH_AS(run_sweep(sc, json::parse(R"({"/t_end_ms": [[1]]})"), 1, 1, ""),
                       doctest::Contains("scalars"), ScenarioError);
  CHECK_THROWS_WITH_AS(run_sweep(sc, json::parse(R"({"/t_end_ms": [500]})"), 2, 1, ""),
                       doctest::Contains("empty seed range"), ScenarioError);
}
