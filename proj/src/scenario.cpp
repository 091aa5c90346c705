#include "ccnsim/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "ccnsim/behaviors.hpp"

namespace ccnsim {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path, what);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void expect_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
}

void allow_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  expect_object(j, path);
  for (const auto& item : j.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* k) { return item.key() == k; });
    if (!known) fail(path + "/" + item.key(), "unknown key");
  }
}

const json& member(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing required key '") + key + "'");
  return *it;
}

std::string str_of(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double num_of(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

bool bool_of(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::uint64_t uint_of(const json& j, const std::string& path) {
  if (!(j.is_number_unsigned() ||
        (j.is_number_integer() && j.get<std::int64_t>() >= 0))) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

SimTime ms_of(const json& j, const std::string& path) {
  double v = num_of(j, path);
  if (v < 0) fail(path, "must be >= 0");
  return from_ms(v);
}

Name name_of(const json& j, const std::string& path) {
  std::string text = str_of(j, path);
  try {
    return Name::parse(text);
  } catch (const NameParseError& err) {
    fail(path, std::string("bad name: ") + err.what());
  }
}

// --- parsed model ---

struct RouterNode {
  std::string name;
  RouterConfig cfg;
  std::vector<std::pair<Name, std::string>> preload;  // (name, producer)
};

struct ConsumerNode {
  std::string name;
  SimTime timeout = sec(4);
  std::vector<WorkloadSpec> workloads;
  std::optional<OverlayConfig> overlay;
};

struct ProducerNode {
  std::string name;
  ProducerSpec spec;
};

struct Model {
  std::string id;
  std::uint64_t seed = 1;
  SimTime t_end = 0;
  SimTime warmup = 0;
  SimTime consumer_timeout = sec(4);

  std::vector<std::string> order;  // node names in document order
  std::map<std::string, NodeKind> kinds;
  std::map<std::string, RouterNode> routers;
  std::map<std::string, ConsumerNode> consumers;
  std::map<std::string, ProducerNode> producers;
  std::vector<std::string> ars;
  std::vector<std::string> attackers;

  struct LinkDef {
    std::string a, b;
    SimTime delay = 0;
    double loss = 0;
  };
  std::vector<LinkDef> links;

  struct FibDef {
    std::string router;
    Name prefix;
    std::string next_hop;
  };
  std::vector<FibDef> fib;

  std::vector<AttackSpec> attacks;

  struct Broadcast {
    SimTime at = 0;
    std::string origin;
    std::vector<Name> names;
  };
  std::vector<Broadcast> broadcasts;

  struct Dump {
    SimTime at = 0;
    std::string node;
  };
  std::vector<Dump> dumps;
};

LifetimeDist parse_lifetime(const json& j, const std::string& path) {
  allow_keys(j, path, {"dist", "ms", "lo_ms", "hi_ms"});
  LifetimeDist d;
  std::string dist = str_of(member(j, path, "dist"), path + "/dist");
  if (dist == "none") {
    d.kind = LifetimeDist::Kind::none;
  } else if (dist == "fixed") {
    d.kind = LifetimeDist::Kind::fixed;
    d.fixed = ms_of(member(j, path, "ms"), path + "/ms");
    if (d.fixed <= 0) fail(path + "/ms", "must be > 0");
  } else if (dist == "uniform") {
    d.kind = LifetimeDist::Kind::uniform;
    d.lo = ms_of(member(j, path, "lo_ms"), path + "/lo_ms");
    d.hi = ms_of(member(j, path, "hi_ms"), path + "/hi_ms");
    if (d.hi <= d.lo) fail(path + "/hi_ms", "must be > lo_ms");
  } else {
    fail(path + "/dist", "expected none, fixed, or uniform");
  }
  return d;
}

DetectorConfig parse_detector(const json& j, const std::string& path) {
  allow_keys(j, path,
             {"window_ms", "check_interval_ms", "periodicity", "hit_rate",
              "exclude_rate", "pollution", "response"});
  DetectorConfig d;
  if (j.contains("window_ms")) {
    d.window = ms_of(j["window_ms"], path + "/window_ms");
    if (d.window <= 0) fail(path + "/window_ms", "must be > 0");
  }
  if (j.contains("check_interval_ms")) {
    d.check_interval = ms_of(j["check_interval_ms"], path + "/check_interval_ms");
    if (d.check_interval <= 0) fail(path + "/check_interval_ms", "must be > 0");
  }
  if (j.contains("periodicity")) {
    const json& p = j["periodicity"];
    allow_keys(p, path + "/periodicity", {"m", "cv_max"});
    d.periodicity_enabled = true;
    if (p.contains("m")) d.periodicity_m = uint_of(p["m"], path + "/periodicity/m");
    if (d.periodicity_m < 2) fail(path + "/periodicity/m", "must be >= 2");
    if (p.contains("cv_max")) {
      d.periodicity_cv_max = num_of(p["cv_max"], path + "/periodicity/cv_max");
    }
  }
  if (j.contains("hit_rate")) {
    const json& p = j["hit_rate"];
    allow_keys(p, path + "/hit_rate", {"max", "min_lookups"});
    d.hit_rate_enabled = true;
    if (p.contains("max")) d.hit_rate_max = num_of(p["max"], path + "/hit_rate/max");
    if (p.contains("min_lookups")) {
      d.hit_rate_min_lookups = uint_of(p["min_lookups"], path + "/hit_rate/min_lookups");
    }
  }
  if (j.contains("exclude_rate")) {
    const json& p = j["exclude_rate"];
    allow_keys(p, path + "/exclude_rate", {"max"});
    d.exclude_enabled = true;
    if (p.contains("max")) d.exclude_rate_max = num_of(p["max"], path + "/exclude_rate/max");
  }
  if (j.contains("pollution")) {
    const json& p = j["pollution"];
    allow_keys(p, path + "/pollution", {"min_faces", "share_min"});
    d.pollution_enabled = true;
    if (p.contains("min_faces")) {
      d.pollution_min_faces = uint_of(p["min_faces"], path + "/pollution/min_faces");
    }
    if (p.contains("share_min")) {
      d.pollution_share_min = num_of(p["share_min"], path + "/pollution/share_min");
    }
  }
  if (j.contains("response")) {
    std::string r = str_of(j["response"], path + "/response");
    try {
      d.response = response_policy_from_string(r);
    } catch (const std::exception& e) {
      fail(path + "/response", e.what());
    }
  }
  return d;
}

RouterNode parse_router(const json& j, const std::string& path,
                        const std::string& name) {
  allow_keys(j, path,
             {"name", "type", "cache", "pit_capacity", "pit_timeout_ms",
              "verify_signatures", "verify_cost_us", "honor_no_cache",
              "allow_non_invasive", "allow_exclude", "allow_chunk_requests",
              "hit_delay", "data_delay", "per_domain_limit",
              "revalidate_interval_ms", "detector", "preload"});
  RouterNode rn;
  rn.name = name;
  RouterConfig& cfg = rn.cfg;

  const json& cache = member(j, path, "cache");
  std::string cpath = path + "/cache";
  allow_keys(cache, cpath,
             {"capacity", "policy", "lifetime", "popularity_k",
              "popularity_window_ms"});
  cfg.cs.capacity = uint_of(member(cache, cpath, "capacity"), cpath + "/capacity");
  if (cfg.cs.capacity == 0) fail(cpath + "/capacity", "must be >= 1");
  if (cache.contains("policy")) {
    std::string p = str_of(cache["policy"], cpath + "/policy");
    try {
      cfg.cs.policy = cache_policy_from_string(p);
    } catch (const std::exception& e) {
      fail(cpath + "/policy", e.what());
    }
  }
  if (cache.contains("lifetime")) {
    cfg.cs.lifetime = parse_lifetime(cache["lifetime"], cpath + "/lifetime");
  }
  if (cache.contains("popularity_k")) {
    cfg.cs.popularity_k = uint_of(cache["popularity_k"], cpath + "/popularity_k");
  }
  if (cache.contains("popularity_window_ms")) {
    cfg.cs.popularity_window =
        ms_of(cache["popularity_window_ms"], cpath + "/popularity_window_ms");
  }

  if (j.contains("pit_capacity")) {
    cfg.pit_capacity = uint_of(j["pit_capacity"], path + "/pit_capacity");
    if (cfg.pit_capacity == 0) fail(path + "/pit_capacity", "must be >= 1");
  }
  if (j.contains("pit_timeout_ms")) {
    cfg.pit_timeout = ms_of(j["pit_timeout_ms"], path + "/pit_timeout_ms");
    if (cfg.pit_timeout <= 0) fail(path + "/pit_timeout_ms", "must be > 0");
  }
  if (j.contains("verify_signatures")) {
    cfg.verify_signatures = bool_of(j["verify_signatures"], path + "/verify_signatures");
  }
  if (j.contains("verify_cost_us")) {
    cfg.verify_cost = static_cast<SimTime>(
        uint_of(j["verify_cost_us"], path + "/verify_cost_us"));
  }
  if (j.contains("honor_no_cache")) {
    cfg.honor_no_cache = bool_of(j["honor_no_cache"], path + "/honor_no_cache");
  }
  if (j.contains("allow_non_invasive")) {
    cfg.allow_non_invasive = bool_of(j["allow_non_invasive"], path + "/allow_non_invasive");
  }
  if (j.contains("allow_exclude")) {
    cfg.allow_exclude = bool_of(j["allow_exclude"], path + "/allow_exclude");
  }
  if (j.contains("allow_chunk_requests")) {
    cfg.allow_chunk_requests =
        bool_of(j["allow_chunk_requests"], path + "/allow_chunk_requests");
  }
  auto parse_delay = [&](const char* key, HitDelay& out) {
    if (!j.contains(key)) return;
    const json& hd = j[key];
    std::string dpath = path + "/" + key;
    allow_keys(hd, dpath, {"min_ms", "jitter_ms"});
    if (hd.contains("min_ms")) out.min = ms_of(hd["min_ms"], dpath + "/min_ms");
    if (hd.contains("jitter_ms")) {
      out.jitter = ms_of(hd["jitter_ms"], dpath + "/jitter_ms");
    }
  };
  parse_delay("hit_delay", cfg.hit_delay);
  parse_delay("data_delay", cfg.data_delay);
  if (j.contains("per_domain_limit")) {
    double r = num_of(j["per_domain_limit"], path + "/per_domain_limit");
    if (r <= 0) fail(path + "/per_domain_limit", "must be > 0");
    cfg.per_domain_limit = r;
  }
  if (j.contains("revalidate_interval_ms")) {
    SimTime t = ms_of(j["revalidate_interval_ms"], path + "/revalidate_interval_ms");
    if (t <= 0) fail(path + "/revalidate_interval_ms", "must be > 0");
    cfg.revalidate_interval = t;
  }
  if (j.contains("detector")) {
    cfg.detector = parse_detector(j["detector"], path + "/detector");
  }
  if (j.contains("preload")) {
    const json& pl = j["preload"];
    expect_array(pl, path + "/preload");
    for (std::size_t i = 0; i < pl.size(); ++i) {
      std::string ipath = path + "/preload/" + std::to_string(i);
      allow_keys(pl[i], ipath, {"name", "producer"});
      rn.preload.emplace_back(
          name_of(member(pl[i], ipath, "name"), ipath + "/name"),
          str_of(member(pl[i], ipath, "producer"), ipath + "/producer"));
    }
  }
  return rn;
}

ProcessSpec parse_process(const json& j, const std::string& path) {
  allow_keys(j, path,
             {"kind", "rate_per_s", "start_ms", "period_ms", "count", "times_ms"});
  ProcessSpec p;
  std::string kind = str_of(member(j, path, "kind"), path + "/kind");
  if (kind == "poisson") {
    p.kind = ProcessSpec::Kind::poisson;
    p.rate_per_s = num_of(member(j, path, "rate_per_s"), path + "/rate_per_s");
    if (p.rate_per_s <= 0) fail(path + "/rate_per_s", "must be > 0");
    if (j.contains("start_ms")) p.start = ms_of(j["start_ms"], path + "/start_ms");
  } else if (kind == "periodic") {
    p.kind = ProcessSpec::Kind::periodic;
    if (j.contains("start_ms")) p.start = ms_of(j["start_ms"], path + "/start_ms");
    p.period = ms_of(member(j, path, "period_ms"), path + "/period_ms");
    if (p.period <= 0) fail(path + "/period_ms", "must be > 0");
    if (j.contains("count")) p.count = uint_of(j["count"], path + "/count");
  } else if (kind == "schedule") {
    p.kind = ProcessSpec::Kind::schedule;
    const json& times = member(j, path, "times_ms");
    expect_array(times, path + "/times_ms");
    SimTime prev = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      SimTime t = ms_of(times[i], path + "/times_ms/" + std::to_string(i));
      if (t < prev) {
        fail(path + "/times_ms/" + std::to_string(i), "must be nondecreasing");
      }
      prev = t;
      p.times.push_back(t);
    }
  } else {
    fail(path + "/kind", "expected poisson, periodic, or schedule");
  }
  return p;
}

NamePickerSpec parse_names(const json& j, const std::string& path) {
  allow_keys(j, path,
             {"kind", "name", "prefix", "catalog", "alpha", "sequence",
              "producer", "offset"});
  NamePickerSpec n;
  std::string kind = str_of(member(j, path, "kind"), path + "/kind");
  if (kind == "fixed") {
    n.kind = NamePickerSpec::Kind::fixed;
    n.fixed = name_of(member(j, path, "name"), path + "/name");
  } else if (kind == "zipf") {
    n.kind = NamePickerSpec::Kind::zipf;
    n.prefix = name_of(member(j, path, "prefix"), path + "/prefix");
    n.catalog = uint_of(member(j, path, "catalog"), path + "/catalog");
    if (n.catalog == 0) fail(path + "/catalog", "must be >= 1");
    if (j.contains("alpha")) {
      n.alpha = num_of(j["alpha"], path + "/alpha");
      if (n.alpha < 0) fail(path + "/alpha", "must be >= 0");
    }
  } else if (kind == "sequence") {
    n.kind = NamePickerSpec::Kind::sequence;
    const json& seq = member(j, path, "sequence");
    expect_array(seq, path + "/sequence");
    if (seq.empty()) fail(path + "/sequence", "must be non-empty");
    for (std::size_t i = 0; i < seq.size(); ++i) {
      n.sequence.push_back(
          name_of(seq[i], path + "/sequence/" + std::to_string(i)));
    }
  } else if (kind == "unique") {
    n.kind = NamePickerSpec::Kind::unique;
    n.prefix = name_of(member(j, path, "prefix"), path + "/prefix");
  } else if (kind == "conversation") {
    n.kind = NamePickerSpec::Kind::conversation;
    n.conversation_producer =
        str_of(member(j, path, "producer"), path + "/producer");
    if (j.contains("offset")) n.offset = uint_of(j["offset"], path + "/offset");
  } else {
    fail(path + "/kind",
         "expected fixed, zipf, sequence, unique, or conversation");
  }
  return n;
}

ConsumerNode parse_consumer(const json& j, const std::string& path,
                            const std::string& name, SimTime default_timeout) {
  allow_keys(j, path, {"name", "type", "timeout_ms", "workloads", "overlay"});
  ConsumerNode cn;
  cn.name = name;
  cn.timeout = default_timeout;
  if (j.contains("timeout_ms")) {
    cn.timeout = ms_of(j["timeout_ms"], path + "/timeout_ms");
    if (cn.timeout <= 0) fail(path + "/timeout_ms", "must be > 0");
  }
  if (j.contains("overlay")) {
    const json& ov = j["overlay"];
    allow_keys(ov, path + "/overlay", {"ars"});
    OverlayConfig oc;
    const json& ars = member(ov, path + "/overlay", "ars");
    expect_array(ars, path + "/overlay/ars");
    for (std::size_t i = 0; i < ars.size(); ++i) {
      oc.ars.push_back(
          str_of(ars[i], path + "/overlay/ars/" + std::to_string(i)));
    }
    if (oc.ars.size() < 2) fail(path + "/overlay/ars", "need at least 2 relays");
    cn.overlay = std::move(oc);
  }
  if (j.contains("workloads")) {
    const json& ws = j["workloads"];
    expect_array(ws, path + "/workloads");
    for (std::size_t i = 0; i < ws.size(); ++i) {
      std::string wpath = path + "/workloads/" + std::to_string(i);
      allow_keys(ws[i], wpath, {"process", "names", "via_overlay"});
      WorkloadSpec w;
      w.process = parse_process(member(ws[i], wpath, "process"), wpath + "/process");
      w.names = parse_names(member(ws[i], wpath, "names"), wpath + "/names");
      if (ws[i].contains("via_overlay")) {
        w.via_overlay = bool_of(ws[i]["via_overlay"], wpath + "/via_overlay");
      }
      if (w.via_overlay && !cn.overlay) {
        fail(wpath + "/via_overlay", "consumer has no overlay config");
      }
      cn.workloads.push_back(std::move(w));
    }
  }
  return cn;
}

ProducerNode parse_producer(const json& j, const std::string& path,
                            const std::string& name) {
  allow_keys(j, path,
             {"name", "type", "prefix", "mode", "key_mode", "service_delay_ms",
              "slow_factor", "payload_size", "mark_no_cache", "catalog",
              "chunks", "conversation", "stale_at_ms"});
  ProducerNode pn;
  pn.name = name;
  ProducerSpec& s = pn.spec;
  s.prefix = name_of(member(j, path, "prefix"), path + "/prefix");
  if (j.contains("mode")) {
    s.mode = str_of(j["mode"], path + "/mode");
    if (s.mode != "open" && s.mode != "catalog" && s.mode != "conversation") {
      fail(path + "/mode", "expected open, catalog, or conversation");
    }
  }
  if (j.contains("key_mode")) {
    s.key_mode = str_of(j["key_mode"], path + "/key_mode");
    if (s.key_mode != "longlived" && s.key_mode != "ephemeral") {
      fail(path + "/key_mode", "expected longlived or ephemeral");
    }
  }
  if (j.contains("service_delay_ms")) {
    s.service_delay = ms_of(j["service_delay_ms"], path + "/service_delay_ms");
  }
  if (j.contains("slow_factor")) {
    s.slow_factor = num_of(j["slow_factor"], path + "/slow_factor");
    if (s.slow_factor <= 0) fail(path + "/slow_factor", "must be > 0");
  }
  if (j.contains("payload_size")) {
    s.payload_size = uint_of(j["payload_size"], path + "/payload_size");
    if (s.payload_size == 0) fail(path + "/payload_size", "must be >= 1");
  }
  if (j.contains("mark_no_cache")) {
    s.mark_no_cache = bool_of(j["mark_no_cache"], path + "/mark_no_cache");
  }
  if (j.contains("catalog")) {
    const json& cat = j["catalog"];
    expect_array(cat, path + "/catalog");
    for (std::size_t i = 0; i < cat.size(); ++i) {
      std::string ipath = path + "/catalog/" + std::to_string(i);
      Name item = name_of(cat[i], ipath);
      if (!s.prefix.is_prefix_of(item)) fail(ipath, "not under producer prefix");
      s.catalog.push_back(std::move(item));
    }
  }
  if (j.contains("chunks")) {
    s.chunks = static_cast<std::uint32_t>(uint_of(j["chunks"], path + "/chunks"));
    if (s.chunks == 0) fail(path + "/chunks", "must be >= 1");
  }
  if (j.contains("conversation")) {
    const json& c = j["conversation"];
    std::string cpath = path + "/conversation";
    allow_keys(c, cpath, {"start_ms", "period_ms", "count", "opaque"});
    if (c.contains("start_ms")) {
      s.conversation.start = ms_of(c["start_ms"], cpath + "/start_ms");
    }
    if (c.contains("period_ms")) {
      s.conversation.period = ms_of(c["period_ms"], cpath + "/period_ms");
      if (s.conversation.period <= 0) fail(cpath + "/period_ms", "must be > 0");
    }
    s.conversation.count = uint_of(member(c, cpath, "count"), cpath + "/count");
    if (c.contains("opaque")) {
      s.conversation.opaque = bool_of(c["opaque"], cpath + "/opaque");
    }
  }
  if (j.contains("stale_at_ms")) {
    s.stale_at = ms_of(j["stale_at_ms"], path + "/stale_at_ms");
  }
  if (s.mode == "catalog" && s.catalog.empty()) {
    fail(path + "/catalog", "catalog mode requires a non-empty catalog");
  }
  if (s.mode == "conversation" && !j.contains("conversation")) {
    fail(path, "conversation mode requires a conversation object");
  }
  return pn;
}

AttackSpec parse_attack(const json& j, const std::string& path) {
  allow_keys(j, path,
             {"id", "variant", "nodes", "router", "params", "start_ms",
              "stop_ms"});
  AttackSpec a;
  a.id = str_of(member(j, path, "id"), path + "/id");
  a.variant = str_of(member(j, path, "variant"), path + "/variant");
  if (j.contains("nodes")) {
    const json& ns = j["nodes"];
    expect_array(ns, path + "/nodes");
    for (std::size_t i = 0; i < ns.size(); ++i) {
      a.nodes.push_back(str_of(ns[i], path + "/nodes/" + std::to_string(i)));
    }
  }
  if (j.contains("router")) a.router = str_of(j["router"], path + "/router");
  if (j.contains("params")) {
    expect_object(j["params"], path + "/params");
    a.params = j["params"];
  }
  if (j.contains("start_ms")) a.start = ms_of(j["start_ms"], path + "/start_ms");
  if (j.contains("stop_ms")) {
    a.stop = ms_of(j["stop_ms"], path + "/stop_ms");
    if (a.stop <= a.start) fail(path + "/stop_ms", "must be > start_ms");
  }
  return a;
}

Model parse_model(const json& doc) {
  if (!doc.is_object()) fail("/", "scenario must be a JSON object");
  allow_keys(doc, "",
             {"id", "version", "description", "seed", "t_end_ms",
              "stats_warmup_ms", "consumer_timeout_ms", "nodes", "links",
              "fib", "attacks", "blacklist_broadcasts", "state_dumps"});
  Model m;
  m.id = str_of(member(doc, "", "id"), "/id");
  if (m.id.empty()) fail("/id", "must be non-empty");
  if (doc.contains("version") && uint_of(doc["version"], "/version") != 1) {
    fail("/version", "unsupported scenario version");
  }
  if (doc.contains("seed")) m.seed = uint_of(doc["seed"], "/seed");
  m.t_end = ms_of(member(doc, "", "t_end_ms"), "/t_end_ms");
  if (m.t_end <= 0) fail("/t_end_ms", "must be > 0");
  if (doc.contains("stats_warmup_ms")) {
    m.warmup = ms_of(doc["stats_warmup_ms"], "/stats_warmup_ms");
    if (m.warmup >= m.t_end) fail("/stats_warmup_ms", "must be < t_end_ms");
  }
  if (doc.contains("consumer_timeout_ms")) {
    m.consumer_timeout = ms_of(doc["consumer_timeout_ms"], "/consumer_timeout_ms");
    if (m.consumer_timeout <= 0) fail("/consumer_timeout_ms", "must be > 0");
  }

  // --- nodes ---
  const json& nodes = member(doc, "", "nodes");
  expect_array(nodes, "/nodes");
  if (nodes.empty()) fail("/nodes", "must be non-empty");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string path = "/nodes/" + std::to_string(i);
    expect_object(nodes[i], path);
    std::string name = str_of(member(nodes[i], path, "name"), path + "/name");
    if (name.empty() || name.find('/') != std::string::npos) {
      fail(path + "/name", "node names must be non-empty and slash-free");
    }
    if (m.kinds.count(name)) fail(path + "/name", "duplicate node name");
    std::string type = str_of(member(nodes[i], path, "type"), path + "/type");
    if (type == "router") {
      m.kinds[name] = NodeKind::router;
      m.routers.emplace(name, parse_router(nodes[i], path, name));
    } else if (type == "consumer") {
      m.kinds[name] = NodeKind::consumer;
      m.consumers.emplace(name,
                          parse_consumer(nodes[i], path, name, m.consumer_timeout));
    } else if (type == "producer") {
      m.kinds[name] = NodeKind::producer;
      m.producers.emplace(name, parse_producer(nodes[i], path, name));
    } else if (type == "ar") {
      allow_keys(nodes[i], path, {"name", "type"});
      m.kinds[name] = NodeKind::ar;
      m.ars.push_back(name);
    } else if (type == "attacker") {
      allow_keys(nodes[i], path, {"name", "type"});
      m.kinds[name] = NodeKind::attacker;
      m.attackers.push_back(name);
    } else {
      fail(path + "/type",
           "expected router, consumer, producer, ar, or attacker");
    }
    m.order.push_back(name);
  }

  auto known = [&](const std::string& n) { return m.kinds.count(n) > 0; };
  auto kind_of = [&](const std::string& n) { return m.kinds.at(n); };

  // --- links ---
  const json& links = member(doc, "", "links");
  expect_array(links, "/links");
  std::map<std::string, int> degree;
  std::set<std::pair<std::string, std::string>> adjacent;
  for (std::size_t i = 0; i < links.size(); ++i) {
    std::string path = "/links/" + std::to_string(i);
    allow_keys(links[i], path, {"a", "b", "delay_ms", "loss"});
    Model::LinkDef l;
    l.a = str_of(member(links[i], path, "a"), path + "/a");
    l.b = str_of(member(links[i], path, "b"), path + "/b");
    if (!known(l.a)) fail(path + "/a", "unknown node: " + l.a);
    if (!known(l.b)) fail(path + "/b", "unknown node: " + l.b);
    if (l.a == l.b) fail(path, "link endpoints must differ");
    l.delay = ms_of(member(links[i], path, "delay_ms"), path + "/delay_ms");
    if (links[i].contains("loss")) {
      l.loss = num_of(links[i]["loss"], path + "/loss");
      if (l.loss < 0 || l.loss > 1) fail(path + "/loss", "must be in [0, 1]");
    }
    degree[l.a]++;
    degree[l.b]++;
    adjacent.insert({l.a, l.b});
    adjacent.insert({l.b, l.a});
    m.links.push_back(std::move(l));
  }
  for (const auto& name : m.order) {
    if (kind_of(name) == NodeKind::router) continue;
    if (degree[name] != 1) {
      fail("/links", "endpoint " + name + " needs exactly one link, has " +
                         std::to_string(degree[name]));
    }
  }

  // --- fib ---
  if (doc.contains("fib")) {
    const json& fib = doc["fib"];
    expect_array(fib, "/fib");
    for (std::size_t i = 0; i < fib.size(); ++i) {
      std::string path = "/fib/" + std::to_string(i);
      allow_keys(fib[i], path, {"router", "prefix", "next_hop"});
      Model::FibDef f;
      f.router = str_of(member(fib[i], path, "router"), path + "/router");
      if (!known(f.router) || kind_of(f.router) != NodeKind::router) {
        fail(path + "/router", "not a router: " + f.router);
      }
      f.prefix = name_of(member(fib[i], path, "prefix"), path + "/prefix");
      f.next_hop = str_of(member(fib[i], path, "next_hop"), path + "/next_hop");
      if (!known(f.next_hop)) fail(path + "/next_hop", "unknown node: " + f.next_hop);
      if (!adjacent.count({f.router, f.next_hop})) {
        fail(path + "/next_hop", "no link between " + f.router + " and " + f.next_hop);
      }
      m.fib.push_back(std::move(f));
    }
  }

  // --- cross-checks on consumers and routers ---
  for (const auto& [name, cn] : m.consumers) {
    if (cn.overlay) {
      for (const std::string& ar : cn.overlay->ars) {
        if (!known(ar) || kind_of(ar) != NodeKind::ar) {
          fail("/nodes", "consumer " + name + " overlay relay is not an ar: " + ar);
        }
      }
    }
    for (const auto& w : cn.workloads) {
      if (w.names.kind == NamePickerSpec::Kind::conversation) {
        const std::string& p = w.names.conversation_producer;
        auto it = m.producers.find(p);
        if (it == m.producers.end()) {
          fail("/nodes", "consumer " + name + " follows unknown producer: " + p);
        }
        if (it->second.spec.mode != "conversation") {
          fail("/nodes", "consumer " + name + " follows non-conversation producer: " + p);
        }
      }
    }
  }
  for (const auto& [name, rn] : m.routers) {
    for (const auto& [pname, producer] : rn.preload) {
      auto it = m.producers.find(producer);
      if (it == m.producers.end()) {
        fail("/nodes", "router " + name + " preload from unknown producer: " + producer);
      }
      if (!it->second.spec.prefix.is_prefix_of(pname)) {
        fail("/nodes", "router " + name + " preload " + pname.render() +
                           " outside producer prefix");
      }
    }
  }

  // --- attacks ---
  if (doc.contains("attacks")) {
    const json& attacks = doc["attacks"];
    expect_array(attacks, "/attacks");
    std::set<std::string> ids;
    std::set<std::string> used_bots;
    for (std::size_t i = 0; i < attacks.size(); ++i) {
      std::string path = "/attacks/" + std::to_string(i);
      AttackSpec a = parse_attack(attacks[i], path);
      if (!ids.insert(a.id).second) fail(path + "/id", "duplicate attack id");
      if (a.variant == "ContentPoisoning") {
        if (!a.nodes.empty()) {
          fail(path + "/nodes", "ContentPoisoning runs on a router, not nodes");
        }
        if (a.router.empty()) fail(path, "missing required key 'router'");
        if (!known(a.router) || kind_of(a.router) != NodeKind::router) {
          fail(path + "/router", "not a router: " + a.router);
        }
        try {
          RouterConfig scratch;
          KeyRegistry scratch_reg;
          configure_poisoning(scratch, a, scratch_reg);
        } catch (const std::exception& e) {
          fail(path + "/params", e.what());
        }
      } else {
        if (a.nodes.empty()) fail(path + "/nodes", "attack needs at least one node");
        bool single = a.variant == "Enumerate" ||
                      a.variant == "TimingSequential" ||
                      a.variant == "TimingParallel" ||
                      a.variant == "CloneConversation";
        if (single && a.nodes.size() != 1) {
          fail(path + "/nodes", a.variant + " takes exactly one node");
        }
        for (const std::string& n : a.nodes) {
          if (!known(n) || kind_of(n) != NodeKind::attacker) {
            fail(path + "/nodes", "not an attacker node: " + n);
          }
          if (!used_bots.insert(n).second) {
            fail(path + "/nodes", "node " + n + " already used by another attack");
          }
          try {
            make_attack_behavior(a, n);
          } catch (const std::exception& e) {
            fail(path + "/params", e.what());
          }
        }
      }
      m.attacks.push_back(std::move(a));
    }
  }
  {
    std::set<std::string> used;
    for (const auto& a : m.attacks) {
      for (const auto& n : a.nodes) used.insert(n);
    }
    for (const auto& n : m.attackers) {
      if (!used.count(n)) {
        fail("/nodes", "attacker " + n + " is not referenced by any attack");
      }
    }
  }

  // --- blacklist broadcasts and state dumps ---
  if (doc.contains("blacklist_broadcasts")) {
    const json& bb = doc["blacklist_broadcasts"];
    expect_array(bb, "/blacklist_broadcasts");
    for (std::size_t i = 0; i < bb.size(); ++i) {
      std::string path = "/blacklist_broadcasts/" + std::to_string(i);
      allow_keys(bb[i], path, {"at_ms", "origin", "names"});
      Model::Broadcast b;
      b.at = ms_of(member(bb[i], path, "at_ms"), path + "/at_ms");
      b.origin = str_of(member(bb[i], path, "origin"), path + "/origin");
      if (!known(b.origin) || kind_of(b.origin) != NodeKind::router) {
        fail(path + "/origin", "not a router: " + b.origin);
      }
      const json& names = member(bb[i], path, "names");
      expect_array(names, path + "/names");
      if (names.empty()) fail(path + "/names", "must be non-empty");
      for (std::size_t k = 0; k < names.size(); ++k) {
        b.names.push_back(name_of(names[k], path + "/names/" + std::to_string(k)));
      }
      m.broadcasts.push_back(std::move(b));
    }
  }
  if (doc.contains("state_dumps")) {
    const json& sd = doc["state_dumps"];
    expect_array(sd, "/state_dumps");
    for (std::size_t i = 0; i < sd.size(); ++i) {
      std::string path = "/state_dumps/" + std::to_string(i);
      allow_keys(sd[i], path, {"at_ms", "node"});
      Model::Dump d;
      d.at = ms_of(member(sd[i], path, "at_ms"), path + "/at_ms");
      d.node = str_of(member(sd[i], path, "node"), path + "/node");
      if (!known(d.node) || kind_of(d.node) != NodeKind::router) {
        fail(path + "/node", "not a router: " + d.node);
      }
      m.dumps.push_back(std::move(d));
    }
  }
  return m;
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& doc) {
  Model m = parse_model(doc);
  Scenario sc;
  sc.id = m.id;
  sc.default_seed = m.seed;
  sc.t_end = m.t_end;
  sc.stats_warmup = m.warmup;
  sc.raw = doc;
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, "cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path, std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

std::vector<AttackSpec> scenario_attacks(const Scenario& sc) {
  return parse_model(sc.raw).attacks;
}

std::unique_ptr<Engine> build_engine(const Scenario& sc, std::uint64_t seed) {
  Model m = parse_model(sc.raw);
  auto e = std::make_unique<Engine>(seed, m.id);
  e->set_stats_warmup(m.warmup);

  // Long-lived keys, in document order for determinism.
  std::map<std::string, KeyId> keys;
  for (const auto& name : m.order) {
    NodeKind k = m.kinds.at(name);
    if (k == NodeKind::producer || k == NodeKind::ar) {
      keys[name] = e->registry().register_key(name);
    }
  }

  std::map<std::string, const AttackSpec*> attack_of;
  for (const auto& a : m.attacks) {
    for (const auto& n : a.nodes) attack_of[n] = &a;
  }

  for (const auto& name : m.order) {
    switch (m.kinds.at(name)) {
      case NodeKind::router: {
        RouterConfig cfg = m.routers.at(name).cfg;
        for (const auto& a : m.attacks) {
          if (a.variant == "ContentPoisoning" && a.router == name) {
            configure_poisoning(cfg, a, e->registry());
          }
        }
        e->add_router(name, cfg);
        break;
      }
      case NodeKind::consumer: {
        const ConsumerNode& cn = m.consumers.at(name);
        e->add_endpoint(name, NodeKind::consumer,
                        std::make_unique<ConsumerBehavior>(
                            name, cn.workloads, cn.timeout, cn.overlay));
        break;
      }
      case NodeKind::producer: {
        const ProducerNode& pn = m.producers.at(name);
        e->add_endpoint(name, NodeKind::producer,
                        std::make_unique<ProducerBehavior>(name, pn.spec,
                                                           keys.at(name)));
        break;
      }
      case NodeKind::ar:
        e->add_endpoint(name, NodeKind::ar,
                        std::make_unique<ArBehavior>(name, keys.at(name)));
        break;
      case NodeKind::attacker:
        e->add_endpoint(name, NodeKind::attacker,
                        make_attack_behavior(*attack_of.at(name), name));
        break;
    }
  }

  for (const auto& l : m.links) e->connect(l.a, l.b, l.delay, l.loss);
  for (const auto& f : m.fib) e->add_fib(f.router, f.prefix, f.next_hop);

  // Preseeded cache entries, minted exactly as their producer would.
  for (const auto& name : m.order) {
    if (m.kinds.at(name) != NodeKind::router) continue;
    const RouterNode& rn = m.routers.at(name);
    Router& r = e->router(name);
    for (const auto& [pname, producer] : rn.preload) {
      const ProducerSpec& ps = m.producers.at(producer).spec;
      ContentObject obj = synth_object(e->registry(), keys.at(producer), pname,
                                       ps.payload_size, false);
      r.cs().insert(obj, 0, r.cache_rng());
    }
  }

  // Freshness oracle for revalidation: producer-declared staleness cutoffs.
  std::vector<std::pair<Name, SimTime>> stale;
  for (const auto& [pname, pn] : m.producers) {
    if (pn.spec.stale_at) stale.emplace_back(pn.spec.prefix, *pn.spec.stale_at);
  }
  if (!stale.empty()) {
    e->set_staleness_oracle(
        [stale](const Name& n, SimTime inserted, SimTime) {
          for (const auto& [prefix, cutoff] : stale) {
            if (prefix.is_prefix_of(n) && inserted < cutoff) return true;
          }
          return false;
        });
  }

  for (const auto& b : m.broadcasts) e->schedule_blacklist(b.at, b.names, b.origin);
  for (const auto& d : m.dumps) e->schedule_state_dump(d.at, d.node);
  return e;
}

RunResult run_scenario(const Scenario& sc, std::uint64_t seed,
                       const std::string& out_dir, bool trace) {
  auto engine = build_engine(sc, seed);
  std::ofstream trace_os;
  if (trace && !out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    trace_os.open(out_dir + "/trace.log");
    engine->set_trace(&trace_os);
  }
  engine->run_until(sc.t_end);
  for (const auto& a : parse_model(sc.raw).attacks) {
    if (a.variant == "ContentPoisoning") append_poisoning_rows(*engine, a);
  }
  RunResult result{engine->collect_metrics(), engine->attack_rows()};
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream ms(out_dir + "/metrics.csv");
    write_metrics_csv(ms, sc.id, seed, result.metrics);
    std::ofstream as(out_dir + "/attack_results.csv");
    write_attack_csv(as, sc.id, seed, result.attack_rows);
  }
  return result;
}

void run_sweep(const Scenario& base, const nlohmann::json& grid,
               std::uint64_t seed_lo, std::uint64_t seed_hi,
               const std::string& out_dir) {
  if (!grid.is_object() || grid.empty()) {
    throw ScenarioError("/", "grid must be a non-empty JSON object");
  }
  if (seed_hi < seed_lo) throw ScenarioError("/", "empty seed range");

  struct Axis {
    std::string pointer;
    std::vector<json> values;
  };
  std::vector<Axis> axes;
  for (const auto& item : grid.items()) {
    const std::string& ptr = item.key();
    json::json_pointer jp;
    try {
      jp = json::json_pointer(ptr);
    } catch (const json::parse_error&) {
      throw ScenarioError(ptr, "not a JSON pointer");
    }
    if (!base.raw.contains(jp)) {
      throw ScenarioError(ptr, "path does not exist in the scenario");
    }
    if (!item.value().is_array() || item.value().empty()) {
      throw ScenarioError(ptr, "grid axis must be a non-empty array");
    }
    Axis ax;
    ax.pointer = ptr;
    for (const auto& v : item.value()) {
      if (!v.is_primitive() || v.is_null()) {
        throw ScenarioError(ptr, "grid values must be scalars");
      }
      ax.values.push_back(v);
    }
    axes.push_back(std::move(ax));
  }

  std::filesystem::create_directories(out_dir);
  std::ofstream ms(out_dir + "/sweep_metrics.csv");
  std::ofstream as(out_dir + "/sweep_attacks.csv");
  ms << "scenario_id,seed,cell,entity,metric,value\n";
  as << "scenario_id,seed,cell,attack_id,variant,param_hash,metric,value\n";

  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    json doc = base.raw;
    std::string cell;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const json& v = axes[i].values[idx[i]];
      doc[json::json_pointer(axes[i].pointer)] = v;
      if (i > 0) cell += ";";
      cell += axes[i].pointer + "=" +
              (v.is_string() ? v.get<std::string>() : v.dump());
    }
    Scenario sc = parse_scenario(doc);
    for (std::uint64_t seed = seed_lo; seed <= seed_hi; ++seed) {
      auto engine = build_engine(sc, seed);
      engine->run_until(sc.t_end);
      for (const auto& a : parse_model(doc).attacks) {
        if (a.variant == "ContentPoisoning") append_poisoning_rows(*engine, a);
      }
      MetricsTable table = engine->collect_metrics();
      for (const auto& row : table.rows()) {
        ms << sc.id << "," << seed << "," << cell << "," << row.entity << ","
           << row.metric << "," << format_value(row.value) << "\n";
      }
      for (const auto& row : engine->attack_rows()) {
        as << sc.id << "," << seed << "," << cell << "," << row.attack_id << ","
           << row.variant << "," << row.param_hash << "," << row.metric << ","
           << format_value(row.value) << "\n";
      }
    }
    // odometer increment over the grid
    std::size_t k = 0;
    for (; k < axes.size(); ++k) {
      if (++idx[k] < axes[k].values.size()) break;
      idx[k] = 0;
    }
    if (k == axes.size()) break;
  }
}

}  // namespace ccnsim
