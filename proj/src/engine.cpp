#include "ccnsim/engine.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ccnsim {

namespace {
constexpr std::uint64_t kBlacklistApply = 1ULL << 32;
}

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::router: return "router";
    case NodeKind::consumer: return "consumer";
    case NodeKind::producer: return "producer";
    case NodeKind::attacker: return "attacker";
    case NodeKind::ar: return "ar";
  }
  return "?";
}

Engine::Engine(std::uint64_t seed, std::string scenario_id)
    : seed_(seed), scenario_id_(std::move(scenario_id)) {}

Engine::~Engine() = default;

int Engine::add_router(const std::string& name, const RouterConfig& cfg) {
  if (node_index_.count(name)) throw std::invalid_argument("duplicate node " + name);
  auto node = std::make_unique<Node>();
  node->id = static_cast<int>(nodes_.size());
  node->name = name;
  node->kind = NodeKind::router;
  node->router = std::make_unique<Router>(name, cfg, &registry_, seed_);
  node_index_[name] = node->id;
  nodes_.push_back(std::move(node));
  return nodes_.back()->id;
}

int Engine::add_endpoint(const std::string& name, NodeKind kind,
                         std::unique_ptr<NodeBehavior> behavior) {
  if (node_index_.count(name)) throw std::invalid_argument("duplicate node " + name);
  auto node = std::make_unique<Node>();
  node->id = static_cast<int>(nodes_.size());
  node->name = name;
  node->kind = kind;
  node->behavior = std::move(behavior);
  node_index_[name] = node->id;
  nodes_.push_back(std::move(node));
  return nodes_.back()->id;
}

int Engine::connect(const std::string& a, const std::string& b, SimTime delay,
                    double loss) {
  if (delay < 0) throw std::invalid_argument("negative link delay");
  Node& na = node(node_id(a));
  Node& nb = node(node_id(b));
  Link link;
  link.a = na.id;
  link.b = nb.id;
  link.delay = delay;
  link.loss = loss;
  link.face_a = static_cast<int>(na.faces.size());
  link.face_b = static_cast<int>(nb.faces.size());
  int link_id = static_cast<int>(links_.size());
  na.faces.push_back(FaceRef{link_id, nb.id, link.face_b});
  nb.faces.push_back(FaceRef{link_id, na.id, link.face_a});
  links_.push_back(link);
  return link_id;
}

void Engine::add_fib(const std::string& router_name, const Name& prefix,
                     const std::string& next_hop) {
  Node& rn = node(node_id(router_name));
  if (rn.kind != NodeKind::router) {
    throw std::invalid_argument(router_name + " is not a router");
  }
  int hop = node_id(next_hop);
  for (std::size_t f = 0; f < rn.faces.size(); ++f) {
    if (rn.faces[f].peer == hop) {
      rn.router->fib().add(prefix, static_cast<int>(f));
      return;
    }
  }
  throw std::invalid_argument("fib next hop " + next_hop + " is not adjacent to " +
                              router_name);
}

int Engine::node_id(const std::string& name) const {
  auto it = node_index_.find(name);
  if (it == node_index_.end()) throw std::out_of_range("unknown node " + name);
  return it->second;
}

Router& Engine::router(const std::string& name) {
  Node& n = node(node_id(name));
  if (!n.router) throw std::invalid_argument(name + " is not a router");
  return *n.router;
}

NodeBehavior* Engine::behavior(const std::string& node_name) {
  return node(node_id(node_name)).behavior.get();
}

Rng& Engine::rng(const std::string& stream) {
  auto it = rngs_.find(stream);
  if (it == rngs_.end()) {
    it = rngs_.emplace(stream, substream(seed_, stream)).first;
  }
  return it->second;
}

void Engine::schedule(SimTime at, EventPayload payload) {
  if (at < now_) throw std::logic_error("scheduling into the past");
  queue_.push(Event{at, next_seq_++, std::move(payload)});
}

void Engine::schedule_behavior_timer(int node_id_, SimTime delay,
                                     std::uint64_t tag) {
  schedule(now_ + delay, EvTimer{node_id_, TimerKind::behavior, tag});
}

void Engine::schedule_state_dump(SimTime at, const std::string& node_name) {
  schedule(at, EvTimer{node_id(node_name), TimerKind::state_dump, 0});
}

void Engine::schedule_blacklist(SimTime at, std::vector<Name> names,
                                const std::string& origin) {
  int origin_id = node_id(origin);
  broadcasts_.push_back(Broadcast{std::move(names), origin});
  schedule(at, EvTimer{origin_id, TimerKind::blacklist,
                       broadcasts_.size() - 1});
}

void Engine::log_request(int node_id_, const Name& name) {
  request_log_.push_back(RequestRecord{now_, node_id_, name});
}

void Engine::report_attack(const std::string& attack_id,
                           const std::string& variant,
                           const std::string& param_hash,
                           const std::string& metric, double value) {
  attack_rows_.push_back(AttackRow{attack_id, variant, param_hash, metric, value});
}

void Engine::trace_record(const std::string& node_name, const std::string& kind,
                          const std::string& name, const std::string& face,
                          const std::string& outcome) {
  if (!trace_) return;
  *trace_ << now_ << ' ' << node_name << ' ' << kind << ' '
          << (name.empty() ? "-" : name) << ' ' << (face.empty() ? "-" : face)
          << ' ' << (outcome.empty() ? "-" : outcome) << '\n';
}

void Engine::send_via_face(int node_id_, int face, const Interest& interest,
                           SimTime extra_delay) {
  const Node& n = node(node_id_);
  const FaceRef& ref = n.faces.at(static_cast<std::size_t>(face));
  const Link& link = links_.at(static_cast<std::size_t>(ref.link));
  if (link.loss > 0 &&
      rng("loss/" + std::to_string(ref.link)).chance(link.loss)) {
    trace_record(n.name, "interest", interest.name.render(),
                 std::to_string(face), "lost");
    return;
  }
  schedule(now_ + extra_delay + link.delay,
           EvInterest{ref.peer, ref.peer_face, interest});
}

void Engine::send_data_via_face(int node_id_, int face,
                                const ContentObject& object,
                                SimTime extra_delay) {
  const Node& n = node(node_id_);
  const FaceRef& ref = n.faces.at(static_cast<std::size_t>(face));
  const Link& link = links_.at(static_cast<std::size_t>(ref.link));
  if (link.loss > 0 &&
      rng("loss/" + std::to_string(ref.link)).chance(link.loss)) {
    trace_record(n.name, "data", object.name.render(), std::to_string(face),
                 "lost");
    return;
  }
  schedule(now_ + extra_delay + link.delay,
           EvData{ref.peer, ref.peer_face, object});
}

void Engine::send_interest(int node_id_, const Interest& interest) {
  const Node& n = node(node_id_);
  if (n.faces.empty()) {
    throw std::logic_error("node " + n.name + " has no link");
  }
  trace_record(n.name, "interest", interest.name.render(), "0", "sent");
  send_via_face(node_id_, 0, interest, 0);
}

void Engine::send_data(int node_id_, const ContentObject& object) {
  const Node& n = node(node_id_);
  if (n.faces.empty()) {
    throw std::logic_error("node " + n.name + " has no link");
  }
  trace_record(n.name, "data", object.name.render(), "0", "sent");
  send_data_via_face(node_id_, 0, object, 0);
}

void Engine::apply_actions(int node_id_, const std::vector<Action>& actions) {
  for (const Action& action : actions) {
    if (const auto* send = std::get_if<SendData>(&action)) {
      send_data_via_face(node_id_, send->face, send->object, send->delay);
    } else if (const auto* fwd = std::get_if<ForwardInterest>(&action)) {
      send_via_face(node_id_, fwd->face, fwd->interest, fwd->delay);
    }
  }
}

void Engine::handle_interest(const EvInterest& ev) {
  Node& n = node(ev.node);
  if (n.kind == NodeKind::router) {
    InterestResult result = n.router->on_interest(ev.interest, ev.face, now_);
    trace_record(n.name, "interest", ev.interest.name.render(),
                 std::to_string(ev.face), to_string(result.outcome));
    apply_actions(ev.node, result.actions);
    if (result.outcome == Outcome::forwarded) {
      schedule(now_ + n.router->pit().timeout(),
               EvTimer{ev.node, TimerKind::pit_expire, 0});
    }
    return;
  }
  if (n.behavior) n.behavior->on_interest(*this, ev.interest, now_);
}

void Engine::handle_data(const EvData& ev) {
  Node& n = node(ev.node);
  if (n.kind == NodeKind::router) {
    DataResult result = n.router->on_data(ev.object, ev.face, now_);
    trace_record(n.name, "data", ev.object.name.render(),
                 std::to_string(ev.face), to_string(result.outcome));
    apply_actions(ev.node, result.actions);
    return;
  }
  if (n.behavior) n.behavior->on_data(*this, ev.object, now_);
}

std::map<int, SimTime> Engine::control_distances(int origin) const {
  std::map<int, SimTime> dist;
  dist[origin] = 0;
  // Dijkstra over link delays; graphs here are tiny.
  std::priority_queue<std::pair<SimTime, int>,
                      std::vector<std::pair<SimTime, int>>, std::greater<>>
      frontier;
  frontier.push({0, origin});
  while (!frontier.empty()) {
    auto [d, id] = frontier.top();
    frontier.pop();
    if (d > dist[id]) continue;
    for (const FaceRef& ref : node(id).faces) {
      SimTime nd = d + links_[static_cast<std::size_t>(ref.link)].delay;
      auto it = dist.find(ref.peer);
      if (it == dist.end() || nd < it->second) {
        dist[ref.peer] = nd;
        frontier.push({nd, ref.peer});
      }
    }
  }
  return dist;
}

void Engine::handle_timer(const EvTimer& ev) {
  switch (ev.kind) {
    case TimerKind::pit_expire: {
      Node& n = node(ev.node);
      std::size_t count = n.router->pit_expire(now_);
      if (count > 0) {
        trace_record(n.name, "timer", "", "",
                     "pit_expired=" + std::to_string(count));
      }
      break;
    }
    case TimerKind::detector: {
      Node& n = node(ev.node);
      emit_flags(ev.node, n.router->run_detectors(now_));
      schedule(now_ + n.router->config().detector->check_interval,
               EvTimer{ev.node, TimerKind::detector, 0});
      break;
    }
    case TimerKind::revalidate: {
      Node& n = node(ev.node);
      std::size_t removed = 0;
      if (staleness_) {
        removed = n.router->revalidate(now_, [&](const Name& name,
                                                 const CsEntry& entry) {
          return staleness_(name, entry.insert_time, now_);
        });
      } else {
        removed = n.router->revalidate(
            now_, [](const Name&, const CsEntry&) { return false; });
      }
      trace_record(n.name, "timer", "", "",
                   "revalidated_removed=" + std::to_string(removed));
      schedule(now_ + *n.router->config().revalidate_interval,
               EvTimer{ev.node, TimerKind::revalidate, 0});
      break;
    }
    case TimerKind::state_dump: {
      Node& n = node(ev.node);
      trace_record(n.name, "state", "", "", n.router->dump_state(now_));
      break;
    }
    case TimerKind::blacklist: {
      if (ev.tag & kBlacklistApply) {
        std::size_t idx = ev.tag & ~kBlacklistApply;
        Node& n = node(ev.node);
        std::size_t removed =
            n.router->apply_blacklist(broadcasts_.at(idx).names, now_);
        blacklist_removed_ += removed;
        trace_record(n.name, "timer", "", "",
                     "blacklist_removed=" + std::to_string(removed));
      } else {
        // Hub fire: fan the list out to every router over the topology.
        const Broadcast& bc = broadcasts_.at(ev.tag);
        auto dist = control_distances(ev.node);
        for (const auto& np : nodes_) {
          if (np->kind != NodeKind::router) continue;
          ++blacklist_messages_;
          auto it = dist.find(np->id);
          SimTime d = it == dist.end() ? 0 : it->second;
          schedule(now_ + d, EvTimer{np->id, TimerKind::blacklist,
                                     ev.tag | kBlacklistApply});
        }
        trace_record(node(ev.node).name, "timer", "", "",
                     "blacklist_broadcast=" + std::to_string(bc.names.size()));
      }
      break;
    }
    case TimerKind::behavior: {
      Node& n = node(ev.node);
      if (n.behavior) n.behavior->on_timer(*this, ev.tag, now_);
      break;
    }
    case TimerKind::warmup:
      run_warmup_reset();
      break;
  }
}

void Engine::emit_flags(int node_id_, const std::vector<Flag>& flags) {
  const Node& n = node(node_id_);
  for (const Flag& flag : flags) {
    trace_record(n.name, "flag", flag.name ? flag.name->render() : "",
                 flag.face >= 0 ? std::to_string(flag.face) : "",
                 flag.detector);
  }
}

void Engine::run_warmup_reset() {
  for (auto& np : nodes_) {
    if (np->router) {
      np->router->begin_stats(now_);
      np->router->cs().evictions().clear();
    }
  }
}

void Engine::audit_invariants() {
  for (auto& np : nodes_) {
    if (!np->router) continue;
    const Router& r = *np->router;
    if (r.cs().size() > r.cs().capacity() && r.cs().capacity() > 0) {
      throw std::logic_error("cs over capacity at " + np->name);
    }
    if (r.pit().size() > r.config().pit_capacity) {
      throw std::logic_error("pit over capacity at " + np->name);
    }
  }
  if (events_processed_ % 256 == 0) deep_audit();
}

void Engine::deep_audit() {
  for (auto& np : nodes_) {
    if (!np->router) continue;
    const Router& r = *np->router;
    if (!r.config().honor_no_cache) continue;
    for (const auto& [name, entry] : r.cs().entries()) {
      if (entry.object.no_cache) {
        throw std::logic_error("no_cache object cached at " + np->name + ": " +
                               name.render());
      }
    }
  }
}

void Engine::dispatch(const Event& ev) {
  if (const auto* i = std::get_if<EvInterest>(&ev.payload)) {
    handle_interest(*i);
  } else if (const auto* d = std::get_if<EvData>(&ev.payload)) {
    handle_data(*d);
  } else if (const auto* t = std::get_if<EvTimer>(&ev.payload)) {
    handle_timer(*t);
  }
}

void Engine::run_until(SimTime t_end) {
  if (!started_) {
    started_ = true;
    for (auto& np : nodes_) {
      if (np->kind != NodeKind::router && np->faces.empty()) {
        throw std::logic_error("endpoint " + np->name + " has no link");
      }
      if (np->router) {
        np->router->begin_stats(0);
        if (np->router->config().detector) {
          schedule(np->router->config().detector->check_interval,
                   EvTimer{np->id, TimerKind::detector, 0});
        }
        if (np->router->config().revalidate_interval) {
          schedule(*np->router->config().revalidate_interval,
                   EvTimer{np->id, TimerKind::revalidate, 0});
        }
      }
    }
    if (stats_warmup_ > 0) {
      schedule(stats_warmup_, EvTimer{0, TimerKind::warmup, 0});
    }
    for (auto& np : nodes_) {
      if (np->behavior) np->behavior->start(*this);
    }
  }

  while (!queue_.empty() && queue_.top().time <= t_end) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    dispatch(ev);
    ++events_processed_;
    if (audit_) audit_invariants();
  }
  now_ = t_end;
  end_time_ = t_end;
  if (audit_) deep_audit();
  for (auto& np : nodes_) {
    if (np->router) np->router->finalize_stats(t_end);
  }
  for (auto& np : nodes_) {
    if (np->behavior) np->behavior->finish(*this);
  }
}

MetricsTable Engine::collect_metrics() {
  MetricsTable table;
  for (auto& np : nodes_) {
    if (np->router) {
      const Router& r = *np->router;
      const RouterCounters& c = r.counters();
      const std::string& e = np->name;
      table.add(e, "interests", static_cast<double>(c.interests));
      table.add(e, "cs_lookups", static_cast<double>(c.cs_lookups));
      table.add(e, "cs_hits", static_cast<double>(c.cs_hits));
      if (c.cs_lookups > 0) {
        table.add(e, "hit_rate", static_cast<double>(c.cs_hits) /
                                     static_cast<double>(c.cs_lookups));
      }
      table.add(e, "cs_size", static_cast<double>(r.cs().size()));
      table.add(e, "cache_insertions", static_cast<double>(c.cache_insertions));
      table.add(e, "cache_evictions", static_cast<double>(c.cache_evictions));
      table.add(e, "forwarded", static_cast<double>(c.forwarded));
      table.add(e, "aggregated", static_cast<double>(c.aggregated));
      table.add(e, "pit_mean", r.pit().mean_occupancy());
      table.add(e, "pit_peak", static_cast<double>(r.pit().peak_occupancy()));
      table.add(e, "pit_expired", static_cast<double>(r.pit().expired_total()));
      table.add(e, "drop_dup_nonce", static_cast<double>(c.drop_dup_nonce));
      table.add(e, "drop_domain_limit",
                static_cast<double>(c.drop_domain_limit));
      table.add(e, "drop_pit_overflow",
                static_cast<double>(c.drop_pit_overflow));
      table.add(e, "drop_no_route", static_cast<double>(c.drop_no_route));
      table.add(e, "drop_face_blocked",
                static_cast<double>(c.drop_face_blocked));
      table.add(e, "drop_chunk_blocked",
                static_cast<double>(c.drop_chunk_blocked));
      table.add(e, "non_invasive_misses",
                static_cast<double>(c.non_invasive_misses));
      table.add(e, "exclude_ignored", static_cast<double>(c.exclude_ignored));
      table.add(e, "data_in", static_cast<double>(c.data_in));
      table.add(e, "data_faces", static_cast<double>(c.data_faces));
      table.add(e, "unsolicited", static_cast<double>(c.drop_unsolicited));
      table.add(e, "poison_blocked", static_cast<double>(c.poison_blocked));
      table.add(e, "poison_substituted",
                static_cast<double>(c.poison_substituted));
      table.add(e, "verify_calls", static_cast<double>(c.verify_calls));
      table.add(e, "verify_cpu_us", static_cast<double>(c.verify_cpu));
      if (c.data_in > 0) {
        table.add(e, "mean_data_proc_us",
                  static_cast<double>(c.data_proc_delay) /
                      static_cast<double>(c.data_in));
      }
      table.add(e, "blacklist_removed",
                static_cast<double>(c.blacklist_removed));
      table.add(e, "revalidations", static_cast<double>(c.revalidations));
      table.add(e, "revalidate_removed",
                static_cast<double>(c.revalidate_removed));
      table.add(e, "flags_raised", static_cast<double>(c.flags_raised));
      const auto& ev = r.cs().evictions();
      if (!ev.empty()) {
        double res = 0, idle = 0;
        for (const auto& rec : ev) {
          res += static_cast<double>(rec.residency);
          idle += static_cast<double>(rec.idle);
        }
        table.add(e, "evict_count", static_cast<double>(ev.size()));
        table.add(e, "evict_residency_mean_ms",
                  res / static_cast<double>(ev.size()) / 1000.0);
        table.add(e, "evict_idle_mean_ms",
                  idle / static_cast<double>(ev.size()) / 1000.0);
      }
    } else if (np->behavior) {
      np->behavior->report(*this, table);
    }
  }
  table.add("engine", "events", static_cast<double>(events_processed_));
  if (!broadcasts_.empty()) {
    table.add("blacklist", "messages", static_cast<double>(blacklist_messages_));
    table.add("blacklist", "removed", static_cast<double>(blacklist_removed_));
  }
  return table;
}

}  // namespace ccnsim
