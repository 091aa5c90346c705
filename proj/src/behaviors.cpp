#include "ccnsim/behaviors.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace ccnsim {
namespace {

constexpr std::uint64_t kTickTimer = 1;
constexpr std::uint64_t kTimeoutTimer = 2;
constexpr std::uint64_t kServiceTimer = 3;

std::uint64_t tag(std::uint64_t kind, std::uint64_t value) {
  return (kind << 56) | value;
}
std::uint64_t tag_kind(std::uint64_t t) { return t >> 56; }
std::uint64_t tag_value(std::uint64_t t) { return t & ((1ULL << 56) - 1); }

Bytes to_bytes(const std::string& s) {
  return Bytes(s.begin(), s.end());
}
std::string to_string_bytes(const Bytes& b) {
  return std::string(b.begin(), b.end());
}

/// Deterministic payload derived from the name: content identity, not
/// random data, so reruns and re-fetches agree byte for byte.
Bytes synth_payload(const Name& name, std::uint64_t declared_size) {
  std::uint64_t h = fnv1a64(name.render());
  std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(declared_size, 64));
  Bytes out(len);
  std::uint64_t state = h;
  for (std::size_t i = 0; i < len; ++i) {
    if (i % 8 == 0) state = splitmix64(state);
    out[i] = static_cast<std::uint8_t>(state >> ((i % 8) * 8));
  }
  return out;
}

}  // namespace

ContentObject synth_object(const KeyRegistry& registry, KeyId key,
                           const Name& name, std::uint64_t declared_size,
                           bool no_cache) {
  ContentObject obj;
  obj.name = name;
  obj.payload = synth_payload(name, declared_size);
  obj.payload_size = declared_size;
  obj.signature = registry.sign(key, name, obj.payload);
  obj.no_cache = no_cache;
  return obj;
}

// ---------------------------------------------------------------------------
// ConsumerBehavior

ConsumerBehavior::ConsumerBehavior(std::string node_name,
                                   std::vector<WorkloadSpec> workloads,
                                   SimTime timeout,
                                   std::optional<OverlayConfig> overlay)
    : node_name_(std::move(node_name)),
      workloads_(std::move(workloads)),
      timeout_(timeout),
      overlay_(std::move(overlay)) {}

Rng& ConsumerBehavior::nonce_rng(Engine& e) {
  return e.rng("nonce/" + node_name_);
}

Rng& ConsumerBehavior::workload_rng(Engine& e, std::size_t index) {
  return e.rng("workload/" + node_name_ + "#" + std::to_string(index));
}

void ConsumerBehavior::start(Engine& e) {
  node_id_ = e.node_id(node_name_);
  tick_counts_.assign(workloads_.size(), 0);
  zipfs_.clear();
  for (const auto& w : workloads_) {
    if (w.names.kind == NamePickerSpec::Kind::zipf) {
      zipfs_.push_back(std::make_unique<ZipfSampler>(
          static_cast<std::size_t>(w.names.catalog), w.names.alpha));
    } else {
      zipfs_.push_back(nullptr);
    }
    if (w.via_overlay && !overlay_) {
      throw std::runtime_error("consumer " + node_name_ +
                               ": overlay workload without overlay config");
    }
  }
  for (std::size_t i = 0; i < workloads_.size(); ++i) {
    schedule_next(e, i, e.now(), true);
  }
}

void ConsumerBehavior::schedule_next(Engine& e, std::size_t index, SimTime now,
                                     bool first) {
  const ProcessSpec& p = workloads_[index].process;
  std::uint64_t k = tick_counts_[index];
  SimTime at = kNever;
  switch (p.kind) {
    case ProcessSpec::Kind::poisson: {
      double mean_gap_us = 1e6 / p.rate_per_s;
      SimTime gap =
          static_cast<SimTime>(workload_rng(e, index).exponential(mean_gap_us));
      at = (first ? p.start : now) + std::max<SimTime>(gap, 1);
      break;
    }
    case ProcessSpec::Kind::periodic:
      if (k >= p.count) return;
      at = p.start + static_cast<SimTime>(k) * p.period;
      break;
    case ProcessSpec::Kind::schedule:
      if (k >= p.times.size()) return;
      at = p.times[k];
      break;
  }
  e.schedule_behavior_timer(node_id_, std::max<SimTime>(at - now, 0),
                            tag(kTickTimer, index));
}

Name ConsumerBehavior::pick_name(Engine& e, std::size_t index) {
  const NamePickerSpec& n = workloads_[index].names;
  std::uint64_t k = tick_counts_[index];
  switch (n.kind) {
    case NamePickerSpec::Kind::fixed:
      return n.fixed;
    case NamePickerSpec::Kind::zipf: {
      std::size_t rank = zipfs_[index]->sample(workload_rng(e, index));
      return n.prefix.child(std::to_string(rank));
    }
    case NamePickerSpec::Kind::sequence:
      return n.sequence[k % n.sequence.size()];
    case NamePickerSpec::Kind::unique:
      return n.prefix.child(node_name_ + "-" +
                            std::to_string(unique_counter_++));
    case NamePickerSpec::Kind::conversation: {
      auto* prod =
          dynamic_cast<ProducerBehavior*>(e.behavior(n.conversation_producer));
      if (prod == nullptr) {
        throw std::runtime_error("consumer " + node_name_ +
                                 ": conversation producer not found: " +
                                 n.conversation_producer);
      }
      return prod->conversation_name(n.offset + k);
    }
  }
  throw std::logic_error("unreachable name picker kind");
}

void ConsumerBehavior::fire_workload(Engine& e, std::size_t index, SimTime now) {
  const auto& w = workloads_[index];
  if (w.names.kind == NamePickerSpec::Kind::conversation) {
    auto* prod =
        dynamic_cast<ProducerBehavior*>(e.behavior(w.names.conversation_producer));
    if (prod != nullptr &&
        w.names.offset + tick_counts_[index] >= prod->spec().conversation.count) {
      return;  // conversation exhausted; stop this workload
    }
  }
  Name name = pick_name(e, index);
  if (w.via_overlay) {
    request_overlay(e, name, now);
  } else {
    request_direct(e, name, now);
  }
  tick_counts_[index]++;
  schedule_next(e, index, now, false);
}

void ConsumerBehavior::request_direct(Engine& e, const Name& name, SimTime now) {
  std::uint64_t id = next_request_++;
  Pending req;
  req.display = name;
  req.sent = now;
  pending_.emplace(id, std::move(req));
  by_name_[name].push_back(id);
  stats_.sent++;
  e.log_request(node_id_, name);

  Interest interest;
  interest.name = name;
  interest.nonce = nonce_rng(e).next_u64();
  e.send_interest(node_id_, interest);
  e.schedule_behavior_timer(node_id_, timeout_, tag(kTimeoutTimer, id));
}

void ConsumerBehavior::request_overlay(Engine& e, const Name& name, SimTime now) {
  std::uint64_t id = next_request_++;
  Rng& rng = e.rng("overlay/" + node_name_);
  // Circuit ids are random tokens: they appear in relay names, so they must
  // not identify the consumer.
  char cid_buf[17];
  std::snprintf(cid_buf, sizeof cid_buf, "%016llx",
                static_cast<unsigned long long>(rng.next_u64()));
  std::string cid = cid_buf;
  auto flow = std::make_unique<OverlayFlow>();
  flow->circuit = build_circuit(overlay_->ars, rng, cid);
  flow->setup_entry = setup_name(flow->circuit.entry_ar, cid, flow->circuit.k1);
  flow->setup_exit = setup_name(flow->circuit.exit_ar, cid, flow->circuit.k2);

  Pending req;
  req.display = name;
  req.sent = now;
  req.overlay = std::move(flow);
  by_name_[req.overlay->setup_entry].push_back(id);
  by_name_[req.overlay->setup_exit].push_back(id);
  stats_.sent++;
  e.log_request(node_id_, name);

  Interest setup1;
  setup1.name = req.overlay->setup_entry;
  setup1.nonce = nonce_rng(e).next_u64();
  Interest setup2;
  setup2.name = req.overlay->setup_exit;
  setup2.nonce = nonce_rng(e).next_u64();
  pending_.emplace(id, std::move(req));
  e.send_interest(node_id_, setup1);
  e.send_interest(node_id_, setup2);
  e.schedule_behavior_timer(node_id_, timeout_, tag(kTimeoutTimer, id));
}

std::optional<Name> ConsumerBehavior::match(const Name& name) {
  // Exact match first, then ancestors: a request for a prefix can be
  // answered by any content under it.
  Name probe = name;
  while (true) {
    auto it = by_name_.find(probe);
    if (it != by_name_.end() && !it->second.empty()) return probe;
    if (probe.size() <= 1) break;
    probe = probe.parent();
  }
  return std::nullopt;
}

void ConsumerBehavior::unregister(const Pending& req, std::uint64_t id) {
  auto drop = [&](const Name& n) {
    auto it = by_name_.find(n);
    if (it == by_name_.end()) return;
    auto& dq = it->second;
    auto pos = std::find(dq.begin(), dq.end(), id);
    if (pos != dq.end()) dq.erase(pos);
    if (dq.empty()) by_name_.erase(it);
  };
  if (req.overlay) {
    drop(req.overlay->setup_entry);
    drop(req.overlay->setup_exit);
    if (!req.overlay->outer.empty()) drop(req.overlay->outer);
  } else {
    drop(req.display);
  }
}

void ConsumerBehavior::complete(Engine& e, std::uint64_t id, Pending& req,
                                const ContentObject& candidate,
                                const Name& logical_name, const Bytes& payload,
                                const Signature& sig, SimTime now) {
  VerifyResult vr = e.registry().verify(logical_name, payload, sig);
  switch (vr) {
    case VerifyResult::valid: stats_.verify_valid++; break;
    case VerifyResult::invalid: stats_.verify_invalid++; break;
    case VerifyResult::unverifiable: stats_.verify_unverifiable++; break;
  }
  if (vr == VerifyResult::valid) {
    stats_.satisfied++;
    double rtt_ms = to_ms(now - req.sent);
    if (stats_.satisfied == 1) {
      stats_.rtt_min_ms = stats_.rtt_max_ms = rtt_ms;
    } else {
      stats_.rtt_min_ms = std::min(stats_.rtt_min_ms, rtt_ms);
      stats_.rtt_max_ms = std::max(stats_.rtt_max_ms, rtt_ms);
    }
    stats_.rtt_sum_ms += rtt_ms;
    satisfied_log_.emplace_back(logical_name, now - req.sent);
    payloads_[logical_name] = payload;
    e.trace_record(node_name_, "data", candidate.name.render(), "-", "satisfied");
  } else {
    stats_.rejected++;
    e.trace_record(node_name_, "data", candidate.name.render(), "-", "rejected");
  }
  unregister(req, id);
  pending_.erase(id);
}

void ConsumerBehavior::on_data(Engine& e, const ContentObject& obj, SimTime now) {
  auto key = match(obj.name);
  if (!key) {
    stats_.unsolicited++;
    e.trace_record(node_name_, "data", obj.name.render(), "-", "unsolicited");
    return;
  }
  // One returned object answers every request outstanding under that name:
  // the network aggregates duplicates and sends this face a single copy.
  const auto& dq = by_name_.at(*key);
  std::vector<std::uint64_t> ids(dq.begin(), dq.end());
  for (std::uint64_t id : ids) {
    auto it = pending_.find(id);
    if (it == pending_.end()) continue;
    handle_match(e, id, it->second, obj, now);
  }
}

void ConsumerBehavior::handle_match(Engine& e, std::uint64_t id, Pending& req,
                                    const ContentObject& obj, SimTime now) {
  if (!req.overlay) {
    complete(e, id, req, obj, obj.name, obj.payload, obj.signature, now);
    return;
  }

  OverlayFlow& flow = *req.overlay;
  if (obj.name == flow.setup_entry || obj.name == flow.setup_exit) {
    // Setup ack: unregister that leg; once both relays hold keys, launch
    // the wrapped interest through the entry relay.
    auto it = by_name_.find(obj.name);
    if (it != by_name_.end()) {
      auto pos = std::find(it->second.begin(), it->second.end(), id);
      if (pos != it->second.end()) it->second.erase(pos);
      if (it->second.empty()) by_name_.erase(it);
    }
    flow.acks++;
    e.trace_record(node_name_, "data", obj.name.render(), "-", "overlay_ack");
    if (flow.acks == 2) {
      flow.outer = wrap_interest(flow.circuit, req.display);
      by_name_[flow.outer].push_back(id);
      Interest outer;
      outer.name = flow.outer;
      outer.nonce = nonce_rng(e).next_u64();
      e.send_interest(node_id_, outer);
    }
    return;
  }

  // Wrapped response: peel the entry layer, then the exit layer.
  Bytes layer1 = sym_decrypt(flow.circuit.k1, obj.payload);
  Bytes plain = sym_decrypt(flow.circuit.k2, layer1);
  Name logical;
  Bytes payload;
  Signature sig;
  bool parsed = false;
  try {
    auto j = nlohmann::json::parse(to_string_bytes(plain));
    logical = Name::parse(j.at("name").get<std::string>());
    payload = from_hex(j.at("payload").get<std::string>());
    sig.key_id = KeyId{j.at("key").get<std::uint64_t>()};
    Bytes dg = from_hex(j.at("digest").get<std::string>());
    if (dg.size() == sig.digest.size()) {
      std::copy(dg.begin(), dg.end(), sig.digest.begin());
      parsed = true;
    }
  } catch (const std::exception&) {
    parsed = false;
  }
  if (!parsed || logical != req.display) {
    // Garbled or mismatched response counts as a failed verification.
    stats_.rejected++;
    stats_.verify_unverifiable++;
    e.trace_record(node_name_, "data", obj.name.render(), "-", "rejected");
    unregister(req, id);
    pending_.erase(id);
    return;
  }
  complete(e, id, req, obj, logical, payload, sig, now);
}

void ConsumerBehavior::on_timer(Engine& e, std::uint64_t t, SimTime now) {
  switch (tag_kind(t)) {
    case kTickTimer:
      fire_workload(e, static_cast<std::size_t>(tag_value(t)), now);
      break;
    case kTimeoutTimer: {
      std::uint64_t id = tag_value(t);
      auto it = pending_.find(id);
      if (it == pending_.end()) return;  // already satisfied
      stats_.timeouts++;
      e.trace_record(node_name_, "timer", it->second.display.render(), "-",
                     "timeout");
      unregister(it->second, id);
      pending_.erase(it);
      break;
    }
    default:
      break;
  }
}

void ConsumerBehavior::finish(Engine&) {}

void ConsumerBehavior::report(Engine&, MetricsTable& t) const {
  const std::string& n = node_name_;
  t.add(n, "sent", static_cast<double>(stats_.sent));
  t.add(n, "satisfied", static_cast<double>(stats_.satisfied));
  t.add(n, "timeouts", static_cast<double>(stats_.timeouts));
  t.add(n, "rejected", static_cast<double>(stats_.rejected));
  t.add(n, "pending", static_cast<double>(pending_.size()));
  t.add(n, "unsolicited", static_cast<double>(stats_.unsolicited));
  t.add(n, "verify_valid", static_cast<double>(stats_.verify_valid));
  t.add(n, "verify_invalid", static_cast<double>(stats_.verify_invalid));
  t.add(n, "verify_unverifiable",
        static_cast<double>(stats_.verify_unverifiable));
  if (stats_.sent > 0) {
    t.add(n, "satisfaction_rate",
          static_cast<double>(stats_.satisfied) / static_cast<double>(stats_.sent));
  }
  if (stats_.satisfied > 0) {
    t.add(n, "rtt_mean_ms",
          stats_.rtt_sum_ms / static_cast<double>(stats_.satisfied));
    t.add(n, "rtt_min_ms", stats_.rtt_min_ms);
    t.add(n, "rtt_max_ms", stats_.rtt_max_ms);
  }
}

// ---------------------------------------------------------------------------
// ProducerBehavior

ProducerBehavior::ProducerBehavior(std::string node_name, ProducerSpec spec,
                                   KeyId key)
    : node_name_(std::move(node_name)), spec_(std::move(spec)), key_(key) {}

void ProducerBehavior::start(Engine& e) {
  node_id_ = e.node_id(node_name_);
  if (spec_.mode == "conversation") {
    conv_tokens_.clear();
    Rng& rng = e.rng("conv/" + node_name_);
    for (std::uint64_t i = 0; i < spec_.conversation.count; ++i) {
      if (spec_.conversation.opaque) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(rng.next_u64()));
        conv_tokens_.emplace_back(buf);
      } else {
        conv_tokens_.push_back(std::to_string(i + 1));
      }
    }
  }
}

Name ProducerBehavior::conversation_name(std::uint64_t i) const {
  return spec_.prefix.child(conv_tokens_.at(static_cast<std::size_t>(i)));
}

KeyId ProducerBehavior::signing_key(Engine& e, const Name& name) {
  if (spec_.key_mode != "ephemeral") return key_;
  auto it = ephemeral_keys_.find(name);
  if (it != ephemeral_keys_.end()) return it->second;
  KeyId k = e.registry().ephemeral_key(node_name_, e.rng("keys/" + node_name_));
  ephemeral_keys_.emplace(name, k);
  return k;
}

ContentObject ProducerBehavior::make_object(Engine& e, const Name& name,
                                            std::uint64_t size,
                                            std::optional<std::uint32_t> chunk,
                                            std::optional<std::uint32_t> total) {
  ContentObject obj = synth_object(e.registry(), signing_key(e, name), name,
                                   size, spec_.mark_no_cache);
  if (chunk) obj.chunk_index = *chunk;
  if (total) obj.total_chunks = *total;
  return obj;
}

std::optional<ContentObject> ProducerBehavior::resolve(Engine& e,
                                                       const Name& name,
                                                       SimTime now) {
  if (!spec_.prefix.is_prefix_of(name)) return std::nullopt;

  if (spec_.mode == "open") {
    return make_object(e, name, spec_.payload_size, std::nullopt, std::nullopt);
  }

  if (spec_.mode == "catalog") {
    // Smallest chunk name under the interest that the catalog can serve.
    for (const Name& item : spec_.catalog) {
      for (std::uint32_t c = 0; c < spec_.chunks; ++c) {
        Name chunk_name = item.child(std::to_string(c));
        if (name.is_prefix_of(chunk_name) || chunk_name == name) {
          return make_object(e, chunk_name, spec_.payload_size, c, spec_.chunks);
        }
      }
    }
    return std::nullopt;
  }

  if (spec_.mode == "conversation") {
    const auto& conv = spec_.conversation;
    for (std::size_t i = 0; i < conv_tokens_.size(); ++i) {
      SimTime available = conv.start + static_cast<SimTime>(i) * conv.period;
      if (available > now) break;  // later messages do not exist yet
      Name msg = conversation_name(i);
      if (name.is_prefix_of(msg) || msg == name) {
        std::uint64_t size = spec_.payload_size + (i * 37) % 64;
        return make_object(e, msg, size, std::nullopt, std::nullopt);
      }
    }
    return std::nullopt;
  }

  throw std::runtime_error("producer " + node_name_ +
                           ": unknown mode " + spec_.mode);
}

void ProducerBehavior::on_interest(Engine& e, const Interest& interest,
                                   SimTime now) {
  auto obj = resolve(e, interest.name, now);
  if (obj && interest.exclude.contains(obj->name)) {
    // Exclusion may still leave a later candidate; scan for the smallest
    // non-excluded one in catalog/conversation modes.
    obj = std::nullopt;
    if (spec_.mode == "catalog") {
      for (const Name& item : spec_.catalog) {
        for (std::uint32_t c = 0; c < spec_.chunks && !obj; ++c) {
          Name chunk_name = item.child(std::to_string(c));
          bool under = interest.name.is_prefix_of(chunk_name) ||
                       chunk_name == interest.name;
          if (under && !interest.exclude.contains(chunk_name)) {
            obj = make_object(e, chunk_name, spec_.payload_size, c, spec_.chunks);
          }
        }
      }
    } else if (spec_.mode == "conversation") {
      const auto& conv = spec_.conversation;
      for (std::size_t i = 0; i < conv_tokens_.size() && !obj; ++i) {
        if (conv.start + static_cast<SimTime>(i) * conv.period > now) break;
        Name msg = conversation_name(i);
        bool under =
            interest.name.is_prefix_of(msg) || msg == interest.name;
        if (under && !interest.exclude.contains(msg)) {
          std::uint64_t size = spec_.payload_size + (i * 37) % 64;
          obj = make_object(e, msg, size, std::nullopt, std::nullopt);
        }
      }
    }
  }
  if (!obj) {
    unserved_++;
    e.trace_record(node_name_, "interest", interest.name.render(), "-",
                   "no_content");
    return;
  }
  served_++;
  e.trace_record(node_name_, "interest", interest.name.render(), "-", "serve");
  outbox_.push_back(std::move(*obj));
  SimTime delay = static_cast<SimTime>(
      static_cast<double>(spec_.service_delay) * spec_.slow_factor);
  e.schedule_behavior_timer(node_id_, delay,
                            tag(kServiceTimer, outbox_.size() - 1));
}

void ProducerBehavior::on_timer(Engine& e, std::uint64_t t, SimTime) {
  if (tag_kind(t) != kServiceTimer) return;
  e.send_data(node_id_, outbox_.at(static_cast<std::size_t>(tag_value(t))));
}

void ProducerBehavior::report(Engine&, MetricsTable& t) const {
  t.add(node_name_, "served", static_cast<double>(served_));
  t.add(node_name_, "unserved", static_cast<double>(unserved_));
}

// ---------------------------------------------------------------------------
// ArBehavior

ArBehavior::ArBehavior(std::string node_name, KeyId key)
    : node_name_(std::move(node_name)), key_(key) {}

void ArBehavior::start(Engine& e) { node_id_ = e.node_id(node_name_); }

void ArBehavior::on_interest(Engine& e, const Interest& interest, SimTime now) {
  if (auto setup = parse_setup(interest.name)) {
    if (setup->ar != node_name_) {
      drops_++;
      return;
    }
    circuit_keys_[setup->cid] = setup->key;
    setups_++;
    // Ack with a contents object named after the setup interest itself.
    ContentObject ack;
    ack.name = interest.name;
    ack.payload = to_bytes("ok");
    ack.payload_size = ack.payload.size();
    ack.signature = e.registry().sign(key_, ack.name, ack.payload);
    ack.no_cache = true;  // circuit state is relay-local, never cached
    e.trace_record(node_name_, "interest", interest.name.render(), "-", "setup");
    e.send_data(node_id_, ack);
    return;
  }
  if (auto parts = parse_relay(interest.name)) {
    if (parts->ar != node_name_) {
      drops_++;
      return;
    }
    relays_in_++;
    relay(e, interest, now);
    return;
  }
  drops_++;
  e.trace_record(node_name_, "interest", interest.name.render(), "-", "drop");
}

void ArBehavior::relay(Engine& e, const Interest& interest, SimTime) {
  auto parts = parse_relay(interest.name);
  auto key_it = circuit_keys_.find(parts->cid);
  if (key_it == circuit_keys_.end()) {
    drops_++;
    e.trace_record(node_name_, "interest", interest.name.render(), "-",
                   "no_circuit");
    return;
  }
  const Bytes& key = key_it->second;
  auto plain = unwrap_blob(key, parts->blob);
  if (!plain) {
    drops_++;
    e.trace_record(node_name_, "interest", interest.name.render(), "-",
                   "bad_blob");
    return;
  }
  Name out_name;
  bool exit_role = false;
  try {
    auto j = nlohmann::json::parse(*plain);
    if (j.contains("next")) {
      // Entry role: hand the still-wrapped inner blob to the exit relay.
      out_name = relay_name(j.at("next").get<std::string>(), parts->cid,
                            j.at("blob").get<std::string>());
    } else {
      // Exit role: issue the native interest on the consumer's behalf.
      out_name = Name::parse(j.at("name").get<std::string>());
      exit_role = true;
    }
  } catch (const std::exception&) {
    drops_++;
    e.trace_record(node_name_, "interest", interest.name.render(), "-",
                   "bad_layer");
    return;
  }
  pending_[out_name].push_back({interest.name, key, exit_role});
  Interest out;
  out.name = out_name;
  out.nonce = e.rng("nonce/" + node_name_).next_u64();
  relays_out_++;
  e.trace_record(node_name_, "interest", out_name.render(), "-",
                 exit_role ? "relay_exit" : "relay_entry");
  e.send_interest(node_id_, out);
}

void ArBehavior::on_data(Engine& e, const ContentObject& obj, SimTime) {
  // Match the outgoing name, walking up for prefix-answered fetches.
  Name probe = obj.name;
  std::map<Name, std::deque<PendingRelay>>::iterator it;
  while (true) {
    it = pending_.find(probe);
    if (it != pending_.end() && !it->second.empty()) break;
    if (probe.size() <= 1) {
      drops_++;
      e.trace_record(node_name_, "data", obj.name.render(), "-", "unsolicited");
      return;
    }
    probe = probe.parent();
  }
  PendingRelay rel = it->second.front();
  it->second.pop_front();
  if (it->second.empty()) pending_.erase(it);

  ContentObject back;
  back.name = rel.outer;
  if (rel.exit_role) {
    // Wrap name, payload and producer signature under the exit key.
    nlohmann::json j{{"name", obj.name.render()},
                     {"payload", hex(obj.payload)},
                     {"key", obj.signature.key_id.id},
                     {"digest", hex(obj.signature.digest)}};
    back.payload = sym_encrypt(rel.key, to_bytes(j.dump()));
  } else {
    // Entry role: add the outer onion layer over the exit's ciphertext.
    back.payload = sym_encrypt(rel.key, obj.payload);
  }
  back.payload_size = back.payload.size();
  back.signature = e.registry().sign(key_, back.name, back.payload);
  back.no_cache = true;  // single-use circuit data is useless to cache
  returns_++;
  e.trace_record(node_name_, "data", back.name.render(), "-",
                 rel.exit_role ? "return_exit" : "return_entry");
  e.send_data(node_id_, back);
}

void ArBehavior::on_timer(Engine&, std::uint64_t, SimTime) {}

void ArBehavior::report(Engine&, MetricsTable& t) const {
  t.add(node_name_, "setups", static_cast<double>(setups_));
  t.add(node_name_, "relays_in", static_cast<double>(relays_in_));
  t.add(node_name_, "relays_out", static_cast<double>(relays_out_));
  t.add(node_name_, "returns", static_cast<double>(returns_));
  t.add(node_name_, "drops", static_cast<double>(drops_));
}

}  // namespace ccnsim
