#include "ccnsim/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ccnsim {
namespace {

constexpr std::uint64_t kProbeTimer = 1;
constexpr std::uint64_t kStepTimer = 2;

std::uint64_t tag(std::uint64_t kind, std::uint64_t value) {
  return (kind << 56) | value;
}
std::uint64_t tag_kind(std::uint64_t t) { return t >> 56; }
std::uint64_t tag_value(std::uint64_t t) { return t & ((1ULL << 56) - 1); }

// step codes
constexpr std::uint64_t kStepBegin = 0;
constexpr std::uint64_t kStepCalib = 1;
constexpr std::uint64_t kStepEval = 2;
constexpr std::uint64_t kStepEstProbe = 3;
constexpr std::uint64_t kStepLoop = 4;
constexpr std::uint64_t kStepPoll = 5;
constexpr std::uint64_t kStepFlood = 6;

// probe contexts
constexpr std::uint64_t kCtxCalWarm = 1;
constexpr std::uint64_t kCtxCalHit = 2;
constexpr std::uint64_t kCtxCalMiss = 3;
constexpr std::uint64_t kCtxEvalHit = 4;
constexpr std::uint64_t kCtxEvalMiss = 5;
constexpr std::uint64_t kCtxEstSeed = 6;
constexpr std::uint64_t kCtxEstProbe = 7;
constexpr std::uint64_t kCtxSnapshot = 8;
constexpr std::uint64_t kCtxPoll = 9;
constexpr std::uint64_t kCtxLoopBase = 1000;

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

std::optional<std::uint64_t> integer_suffix(const Name& name) {
  if (name.empty()) return std::nullopt;
  const std::string& last = name.at(name.size() - 1);
  if (last.empty() || last.size() > 18) return std::nullopt;
  for (char c : last) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  return std::stoull(last);
}

}  // namespace

std::string AttackSpec::param_hash() const {
  std::uint64_t h = fnv1a64(params.dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// AttackBehavior

AttackBehavior::AttackBehavior(AttackSpec spec, std::string node)
    : spec_(std::move(spec)), node_name_(std::move(node)) {}

void AttackBehavior::start(Engine& e) {
  node_id_ = e.node_id(node_name_);
  e.schedule_behavior_timer(node_id_, std::max<SimTime>(spec_.start, 0),
                            tag(kStepTimer, kStepBegin));
}

Rng& AttackBehavior::rng(Engine& e) {
  return e.rng("attack/" + spec_.id + "/" + node_name_);
}

void AttackBehavior::row(Engine& e, const std::string& metric,
                         double value) const {
  e.report_attack(spec_.id, spec_.variant, spec_.param_hash(), metric, value);
}

std::uint64_t AttackBehavior::send_probe(Engine& e, const Name& name,
                                         const ExcludeFilter& exclude,
                                         bool non_invasive, SimTime timeout,
                                         std::uint64_t ctx) {
  std::uint64_t id = next_probe_++;
  Probe p;
  p.id = id;
  p.name = name;
  p.sent = e.now();
  p.non_invasive = non_invasive;
  p.ctx = ctx;
  pending_.emplace(id, p);
  by_name_[name].push_back(id);
  probes_sent_++;

  Interest interest;
  interest.name = name;
  interest.exclude = exclude;
  interest.nonce = rng(e).next_u64();
  interest.non_invasive = non_invasive;
  e.send_interest(node_id_, interest);
  e.schedule_behavior_timer(node_id_, timeout, tag(kProbeTimer, id));
  return id;
}

void AttackBehavior::schedule_step(Engine& e, SimTime delay,
                                   std::uint64_t code) {
  e.schedule_behavior_timer(node_id_, delay, tag(kStepTimer, code));
}

void AttackBehavior::on_data(Engine& e, const ContentObject& obj, SimTime now) {
  // Find the pending probe this answers: exact name or an ancestor prefix.
  Name probe_name = obj.name;
  while (true) {
    auto it = by_name_.find(probe_name);
    if (it != by_name_.end() && !it->second.empty()) {
      std::uint64_t id = it->second.front();
      it->second.pop_front();
      if (it->second.empty()) by_name_.erase(it);
      Probe p = pending_.at(id);
      pending_.erase(id);
      handle_probe(e, p, obj, now);
      return;
    }
    if (probe_name.empty()) return;  // ignore unsolicited data
    probe_name = probe_name.parent();
  }
}

void AttackBehavior::on_timer(Engine& e, std::uint64_t t, SimTime now) {
  switch (tag_kind(t)) {
    case kProbeTimer: {
      std::uint64_t id = tag_value(t);
      auto it = pending_.find(id);
      if (it == pending_.end()) return;  // answered in time
      Probe p = it->second;
      pending_.erase(it);
      auto bn = by_name_.find(p.name);
      if (bn != by_name_.end()) {
        auto pos = std::find(bn->second.begin(), bn->second.end(), id);
        if (pos != bn->second.end()) bn->second.erase(pos);
        if (bn->second.empty()) by_name_.erase(bn);
      }
      handle_probe(e, p, std::nullopt, now);
      break;
    }
    case kStepTimer: {
      std::uint64_t code = tag_value(t);
      if (code == kStepBegin) {
        begin(e, now);
      } else {
        step(e, code, now);
      }
      break;
    }
    default:
      break;
  }
}

void AttackBehavior::finish(Engine& e) {
  if (concluded_) return;
  concluded_ = true;
  conclude(e, e.now());
}

// ---------------------------------------------------------------------------
// EnumerateAttack

EnumerateAttack::EnumerateAttack(AttackSpec spec, std::string node)
    : AttackBehavior(std::move(spec), std::move(node)) {
  prefix_ = Name::parse(spec_.params.at("prefix").get<std::string>());
  limit_ = spec_.params.value("limit", std::uint64_t{1024});
  probe_timeout_ = from_ms(spec_.params.value("probe_timeout_ms", 200.0));
}

void EnumerateAttack::begin(Engine& e, SimTime now) {
  started_at_ = now;
  next_query(e, now);
}

void EnumerateAttack::next_query(Engine& e, SimTime) {
  queries_++;
  send_probe(e, prefix_, exclude_, /*non_invasive=*/true, probe_timeout_, 0);
}

void EnumerateAttack::handle_probe(Engine& e, const Probe&,
                                   const std::optional<ContentObject>& obj,
                                   SimTime now) {
  if (done_) return;
  if (!obj) {
    // Terminating miss: the filter now excludes everything cached.
    done_ = true;
    return;
  }
  if (exclude_.contains(obj->name)) {
    // Same name twice: the router ignored our exclude filter.
    blocked_ = true;
    done_ = true;
    return;
  }
  discovered_.push_back(obj->name);
  exclude_.add(obj->name);
  if (discovered_.size() >= limit_) {
    done_ = true;
    return;
  }
  next_query(e, now);
}

void EnumerateAttack::conclude(Engine& e, SimTime now) {
  row(e, "discovered", static_cast<double>(discovered_.size()));
  row(e, "queries", static_cast<double>(queries_));
  row(e, "blocked", blocked_ ? 1 : 0);
  row(e, "duration_ms", to_ms(now - started_at_));
}

// ---------------------------------------------------------------------------
// TimingAttack

TimingAttack::TimingAttack(AttackSpec spec, std::string node)
    : AttackBehavior(std::move(spec), std::move(node)) {
  const auto& p = spec_.params;
  target_ = Name::parse(p.at("target").get<std::string>());
  parallel_ = spec_.variant == "TimingParallel";
  total_chunks_ = parallel_ ? p.value("chunks", std::uint32_t{1}) : 1;
  if (parallel_ && total_chunks_ == 0) {
    throw std::runtime_error("timing attack: chunks must be >= 1");
  }
  probe_timeout_ = from_ms(p.value("probe_timeout_ms", 500.0));
  state_.target = target_;

  if (p.contains("calibrate")) {
    const auto& c = p.at("calibrate");
    do_calibrate_ = true;
    calib_cached_ = Name::parse(c.at("cached").get<std::string>());
    calib_miss_prefix_ = Name::parse(c.at("miss_prefix").get<std::string>());
    calib_n_ = c.at("n").get<std::uint64_t>();
    if (calib_n_ == 0) {
      throw std::runtime_error("timing attack: calibration n must be > 0");
    }
    eval_n_ = c.value("eval_n", std::uint64_t{0});
    calib_gap_ = from_ms(c.value("gap_ms", 50.0));
  } else {
    calib_.threshold_ms = p.value("threshold_ms", 0.0);
  }

  if (p.contains("estimate")) {
    const auto& s = p.at("estimate");
    do_estimate_ = true;
    est_prefix_ = Name::parse(s.at("prefix").get<std::string>());
    est_reps_ = s.value("reps", std::uint64_t{1});
    est_gap0_ = from_ms(s.value("gap0_ms", 100.0));
    est_max_gap_ = from_ms(s.value("max_gap_ms", 60000.0));
    est_tol_ = from_ms(s.value("tol_ms", 50.0));
  } else {
    state_.t_c_ms = p.value("t_c_ms", 0.0);
  }

  if (p.contains("probe")) {
    const auto& l = p.at("probe");
    do_probe_ = true;
    state_.epsilon_ms = l.at("epsilon_ms").get<double>();
    if (l.contains("until_ms")) probe_until_ = from_ms(l.at("until_ms").get<double>());
  }
}

Name TimingAttack::chunk_name(std::uint32_t chunk) const {
  bool chunked = parallel_ || spec_.params.value("chunked", false);
  return chunked ? target_.child(std::to_string(chunk)) : target_;
}

void TimingAttack::begin(Engine& e, SimTime now) {
  phase_ = Phase::idle;
  next_phase(e, now);
}

void TimingAttack::next_phase(Engine& e, SimTime now) {
  if (phase_ == Phase::idle && do_calibrate_) {
    phase_ = Phase::calibrating;
    calib_count_ = 0;
    // One discarded warm fetch keeps the hit name resident before sampling.
    send_probe(e, calib_cached_, {}, false, probe_timeout_, kCtxCalWarm);
    return;
  }
  if (phase_ <= Phase::calibrating && eval_n_ > 0) {
    phase_ = Phase::evaluating;
    eval_step(e, now);
    return;
  }
  if (phase_ <= Phase::evaluating && do_estimate_) {
    phase_ = Phase::estimating;
    est_rep_ = 0;
    start_estimate_rep(e, now);
    return;
  }
  if (phase_ <= Phase::estimating && do_probe_) {
    phase_ = Phase::probing;
    start_probe_loop(e, now);
    return;
  }
  phase_ = Phase::done;
}

// --- calibration ---

void TimingAttack::calib_step(Engine& e, SimTime) {
  if (calib_.hit_rtt_ms.size() >= calib_n_ &&
      calib_.miss_rtt_ms.size() >= calib_n_) {
    finish_calibration(e, e.now());
    return;
  }
  if (calib_.hit_rtt_ms.size() <= calib_.miss_rtt_ms.size()) {
    send_probe(e, calib_cached_, {}, false, probe_timeout_, kCtxCalHit);
  } else {
    Name miss = calib_miss_prefix_.child("m" + std::to_string(calib_count_++));
    send_probe(e, miss, {}, false, probe_timeout_, kCtxCalMiss);
  }
}

void TimingAttack::finish_calibration(Engine& e, SimTime now) {
  double hit_mean = mean_of(calib_.hit_rtt_ms);
  double miss_mean = mean_of(calib_.miss_rtt_ms);
  calib_.threshold_ms = (hit_mean + miss_mean) / 2;
  double max_hit = *std::max_element(calib_.hit_rtt_ms.begin(),
                                     calib_.hit_rtt_ms.end());
  double min_miss = *std::min_element(calib_.miss_rtt_ms.begin(),
                                      calib_.miss_rtt_ms.end());
  calib_.margin_ms = min_miss - max_hit;
  calib_.unreliable = calib_.margin_ms <= 0;
  next_phase(e, now);
}

void TimingAttack::eval_step(Engine& e, SimTime) {
  if (eval_total_ >= 2 * eval_n_) {
    next_phase(e, e.now());
    return;
  }
  if (eval_total_ % 2 == 0) {
    send_probe(e, calib_cached_, {}, false, probe_timeout_, kCtxEvalHit);
  } else {
    Name miss = calib_miss_prefix_.child("m" + std::to_string(calib_count_++));
    send_probe(e, miss, {}, false, probe_timeout_, kCtxEvalMiss);
  }
}

// --- characteristic-time estimation ---

void TimingAttack::start_estimate_rep(Engine& e, SimTime now) {
  est_exp_ = 0;
  est_bisecting_ = false;
  est_lo_ = 0;
  est_hi_ = kNever;
  est_gap_ = est_gap0_;
  run_experiment(e, now);
}

void TimingAttack::run_experiment(Engine& e, SimTime) {
  // Fresh name per experiment: seed it into the cache, wait the candidate
  // gap, then ask non-invasively whether it survived.
  est_current_name_ = est_prefix_.child(
      "e" + std::to_string(est_rep_) + "-" + std::to_string(est_exp_++));
  send_probe(e, est_current_name_, {}, false, probe_timeout_, kCtxEstSeed);
}

void TimingAttack::experiment_result(Engine& e, bool hit, SimTime now) {
  if (!est_bisecting_) {
    if (hit) {
      est_lo_ = est_gap_;
      if (est_gap_ * 2 > est_max_gap_) {
        // Never evicted within the search horizon; report the cap.
        tc_estimates_.push_back(to_ms(est_max_gap_));
        tc_brackets_.push_back(to_ms(est_max_gap_ - est_lo_));
        est_rep_++;
        if (est_rep_ < est_reps_) {
          start_estimate_rep(e, now);
        } else {
          finish_estimation(e, now);
        }
        return;
      }
      est_gap_ *= 2;
      run_experiment(e, now);
      return;
    }
    est_hi_ = est_gap_;
    est_bisecting_ = true;  // bracket is [est_lo_, est_hi_]
  } else {
    if (hit) {
      est_lo_ = est_gap_;
    } else {
      est_hi_ = est_gap_;
    }
  }
  if (est_hi_ - est_lo_ <= est_tol_) {
    tc_estimates_.push_back(to_ms((est_lo_ + est_hi_) / 2));
    tc_brackets_.push_back(to_ms(est_hi_ - est_lo_));
    est_rep_++;
    if (est_rep_ < est_reps_) {
      start_estimate_rep(e, now);
    } else {
      finish_estimation(e, now);
    }
    return;
  }
  est_gap_ = (est_lo_ + est_hi_) / 2;
  run_experiment(e, now);
}

void TimingAttack::finish_estimation(Engine& e, SimTime now) {
  if (!tc_estimates_.empty()) {
    double m = mean_of(tc_estimates_);
    state_.t_c_ms = m;
  }
  next_phase(e, now);
}

// --- probe loop ---

void TimingAttack::start_probe_loop(Engine& e, SimTime now) {
  if (state_.t_c_ms <= 0) {
    est_failed_ = true;
    phase_ = Phase::done;
    return;
  }
  state_.rtt_threshold_ms = calib_.threshold_ms;
  period_ = from_ms(state_.t_c_ms + state_.epsilon_ms);
  slot_ = 0;
  last_probe_at_.assign(total_chunks_, kNever);
  prev_probe_at_.assign(total_chunks_, kNever);
  probe_tick(e, now);
}

void TimingAttack::probe_tick(Engine& e, SimTime now) {
  if (now >= probe_until_ || now >= spec_.stop) {
    phase_ = Phase::done;
    return;
  }
  std::uint32_t chunk =
      static_cast<std::uint32_t>(slot_ % total_chunks_);
  state_.chunk_cursor = chunk;
  // When the router blocks chunk interests, only the base chunk keeps its
  // schedule: exactly the sequential cadence.
  if (!chunk_blocked_ || chunk == 0) {
    send_probe(e, chunk_name(chunk), {}, false, probe_timeout_,
               kCtxLoopBase + chunk);
    prev_probe_at_[chunk] = last_probe_at_[chunk];
    last_probe_at_[chunk] = now;
  }
  slot_++;
  SimTime slot_gap = period_ / static_cast<SimTime>(total_chunks_);
  schedule_step(e, slot_gap, kStepLoop);
}

void TimingAttack::record_detection(SimTime lo, SimTime hi) {
  Detection d;
  d.lo = lo;
  d.hi = hi;
  d.confidence = calib_.margin_ms;
  auto& ds = state_.detections;
  if (!ds.empty() && lo <= ds.back().hi) {
    ds.back().hi = std::max(ds.back().hi, hi);
    ds.back().lo = std::min(ds.back().lo, lo);
  } else {
    ds.push_back(d);
  }
}

void TimingAttack::classify_probe(Engine&, const Probe& p, bool hit,
                                  bool timeout, SimTime now) {
  std::uint32_t chunk = static_cast<std::uint32_t>(p.ctx - kCtxLoopBase);
  if (timeout) {
    probe_timeouts_++;
    if (chunk >= 1) chunk_blocked_ = true;
    return;
  }
  if (hit) {
    probe_hits_++;
    // A hit at this probe means someone refreshed the chunk since the
    // previous probe of the same chunk; that is the reported interval.
    SimTime prev = prev_probe_at_[chunk];
    SimTime lo = prev == kNever ? p.sent - period_ : prev;
    record_detection(lo, now);
  } else {
    probe_misses_++;
  }
}

void TimingAttack::handle_probe(Engine& e, const Probe& p,
                                const std::optional<ContentObject>& obj,
                                SimTime now) {
  bool timeout = !obj.has_value();
  double rtt_ms = to_ms(now - p.sent);
  switch (p.ctx) {
    case kCtxCalWarm:
      schedule_step(e, calib_gap_, kStepCalib);
      break;
    case kCtxCalHit:
    case kCtxCalMiss: {
      double sample = timeout ? to_ms(probe_timeout_) : rtt_ms;
      if (p.ctx == kCtxCalHit) {
        calib_.hit_rtt_ms.push_back(sample);
      } else {
        calib_.miss_rtt_ms.push_back(sample);
      }
      if (calib_.hit_rtt_ms.size() >= calib_n_ &&
          calib_.miss_rtt_ms.size() >= calib_n_) {
        finish_calibration(e, now);
      } else {
        schedule_step(e, calib_gap_, kStepCalib);
      }
      break;
    }
    case kCtxEvalHit:
    case kCtxEvalMiss: {
      bool predicted_hit =
          !timeout && rtt_ms < calib_.threshold_ms;
      bool expected_hit = p.ctx == kCtxEvalHit;
      if (predicted_hit == expected_hit) eval_correct_++;
      eval_total_++;
      if (eval_total_ >= 2 * eval_n_) {
        next_phase(e, now);
      } else {
        schedule_step(e, calib_gap_, kStepEval);
      }
      break;
    }
    case kCtxEstSeed:
      if (timeout) {
        est_failed_ = true;
        finish_estimation(e, now);
      } else {
        schedule_step(e, est_gap_, kStepEstProbe);
      }
      break;
    case kCtxEstProbe:
      experiment_result(e, !timeout, now);
      break;
    default:
      if (p.ctx >= kCtxLoopBase) {
        bool hit = !timeout && rtt_ms < calib_.threshold_ms;
        classify_probe(e, p, hit, timeout, now);
      }
      break;
  }
}

void TimingAttack::step(Engine& e, std::uint64_t code, SimTime now) {
  switch (code) {
    case kStepCalib:
      calib_step(e, now);
      break;
    case kStepEval:
      eval_step(e, now);
      break;
    case kStepEstProbe:
      send_probe(e, est_current_name_, {}, /*non_invasive=*/true,
                 probe_timeout_, kCtxEstProbe);
      break;
    case kStepLoop:
      if (phase_ == Phase::probing) probe_tick(e, now);
      break;
    default:
      break;
  }
}

void TimingAttack::conclude(Engine& e, SimTime) {
  if (do_calibrate_ || calib_.threshold_ms > 0) {
    row(e, "threshold_ms", calib_.threshold_ms);
  }
  if (do_calibrate_) {
    row(e, "calib_margin_ms", calib_.margin_ms);
    row(e, "calib_unreliable", calib_.unreliable ? 1 : 0);
  }
  if (eval_n_ > 0) {
    row(e, "eval_probes", static_cast<double>(eval_total_));
    row(e, "accuracy", accuracy());
  }
  if (do_estimate_) {
    row(e, "t_c_est_ms", mean_of(tc_estimates_));
    row(e, "t_c_reps", static_cast<double>(tc_estimates_.size()));
    double cv = tc_estimates_.empty() || mean_of(tc_estimates_) == 0
                    ? 0
                    : stddev_of(tc_estimates_) / mean_of(tc_estimates_);
    row(e, "t_c_cv", cv);
    row(e, "t_c_high_variance", cv > 0.25 ? 1 : 0);
    row(e, "t_c_bracket_ms", mean_of(tc_brackets_));
    row(e, "t_c_failed", est_failed_ ? 1 : 0);
  }
  if (do_probe_) {
    row(e, "probes", static_cast<double>(probe_hits_ + probe_misses_ +
                                         probe_timeouts_));
    row(e, "hits", static_cast<double>(probe_hits_));
    row(e, "misses", static_cast<double>(probe_misses_));
    row(e, "timeouts", static_cast<double>(probe_timeouts_));
    row(e, "blocked", chunk_blocked_ ? 1 : 0);
    row(e, "detections", static_cast<double>(state_.detections.size()));
    if (!state_.detections.empty()) {
      row(e, "first_detection_ms", to_ms(state_.detections.front().hi));
    }
  }
}

// ---------------------------------------------------------------------------
// CloneAttack

CloneAttack::CloneAttack(AttackSpec spec, std::string node)
    : AttackBehavior(std::move(spec), std::move(node)) {
  prefix_ = Name::parse(spec_.params.at("prefix").get<std::string>());
  poll_gap_ = from_ms(spec_.params.value("poll_ms", 50.0));
  probe_timeout_ = from_ms(spec_.params.value("probe_timeout_ms", 200.0));
  max_fetch_ = spec_.params.value("max_fetch", std::uint64_t{100000});
}

void CloneAttack::begin(Engine& e, SimTime) {
  // Snapshot phase: enumerate what of the conversation is already cached.
  queries_++;
  send_probe(e, prefix_, exclude_, true, probe_timeout_, kCtxSnapshot);
}

void CloneAttack::poll(Engine& e, SimTime) {
  if (fetched_.size() >= max_fetch_) return;
  queries_++;
  Name next = prefix_.child(std::to_string(next_seq_));
  send_probe(e, next, {}, false, probe_timeout_, kCtxPoll);
}

void CloneAttack::handle_probe(Engine& e, const Probe&,
                               const std::optional<ContentObject>& obj,
                               SimTime now) {
  if (snapshotting_) {
    if (obj && !exclude_.contains(obj->name)) {
      snapshot_.push_back(obj->name);
      exclude_.add(obj->name);
      queries_++;
      send_probe(e, prefix_, exclude_, true, probe_timeout_, kCtxSnapshot);
      return;
    }
    snapshotting_ = false;
    // Predict the next message from the largest integer suffix seen.
    std::uint64_t max_seq = 0;
    bool any_integer = false;
    for (const Name& n : snapshot_) {
      if (auto seq = integer_suffix(n)) {
        any_integer = true;
        max_seq = std::max(max_seq, *seq);
      }
    }
    if (!snapshot_.empty() && !any_integer) {
      blocked_ = true;  // opaque message names defeat prediction
      return;
    }
    next_seq_ = max_seq + 1;
    poll(e, now);
    return;
  }
  if (now >= spec_.stop) return;
  if (obj) {
    fetched_.push_back({obj->name, now, obj->payload_size});
    next_seq_++;
    poll(e, now);  // chase the next message immediately
  } else {
    schedule_step(e, poll_gap_, kStepPoll);  // not out yet; retry
  }
}

void CloneAttack::step(Engine& e, std::uint64_t code, SimTime now) {
  if (code == kStepPoll && !blocked_ && !snapshotting_ && now < spec_.stop) {
    poll(e, now);
  }
}

void CloneAttack::conclude(Engine& e, SimTime) {
  row(e, "snapshot", static_cast<double>(snapshot_.size()));
  row(e, "fetched", static_cast<double>(fetched_.size()));
  row(e, "blocked", blocked_ ? 1 : 0);
  row(e, "queries", static_cast<double>(queries_));
}

// ---------------------------------------------------------------------------
// FloodAttack

FloodAttack::FloodAttack(AttackSpec spec, std::string node)
    : AttackBehavior(std::move(spec), std::move(node)) {
  const auto& p = spec_.params;
  rate_per_s_ = p.at("rate_per_s").get<double>();
  periodic_ = p.value("periodic", false);
  if (spec_.variant == "IFASameName") {
    fixed_name_ = Name::parse(p.at("name").get<std::string>());
  } else {
    prefix_ = Name::parse(p.at("prefix").get<std::string>());
  }
  if (spec_.variant == "CachePollution") {
    catalog_size_ = p.value("catalog", std::uint64_t{0});
  }
}

void FloodAttack::begin(Engine& e, SimTime now) {
  if (rate_per_s_ <= 0) return;
  tick(e, now);
}

Name FloodAttack::next_name(Engine& e) {
  if (spec_.variant == "IFASameName") return fixed_name_;
  if (spec_.variant == "CachePollution" && catalog_size_ > 0) {
    return prefix_.child(std::to_string(rng(e).uniform_index(catalog_size_)));
  }
  return prefix_.child(node_name_ + "-" + std::to_string(counter_++));
}

void FloodAttack::tick(Engine& e, SimTime now) {
  if (now >= spec_.stop) return;
  Interest interest;
  interest.name = next_name(e);
  interest.nonce = rng(e).next_u64();
  e.send_interest(node_id_, interest);
  sent_++;

  double mean_gap_us = 1e6 / rate_per_s_;
  SimTime gap = periodic_ ? static_cast<SimTime>(mean_gap_us)
                          : static_cast<SimTime>(
                                std::max(1.0, rng(e).exponential(mean_gap_us)));
  if (now + gap < spec_.stop) schedule_step(e, gap, kStepFlood);
}

void FloodAttack::step(Engine& e, std::uint64_t code, SimTime now) {
  if (code == kStepFlood) tick(e, now);
}

void FloodAttack::on_data(Engine&, const ContentObject&, SimTime) {
  received_++;
}

void FloodAttack::conclude(Engine& e, SimTime) {
  row(e, "sent_" + node_name_, static_cast<double>(sent_));
  row(e, "recv_" + node_name_, static_cast<double>(received_));
}

// ---------------------------------------------------------------------------
// factory and poisoning helpers

std::unique_ptr<AttackBehavior> make_attack_behavior(const AttackSpec& spec,
                                                     const std::string& node) {
  const std::string& v = spec.variant;
  if (v == "Enumerate") return std::make_unique<EnumerateAttack>(spec, node);
  if (v == "TimingSequential" || v == "TimingParallel") {
    return std::make_unique<TimingAttack>(spec, node);
  }
  if (v == "CloneConversation") return std::make_unique<CloneAttack>(spec, node);
  if (v == "IFASameName" || v == "IFADistinctNames" || v == "IFANonexistent" ||
      v == "IFACollusion" || v == "CachePollution") {
    return std::make_unique<FloodAttack>(spec, node);
  }
  if (v == "ContentPoisoning") return nullptr;  // router-side, no behavior
  throw std::runtime_error("unknown attack variant: " + v);
}

void configure_poisoning(RouterConfig& cfg, const AttackSpec& spec,
                         KeyRegistry& registry) {
  cfg.poison_prefix = Name::parse(spec.params.at("prefix").get<std::string>());
  cfg.poison_unverifiable = spec.params.value("unverifiable", true);
  if (!cfg.poison_unverifiable) {
    cfg.poison_key = registry.register_key("poison:" + spec.id);
  }
}

void append_poisoning_rows(Engine& engine, const AttackSpec& spec) {
  const RouterCounters& c = engine.router(spec.router).counters();
  auto row = [&](const std::string& metric, double value) {
    engine.report_attack(spec.id, spec.variant, spec.param_hash(), metric,
                         value);
  };
  row("substituted", static_cast<double>(c.poison_substituted));
  std::uint64_t blocked = 0;
  for (std::size_t i = 0; i < engine.node_count(); ++i) {
    const Node& n = engine.node(static_cast<int>(i));
    if (n.router) blocked += n.router->counters().poison_blocked;
  }
  row("verify_blocked", static_cast<double>(blocked));
}

}  // namespace ccnsim
