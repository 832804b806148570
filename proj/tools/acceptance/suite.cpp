// Copyright 2026 The LISPS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "suite.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "lisps/edge/pipeline.hpp"
#include "lisps/edge/service.hpp"
#include "lisps/fog/assessor.hpp"
#include "lisps/fog/fuzzy.hpp"
#include "lisps/ledger/chain.hpp"
#include "lisps/ledger/node.hpp"
#include "lisps/security/ledger_view.hpp"
#include "lisps/security/screen.hpp"
#include "lisps/security/services.hpp"
#include "lisps/security/token.hpp"
#include "lisps/sim/metrics.hpp"
#include "lisps/sim/orchestrator.hpp"
#include "lisps/sim/process.hpp"
#include "lisps/sim/replay.hpp"
#include "lisps/sim/scenario.hpp"
#include "lisps/wire/codec.hpp"
#include "lisps/wire/stream.hpp"

namespace lisps::acceptance {

namespace {

using namespace std::chrono_literals;
using Steady = std::chrono::steady_clock;
using ledger::KeyPair;

constexpr char kCamera[] = "cam-01";

double seconds_since(Steady::time_point t0) {
  return std::chrono::duration<double>(Steady::now() - t0).count();
}

std::string vid(const KeyPair& k) { return ledger::vid_of(ledger::address_of(k.public_key())); }

Config base_config() {
  Config c;
  c.set("edge.frame_rate", "5");
  c.set("fog.threshold", "0.6");
  c.set("ledger.miners", "3");
  c.set("ledger.block_interval_ms", "2000");
  c.set("sim.cameras", kCamera);
  return c;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome make(int id, std::string title, bool pass, std::string detail) {
  return Outcome{id, std::move(title), pass, std::move(detail)};
}

// Frames with every real on the 3-decimal grid, as the tracker emits them.
edge::FrameFeatureSet random_frame(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> index(0, 100'000'000);
  std::uniform_int_distribution<std::int64_t> ms(0, 4'102'444'800'000);
  std::uniform_int_distribution<int> milli(0, 5'000'000), objects(0, 10), turns(0, 1000);
  std::uniform_int_distribution<int> id_len(1, 24);
  static constexpr char kIdChars[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-";
  edge::FrameFeatureSet f;
  f.frame_index = index(rng);
  const int len = id_len(rng);
  for (int i = 0; i < len; ++i) f.camera_id += kIdChars[rng() % (sizeof(kIdChars) - 1)];
  f.timestamp = Timestamp{ms(rng)};
  const int n = objects(rng);
  for (int i = 0; i < n; ++i) {
    edge::FeatureRecord r;
    r.object_id = Timestamp{ms(rng)};
    r.speed = milli(rng) / 1000.0;
    r.direction_changes = turns(rng);
    r.dwell = milli(rng) / 1000.0;
    const int x = milli(rng), y = milli(rng);
    r.bbox = edge::BoundingBox(x / 1000.0, y / 1000.0, (x + 1 + milli(rng)) / 1000.0,
                               (y + 1 + milli(rng)) / 1000.0);
    f.objects.emplace(r.object_id, r);
  }
  return f;
}

// Pointwise max of the output labels clipped at `levels`, written
// independently of the library's partition code.
double oracle_membership(const std::vector<double>& apexes, const std::vector<double>& levels,
                         double y) {
  double mu = 0.0;
  for (std::size_t k = 0; k < apexes.size(); ++k) {
    double tri = 0.0;
    if (y == apexes[k]) {
      tri = 1.0;
    } else if (y < apexes[k] && k > 0 && y > apexes[k - 1]) {
      tri = (y - apexes[k - 1]) / (apexes[k] - apexes[k - 1]);
    } else if (y > apexes[k] && k + 1 < apexes.size() && y < apexes[k + 1]) {
      tri = (apexes[k + 1] - y) / (apexes[k + 1] - apexes[k]);
    }
    mu = std::max(mu, std::min(levels[k], tri));
  }
  return mu;
}

// Trapezoid rule on 100001 evenly spaced points.
double oracle_centroid(const std::vector<double>& apexes, const std::vector<double>& levels) {
  constexpr int kPoints = 100001;
  const double lo = apexes.front(), hi = apexes.back();
  double num = 0.0, den = 0.0;
  double py = lo, pmu = oracle_membership(apexes, levels, lo);
  for (int i = 1; i < kPoints; ++i) {
    const double y = lo + (hi - lo) * i / (kPoints - 1);
    const double mu = oracle_membership(apexes, levels, y);
    num += (y - py) * (py * pmu + y * mu) / 2;
    den += (y - py) * (pmu + mu) / 2;
    py = y;
    pmu = mu;
  }
  return num / den;
}

struct OrchestratedRun {
  std::filesystem::path dir;
  sim::RunResult result;
  std::vector<sim::EventLine> edge_events;
};

struct ObjectCounts {
  std::size_t frames = 0;
  std::int64_t min = 0;
  std::int64_t max = 0;
  std::size_t at = 0;  // frames holding exactly `target` objects
};

ObjectCounts count_objects(const std::vector<sim::EventLine>& events, std::int64_t target) {
  ObjectCounts c;
  for (const auto& e : events) {
    if (e.kind != "FRAME") continue;
    const std::int64_t n = e.integer("objects");
    c.min = c.frames == 0 ? n : std::min(c.min, n);
    c.max = c.frames == 0 ? n : std::max(c.max, n);
    ++c.frames;
    if (n == target) ++c.at;
  }
  return c;
}

class Suite {
 public:
  explicit Suite(SuiteOptions options) : o_(std::move(options)) {}

  Outcome run(int id) {
    try {
      switch (id) {
        case 1: return latency();
        case 2: return capacity();
        case 3: return throughput();
        case 4: return round_trip();
        case 5: return fuzzy();
        case 6: return separation();
        case 7: return tamper();
        case 8: return screening();
        case 9: return determinism();
      }
      return make(id, "unknown criterion", false, "");
    } catch (const std::exception& e) {
      return make(id, title(id), false, std::string("error: ") + e.what());
    }
  }

  static std::string title(int id) {
    static const std::map<int, std::string> kTitles{
        {1, "end-to-end alert latency"}, {2, "object capacity"},
        {3, "edge throughput"},          {4, "wire round trip"},
        {5, "fuzzy correctness"},        {6, "decision separation"},
        {7, "tamper evidence"},          {8, "fail-closed screening"},
        {9, "determinism"}};
    auto it = kTitles.find(id);
    return it == kTitles.end() ? "unknown criterion" : it->second;
  }

 private:
  OrchestratedRun orchestrate(const std::string& name, const Config& cfg) {
    OrchestratedRun r;
    r.dir = o_.work_dir / name;
    std::filesystem::remove_all(r.dir);
    sim::RunOptions opts;
    opts.cli = o_.cli;
    opts.config = cfg;
    opts.out_dir = r.dir;
    opts.seed = o_.seed;
    r.result = sim::run_scenario(opts);
    const auto events = r.dir / (std::string("edge-") + kCamera + ".events");
    if (std::filesystem::exists(events)) r.edge_events = sim::read_events(events);
    return r;
  }

  const OrchestratedRun& latency_run() {
    if (!latency_) latency_ = orchestrate("latency", latency_config());
    return *latency_;
  }

  const OrchestratedRun& capacity_run() {
    if (!capacity_) capacity_ = orchestrate("capacity", capacity_config());
    return *capacity_;
  }

  static std::string run_error(const OrchestratedRun& r) {
    return fmt::format("run failed: {} (logs in {})", r.result.error, r.dir.string());
  }

  Outcome latency() {
    const OrchestratedRun& r = latency_run();
    if (!r.result.ok) return make(1, title(1), false, run_error(r));
    const sim::Metrics& m = r.result.metrics;
    const double median = sim::percentile(m.alert_latency_ms, 0.5);
    const double p95 = sim::percentile(m.alert_latency_ms, 0.95);
    const bool pass = !m.alert_latency_ms.empty() && median < 500.0 && p95 < 750.0;
    return make(1, title(1), pass,
                fmt::format("median {:.3f} ms, p95 {:.3f} ms over {} alerts; frame-to-decision "
                            "median {:.3f} ms over {} frames",
                            median, p95, m.alert_latency_ms.size(),
                            sim::percentile(m.decision_ms, 0.5), m.decision_ms.size()));
  }

  Outcome capacity() {
    const OrchestratedRun& five = latency_run();
    if (!five.result.ok) return make(2, title(2), false, run_error(five));
    const sim::Metrics& m5 = five.result.metrics;
    const double median5 = sim::percentile(m5.alert_latency_ms, 0.5);
    const double p95_5 = sim::percentile(m5.alert_latency_ms, 0.95);
    const ObjectCounts c5 = count_objects(five.edge_events, 5);
    const bool five_ok =
        !m5.alert_latency_ms.empty() && median5 < 500.0 && p95_5 < 750.0 && c5.max == 5;

    const OrchestratedRun& ten = capacity_run();
    if (!ten.result.ok) return make(2, title(2), false, run_error(ten));
    const sim::Metrics& m10 = ten.result.metrics;
    const ObjectCounts c10 = count_objects(ten.edge_events, 10);
    std::int64_t edge_frames = 0, fog_frames = 0, missing = 0;
    for (const auto& [cam, cm] : m10.cameras) {
      edge_frames += cm.edge_frames;
      fog_frames += cm.fog_frames;
      missing += cm.frames_missing;
    }
    const bool ten_ok = edge_frames > 0 && missing == 0 && fog_frames == edge_frames &&
                        c10.max == 10;
    return make(2, title(2), five_ok && ten_ok,
                fmt::format("5 objects in {}/{} frames (max {}): median {:.3f} ms, p95 {:.3f} ms; "
                            "10 objects in {}/{} frames (max {}): {} of {} frames logged by the "
                            "fog, {} missing, alert median {:.3f} ms, p95 {:.3f} ms",
                            c5.at, c5.frames, c5.max, median5, p95_5, c10.at, c10.frames, c10.max,
                            fog_frames, edge_frames, missing,
                            sim::percentile(m10.alert_latency_ms, 0.5),
                            sim::percentile(m10.alert_latency_ms, 0.95)));
  }

  // Unpaced edge pipeline and broadcaster on the latency scenario.
  double max_rate_fps() const {
    const Config cfg = latency_config();
    const sim::ScenarioParams params = sim::ScenarioParams::from(cfg);
    const sim::Scenario scenario = sim::generate_scenario(params, o_.seed);
    SystemClock wall;
    edge::EdgeService service(
        std::make_unique<edge::EdgePipeline>(kCamera, edge::edge_config_from(cfg),
                                             sim::scenario_detector(scenario, kCamera, cfg),
                                             params.epoch),
        std::make_shared<wire::FrameBroadcaster>(), wall);
    edge::EdgeRunOptions run;
    run.frames = params.frames;
    run.subscribers = 0;
    run.paced = false;
    return service.run(run).fps();
  }

  Outcome throughput() {
    const OrchestratedRun& r = latency_run();
    const double max_fps = max_rate_fps();
    if (!r.result.ok) return make(3, title(3), false, run_error(r));
    auto it = r.result.metrics.cameras.find(kCamera);
    if (it == r.result.metrics.cameras.end()) return make(3, title(3), false, "no edge events");
    const sim::CameraMetrics& cm = it->second;
    const double seconds = cm.edge_frames > 1 ? (cm.edge_frames - 1) / cm.edge_fps : 0.0;
    const bool pass = cm.missed_deadlines == 0 && seconds >= 30.0 - 1e-9 &&
                      std::abs(cm.edge_fps - 5.0) <= 0.05;
    return make(3, title(3), pass,
                fmt::format("{} frames over {:.3f} s at {:.3f} FPS, {} missed deadlines; "
                            "max-rate {:.3f} FPS (tracked)",
                            cm.edge_frames, seconds, cm.edge_fps, cm.missed_deadlines, max_fps));
  }

  Outcome round_trip() {
    const auto t0 = Steady::now();
    std::mt19937_64 rng(o_.seed);
    std::vector<edge::FrameFeatureSet> frames;
    std::string stream;
    std::size_t exact = 0;
    for (int i = 0; i < 1000; ++i) {
      frames.push_back(random_frame(rng));
      const std::string bytes = wire::encode_frame(frames.back());
      const wire::DecodeResult decoded = wire::decode_frame(bytes);
      const auto* done = std::get_if<wire::Complete>(&decoded);
      if (done != nullptr && done->consumed == bytes.size() && done->frame == frames.back() &&
          wire::encode_frame(done->frame) == bytes) {
        ++exact;
      }
      stream += bytes;
    }
    constexpr int kPartitions = 10;
    int invariant = 0;
    std::uniform_int_distribution<std::size_t> chunk(1, 64);
    for (int p = 0; p < kPartitions; ++p) {
      wire::FrameAssembler assembler;
      std::vector<edge::FrameFeatureSet> got;
      std::string raw;
      for (std::size_t pos = 0; pos < stream.size();) {
        const std::size_t n = std::min(chunk(rng), stream.size() - pos);
        for (auto& b : assembler.feed(std::string_view(stream).substr(pos, n))) {
          got.push_back(std::move(b.frame));
          raw += b.raw;
        }
        pos += n;
      }
      if (got == frames && raw == stream && assembler.buffered() == 0) ++invariant;
    }
    const double secs = seconds_since(t0);
    return make(4, title(4), exact == 1000 && invariant == kPartitions && secs < 10.0,
                fmt::format("{}/1000 exact round trips, {}/{} chunk partitions of {} bytes "
                            "reassembled identically, {:.3f} s",
                            exact, invariant, kPartitions, stream.size(), secs));
  }

  Outcome fuzzy() {
    const fog::RuleBase rb = fog::default_rulebase();
    const fog::FuzzyVariable& out = rb.output();
    std::mt19937_64 rng(o_.seed);
    std::uniform_real_distribution<double> level(0.0, 1.0);
    std::bernoulli_distribution zero(0.3);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      std::vector<double> levels(out.size());
      for (auto& l : levels) l = zero(rng) ? 0.0 : level(rng);
      if (*std::max_element(levels.begin(), levels.end()) == 0.0) levels[rng() % levels.size()] = level(rng) + 1e-3;
      const double got = fog::defuzzify_centroid(fog::AggregateMembership(out, levels));
      const double want = oracle_centroid(out.apexes(), levels);
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }

    const fog::SuspicionAssessor assessor(rb, fog::FactorTable{}, 0.2);
    const std::size_t is = rb.input_index("speed"), ir = rb.input_index("dir_change_rate"),
                      id = rb.input_index("dwell"), ic = rb.input_index("context_weight");
    constexpr int kN = 21;
    auto axis = [&](std::size_t var, int k) {
      const auto& v = rb.inputs()[var];
      return v.lo() + (v.hi() - v.lo()) * k / (kN - 1);
    };
    std::vector<double> grid(kN * kN * kN * kN);
    auto at = [&](int a, int b, int c, int d) -> double& {
      return grid[((a * kN + b) * kN + c) * kN + d];
    };
    for (int a = 0; a < kN; ++a)
      for (int b = 0; b < kN; ++b)
        for (int c = 0; c < kN; ++c)
          for (int d = 0; d < kN; ++d) {
            at(a, b, c, d) = assessor.score(
                fog::ContextualInputs{axis(is, a), axis(ir, b), axis(id, c), axis(ic, d)});
          }
    int dwell_bad = 0, context_bad = 0;
    for (int a = 0; a < kN; ++a)
      for (int b = 0; b < kN; ++b)
        for (int c = 0; c < kN; ++c)
          for (int d = 0; d < kN; ++d) {
            const double v = at(a, b, c, d);
            if (c + 1 < kN && at(a, b, c + 1, d) < v - 1e-12) ++dwell_bad;
            if (d + 1 < kN && at(a, b, c, d + 1) < v - 1e-12) ++context_bad;
          }
    return make(5, title(5), worst <= 1e-6 && dwell_bad == 0 && context_bad == 0,
                fmt::format("worst relative centroid error {:.3e} over 100 aggregates; "
                            "{} dwell and {} context_weight violations on {} grid points",
                            worst, dwell_bad, context_bad, grid.size()));
  }

  Outcome separation() {
    const Config cfg = separation_config();
    const sim::Scenario scenario =
        sim::generate_scenario(sim::ScenarioParams::from(cfg), kSeparationSeed);
    const sim::ReplayResult r = sim::replay_scenario(scenario, cfg);
    double min_loiterer = 2.0, max_walker = -1.0;
    std::size_t loiterers = 0, walkers = 0;
    std::set<std::size_t> expected, alerted;
    std::vector<std::string> peaks;
    for (std::size_t i = 0; i < scenario.actors().size(); ++i) {
      const sim::ActorScript& a = scenario.actors()[i];
      peaks.push_back(fmt::format("{} {:.3f}", sim::to_string(a.kind), r.actor_peak[i]));
      if (a.kind == sim::ActorKind::kLoiterer) {
        ++loiterers;
        expected.insert(i);
        min_loiterer = std::min(min_loiterer, r.actor_peak[i]);
      } else if (a.kind == sim::ActorKind::kWalker) {
        ++walkers;
        max_walker = std::max(max_walker, r.actor_peak[i]);
      }
      if (r.actor_alerted[i]) alerted.insert(i);
    }
    std::size_t unattributed = 0;
    for (const auto& a : r.alerts) {
      if (r.track_actor.count({a.camera_id, a.object_id}) == 0) ++unattributed;
    }
    const bool pass = loiterers > 0 && walkers > 0 && min_loiterer > max_walker &&
                      alerted == expected && unattributed == 0;
    return make(6, title(6), pass,
                fmt::format("peaks {}; {} alerts, {} alerted actors, {} loiterers, {} "
                            "unattributed; precision {:.3f} recall {:.3f}",
                            fmt::join(peaks, ", "), r.alerts.size(), alerted.size(),
                            expected.size(), unattributed,
                            r.confusion.tp + r.confusion.fp == 0
                                ? 0.0
                                : double(r.confusion.tp) / double(r.confusion.tp + r.confusion.fp),
                            r.confusion.tp + r.confusion.fn == 0
                                ? 0.0
                                : double(r.confusion.tp) / double(r.confusion.tp + r.confusion.fn)));
  }

  Outcome tamper() {
    const KeyPair admin = KeyPair::from_name("admin");
    const KeyPair edge_key = KeyPair::from_name("edge-cam-01");
    const KeyPair fog_key = KeyPair::from_name("fog");
    std::vector<KeyPair> miners;
    ledger::GenesisConfig g;
    g.timestamp_ms = 1'772'460'000'000;
    g.block_interval_ms = 2000;
    for (int i = 1; i <= 3; ++i) {
      miners.push_back(KeyPair::from_name("miner-" + std::to_string(i)));
      g.miners.push_back({"miner-" + std::to_string(i), miners.back().public_key()});
    }
    g.identities = {admin.public_key(), edge_key.public_key(), fog_key.public_key()};
    g.grants = {{vid(admin), "", ledger::kRead | ledger::kManage, ledger::kNeverExpires},
                {vid(edge_key), "camera/cam-01", ledger::kManage, ledger::kNeverExpires}};

    ledger::Chain chain(g);
    for (std::int64_t slot = 1; slot <= 10; ++slot) {
      std::vector<ledger::Transaction> txs{
          ledger::make_transaction(
              edge_key, static_cast<std::uint64_t>(slot), "hia", "record",
              ledger::hia_record_args(ledger::hia_key(kCamera, slot),
                                      ledger::sha256("frame " + std::to_string(slot)))),
          ledger::make_transaction(
              admin, static_cast<std::uint64_t>(slot), "acl", "grant",
              ledger::acl_grant_args(vid(fog_key), wire::features_resource(kCamera), ledger::kRead,
                                     g.timestamp_ms + 3'600'000 + slot))};
      const ledger::Block b = chain.propose(miners[chain.scheduled_miner(slot)], slot, txs);
      if (b.transactions.size() != txs.size() || chain.validate_and_append(b)) {
        return make(7, title(7), false, "could not build the reference chain");
      }
    }
    std::vector<Bytes> encoded;
    for (std::uint64_t h = 1; h <= chain.height(); ++h) encoded.push_back(chain.block(h).encode());
    const bool clean = !ledger::validate_from_genesis(g, encoded).has_value();

    std::mt19937_64 rng(o_.seed);
    std::size_t flips = 0, caught = 0;
    for (std::size_t i = 0; i < encoded.size(); ++i) {
      for (std::size_t pos = 0; pos < encoded[i].size(); ++pos) {
        std::vector<Bytes> mutated = encoded;
        mutated[i][pos] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
        ++flips;
        if (ledger::validate_from_genesis(g, mutated) == i + 1) ++caught;
      }
    }

    // Hashed indices of real frames on a running ledger.
    ledger::GenesisConfig lg = g;
    lg.timestamp_ms = SystemClock().now().ms;
    lg.block_interval_ms = 100;
    lg.miners = {{"miner-1", miners[0].public_key()}};
    ledger::NodeOptions no;
    no.genesis = lg;
    no.miner = miners[0];
    ledger::LedgerNode node(no);
    node.start();
    security::LocalLedgerView view(node);
    SystemClock wall;
    security::SecurityServices services(view, wall);

    const Config cfg = latency_config();
    const sim::ScenarioParams params = sim::ScenarioParams::from(cfg);
    const sim::Scenario scenario = sim::generate_scenario(params, o_.seed);
    edge::EdgePipeline pipeline(kCamera, edge::edge_config_from(cfg),
                                sim::scenario_detector(scenario, kCamera, cfg), params.epoch);
    std::vector<std::pair<std::string, std::string>> frames;  // (key, bytes)
    for (std::int64_t k = 0; k < 12; ++k) {
      const edge::FrameResult fr = pipeline.step(k);
      if (k >= 10) frames.emplace_back(ledger::hia_key(kCamera, k), wire::encode_frame(fr.features));
    }
    std::size_t recorded = 0, authentic = 0, mutations = 0, tampered = 0;
    for (const auto& [key, bytes] : frames) {
      if (services.record_hashed_index(edge_key, key, as_bytes(bytes)).ok) ++recorded;
      if (services.verify_hashed_index(key, as_bytes(bytes)) == security::HiaStatus::kAuthentic) {
        ++authentic;
      }
      for (std::size_t pos = 0; pos < bytes.size(); ++pos) {
        for (int delta = 1; delta < 256; ++delta) {
          std::string m = bytes;
          m[pos] = static_cast<char>(m[pos] ^ delta);
          ++mutations;
          if (services.verify_hashed_index(key, as_bytes(m)) == security::HiaStatus::kTampered) {
            ++tampered;
          }
        }
      }
    }
    node.stop();
    const bool pass = clean && caught == flips && flips > 0 && recorded == frames.size() &&
                      authentic == frames.size() && tampered == mutations;
    return make(7, title(7), pass,
                fmt::format("chain of {} blocks: {}/{} single-bit flips caught at the mutated "
                            "height; frames: {}/{} single-byte mutations over {} recorded frames "
                            "flagged tampered, originals authentic {}/{}",
                            chain.height(), caught, flips, tampered, mutations, recorded,
                            authentic, frames.size()));
  }

  Outcome screening();
  Outcome determinism();

  SuiteOptions o_;
  std::optional<OrchestratedRun> latency_;
  std::optional<OrchestratedRun> capacity_;
};

Outcome Suite::screening() {
  const KeyPair miner = KeyPair::from_name("miner-1");
  const KeyPair admin = KeyPair::from_name("admin");
  const KeyPair edge_key = KeyPair::from_name("edge-cam-01");
  const KeyPair fog_key = KeyPair::from_name("fog");
  const KeyPair intruder = KeyPair::from_name("intruder");
  const KeyPair stranger = KeyPair::from_name("stranger");
  constexpr std::int64_t kInterval = 500;

  ledger::GenesisConfig g;
  g.timestamp_ms = SystemClock().now().ms;
  g.block_interval_ms = kInterval;
  g.miners = {{"miner-1", miner.public_key()}};
  g.identities = {admin.public_key(), edge_key.public_key(), fog_key.public_key(),
                  intruder.public_key()};
  g.grants = {{vid(admin), "", ledger::kRead | ledger::kManage, ledger::kNeverExpires},
              {vid(edge_key), "camera/cam-01", ledger::kManage, ledger::kNeverExpires}};
  ledger::NodeOptions no;
  no.genesis = g;
  no.miner = miner;
  ledger::LedgerNode node(no);
  node.start();

  ManualClock logical;
  logical.set(SystemClock().now());
  security::LocalLedgerView view(node);
  security::SecurityServices services(view, logical);
  security::AccessScreen screen(services, kInterval);
  auto frames = std::make_shared<wire::FrameBroadcaster>();
  wire::FeatureServer server(Endpoint{"127.0.0.1", 0},
                             [&](std::string_view token, std::string_view resource) {
                               return screen.check(token, resource, ledger::kRead);
                             });
  server.add_camera(kCamera, frames);
  server.set_clock(&logical);
  server.start();
  const Endpoint ep = server.endpoint();

  std::atomic<bool> publishing{true};
  std::thread publisher([&] {
    for (std::int64_t i = 0; publishing; ++i) {
      edge::FrameFeatureSet f;
      f.frame_index = i;
      f.camera_id = kCamera;
      f.timestamp = Timestamp{1'772'460'000'000 + 200 * i};
      edge::FeatureRecord r;
      r.object_id = Timestamp{1'772'460'000'000};
      r.speed = 0.5;
      r.dwell = 0.2 * static_cast<double>(i);
      r.bbox = edge::BoundingBox(10, 10, 40, 90);
      f.objects.emplace(r.object_id, r);
      frames->publish(f);
      std::this_thread::sleep_for(20ms);
    }
  });
  struct Stop {
    std::atomic<bool>& flag;
    std::thread& t;
    wire::FeatureServer& server;
    ledger::LedgerNode& node;
    ~Stop() {
      flag = false;
      if (t.joinable()) t.join();
      server.stop();
      node.stop();
    }
  } stop{publishing, publisher, server, node};

  // Fuzzed requests from callers without a read grant on the stream.
  std::mt19937_64 rng(o_.seed);
  auto random_text = [&](std::size_t n, std::string_view alphabet) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
    return s;
  };
  static constexpr std::string_view kHex = "0123456789abcdef";
  static constexpr std::string_view kPrintable =
      " !\"#$%&'()*+,-./0123456789:;<=>?@ABCDEFGHIJKLMNOPQRSTUVWXYZ[]^_`abcdefghijklmnopqrstuvwxyz{|}~";
  auto fuzzed_token = [&]() -> std::optional<std::string> {
    const std::int64_t now = logical.now().ms;
    switch (rng() % 10) {
      case 0: return std::nullopt;
      case 1: return random_text(rng() % 200, kPrintable);
      case 2:
        return random_text(1 + rng() % 70, kHex) + ":" + std::to_string(now) + ":" +
               random_text(128, kHex);
      case 3: return security::make_token(intruder, logical.now()).format();
      case 4: return security::make_token(stranger, logical.now()).format();
      case 5: {
        security::AccessToken t = security::make_token(fog_key, logical.now());
        t.signature[rng() % t.signature.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        return t.format();
      }
      case 6: {
        const std::int64_t skew = 30'001 + static_cast<std::int64_t>(rng() % 3'600'000);
        return security::make_token(fog_key, Timestamp{rng() % 2 ? now + skew : now - skew})
            .format();
      }
      case 7: {
        security::AccessToken t = security::make_token(intruder, logical.now());
        t.vid = vid(fog_key);
        return t.format();
      }
      case 8: return security::make_token(edge_key, logical.now()).format();
      default: return security::make_token(fog_key, logical.now()).format();
    }
  };
  auto fuzzed_path = [&]() -> std::string {
    switch (rng() % 6) {
      case 0: return "/stream/features";
      case 1: return "/stream/features?camera=cam-02";
      case 2: return "/stream/features?camera=" + random_text(1 + rng() % 12, kHex);
      default: return "/stream/features?camera=cam-01";
    }
  };

  constexpr int kRequests = 10'000;
  httplib::Client client(ep.host, ep.port);
  client.set_read_timeout(2s);
  std::uint64_t leaked = 0;
  int refused = 0, failed = 0;
  for (int i = 0; i < kRequests; ++i) {
    httplib::Headers headers;
    if (auto t = fuzzed_token()) headers.emplace(security::kTokenHeader, *t);
    int status = 0;
    auto res = client.Get(
        fuzzed_path(), headers,
        [&](const httplib::Response& r) {
          status = r.status;
          return true;
        },
        [&](const char*, std::size_t n) {
          if (status != 200) return true;
          leaked += n;
          return false;
        });
    if (status >= 400) {
      ++refused;
    } else if (!res && status == 0) {
      ++failed;
    }
  }
  const std::uint64_t served_before_grant = server.feature_bytes_sent();

  // A valid grant lets the same client stream. Block times follow the wall
  // clock, so the logical clock starts the grant from there.
  logical.set(SystemClock().now());
  const std::int64_t ttl_ms = 60'000;
  const ledger::Receipt grant = services.grant_access(admin, vid(fog_key),
                                                      wire::features_resource(kCamera),
                                                      ledger::kRead, ttl_ms);
  const security::AccessDecision allowed = services.check_access(
      security::make_token(fog_key, logical.now()), wire::features_resource(kCamera),
      ledger::kRead);
  auto fetch = [&](int want, std::chrono::milliseconds timeout) -> std::optional<int> {
    wire::FeatureClient fc(ep, timeout);
    int got = 0;
    try {
      fc.fetch(kCamera, security::make_token(fog_key, logical.now()).format(), nullptr,
               [&](const wire::FrameAssembler::Block&) { return ++got < want; });
    } catch (const wire::AccessDenied&) {
      return std::nullopt;
    }
    return got;
  };
  const std::optional<int> streamed = fetch(5, 5s);

  // A long-lived session opened while the grant holds.
  std::atomic<bool> session_over{false};
  std::atomic<int> session_frames{0};
  wire::FeatureClient long_client(ep, 5s);
  std::thread session([&] {
    try {
      long_client.fetch(kCamera, security::make_token(fog_key, logical.now()).format(), nullptr,
                        [&](const wire::FrameAssembler::Block&) {
                          ++session_frames;
                          return true;
                        });
    } catch (const std::exception&) {
    }
    session_over = true;
  });
  const auto t_session = Steady::now();
  while (session_frames < 3 && seconds_since(t_session) < 5.0) std::this_thread::sleep_for(10ms);
  const bool session_live = session_frames >= 3;

  // Walk the logical clock across the grant's expiry.
  const std::int64_t expiry = allowed.expiry_ms;
  logical.set(Timestamp{expiry - 1});
  const std::optional<int> just_before = fetch(1, 5s);
  std::optional<std::int64_t> denied_after;
  for (std::int64_t delay = 0; delay <= kInterval; delay += 50) {
    logical.set(Timestamp{expiry + delay});
    if (!fetch(1, 2s)) {
      denied_after = delay;
      break;
    }
  }
  const auto t_expired = Steady::now();
  while (!session_over && seconds_since(t_expired) < 3.0) std::this_thread::sleep_for(10ms);
  const bool session_closed = session_over.load();
  long_client.cancel();
  session.join();

  const bool pass = leaked == 0 && served_before_grant == 0 && refused == kRequests &&
                    grant.ok && allowed.allowed && streamed == 5 && session_live &&
                    just_before == 1 && denied_after && *denied_after <= kInterval &&
                    session_closed;
  return make(8, title(8), pass,
              fmt::format("{} fuzzed requests: {} refused, {} transport failures, {} feature "
                          "bytes served; grant {}, after grant streamed {} frames; new requests "
                          "denied {} ms after expiry, open session {} (block interval {} ms)",
                          kRequests, refused, failed, leaked + served_before_grant,
                          grant.ok && allowed.allowed ? "committed"
                                                      : grant.message + "/" + allowed.reason,
                          streamed.value_or(0),
                          denied_after ? std::to_string(*denied_after) : "never",
                          session_closed ? "closed" : "still open", kInterval));
}

Outcome Suite::determinism() {
  const std::filesystem::path root = o_.work_dir / "determinism";
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root);
  std::vector<std::string> alerts, digests;
  std::vector<int> codes;
  for (const char* name : {"a", "b"}) {
    const std::filesystem::path out = root / name;
    sim::ChildProcess child(std::string("sim-") + name,
                            {o_.cli.string(), "sim", "--seed", std::to_string(o_.seed), "--out",
                             out.string()},
                            root / (std::string(name) + ".log"));
    const std::optional<int> code = child.wait(600s);
    codes.push_back(code.value_or(-1));
    alerts.push_back(read_file(out / "alerts.log"));
    digests.push_back(read_file(out / "ledger-digest.txt"));
  }
  const std::size_t alert_lines = static_cast<std::size_t>(
      std::count(alerts[0].begin(), alerts[0].end(), '\n'));
  const bool pass = codes[0] == 0 && codes[1] == 0 && alert_lines > 0 && !digests[0].empty() &&
                    alerts[0] == alerts[1] && digests[0] == digests[1];
  std::string digest = digests[0];
  if (!digest.empty() && digest.back() == '\n') digest.pop_back();
  return make(9, title(9), pass,
              fmt::format("exit codes {} and {}; alert files {} ({} alerts); digests {} ({})",
                          codes[0], codes[1], alerts[0] == alerts[1] ? "identical" : "differ",
                          alert_lines, digests[0] == digests[1] ? "identical" : "differ",
                          digest));
}

}  // namespace

Config latency_config() {
  Config c = base_config();
  c.set("sim.duration_s", "60");
  c.set("sim.walkers", "1");
  c.set("sim.loiterers", "3");
  c.set("sim.wanderers", "1");
  c.set("fog.cooldown_s", "5");
  return c;
}

Config capacity_config() {
  Config c = latency_config();
  c.set("sim.duration_s", "30");
  c.set("sim.walkers", "2");
  c.set("sim.loiterers", "6");
  c.set("sim.wanderers", "2");
  return c;
}

Config separation_config() {
  Config c = base_config();
  c.set("sim.duration_s", "60");
  c.set("sim.walkers", "1");
  c.set("sim.loiterers", "1");
  c.set("sim.wanderers", "1");
  c.set("sim.respawn", "false");
  return c;
}

std::string format_outcome(const Outcome& o) {
  return fmt::format("{} criterion {} ({}): {}", o.pass ? "PASS" : "FAIL", o.id, o.title,
                     o.detail);
}

std::vector<Outcome> run_suite(const SuiteOptions& options, std::ostream& out) {
  Suite suite(options);
  std::vector<Outcome> outcomes;
  for (int id = 1; id <= kCriteria; ++id) {
    if (!options.only.empty() && options.only.count(id) == 0) continue;
    const auto t0 = Steady::now();
    outcomes.push_back(suite.run(id));
    out << format_outcome(outcomes.back())
        << fmt::format(" [{:.1f} s]", seconds_since(t0)) << std::endl;
  }
  return outcomes;
}

}  // namespace lisps::acceptance
