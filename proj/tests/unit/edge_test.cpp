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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "lisps/edge/detector.hpp"
#include "lisps/edge/pipeline.hpp"
#include "lisps/edge/tracker.hpp"
#include "lisps/wire/codec.hpp"
#include "printers.hpp"

namespace lisps::edge {
namespace {

Detection det(double x0, double y0, double x1, double y1, std::int64_t frame = 0) {
  return Detection{BoundingBox(x0, y0, x1, y1), 0.9, frame};
}

Track track_at(std::int64_t id_ms, std::vector<BoundingBox> boxes) {
  Track t{Timestamp{id_ms}, {}, TrackState::kActive};
  std::int64_t f = 0;
  for (auto& b : boxes) t.history.push_back({f++, b});
  return t;
}

TEST(BoundingBox, RejectsInvalidBoxes) {
  EXPECT_THROW(BoundingBox(10, 0, 10, 5), std::invalid_argument);
  EXPECT_THROW(BoundingBox(0, 5, 3, 1), std::invalid_argument);
  EXPECT_THROW(BoundingBox(-1, 0, 3, 1), std::invalid_argument);
  EXPECT_THROW(BoundingBox(0, 0, NAN, 1), std::invalid_argument);
  EXPECT_THROW(BoundingBox(0, 0, INFINITY, 1), std::invalid_argument);
}

TEST(Iou, IdentityDisjointAndHalfOverlap) {
  BoundingBox a(0, 0, 10, 10);
  EXPECT_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou(a, BoundingBox(20, 20, 30, 30)), 0.0);
  // inter = 5*10 = 50, union = 100 + 100 - 50 = 150
  EXPECT_DOUBLE_EQ(iou(a, BoundingBox(5, 0, 15, 10)), 50.0 / 150.0);
  // Touching edges have zero-area intersection.
  EXPECT_EQ(iou(a, BoundingBox(10, 0, 20, 10)), 0.0);
}

TEST(Iou, SymmetricBoundedAndReflexiveOnRandomBoxes) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.0, 100.0), size(0.5, 60.0);
  auto box = [&] {
    double x = pos(rng), y = pos(rng);
    return BoundingBox(x, y, x + size(rng), y + size(rng));
  };
  for (int i = 0; i < 5000; ++i) {
    BoundingBox a = box(), b = box();
    const double ab = iou(a, b);
    EXPECT_EQ(ab, iou(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_EQ(iou(a, a), 1.0);
  }
}

TEST(Associate, ColdStartMakesEveryDetectionNew) {
  std::vector<Detection> dets{det(0, 0, 10, 10)};
  auto a = associate({}, dets, 0.3);
  EXPECT_TRUE(a.matched.empty());
  EXPECT_EQ(a.unmatched_detections, std::vector<std::size_t>{0});
  EXPECT_TRUE(a.lost_tracks.empty());
}

TEST(Associate, MatchesAboveThreshold) {
  std::vector<Track> tracks{track_at(0, {BoundingBox(0, 0, 10, 10)})};
  std::vector<Detection> dets{det(1, 0, 11, 10)};
  // inter = 9*10 = 90, union = 200 - 90 = 110
  ASSERT_NEAR(iou(tracks[0].history.back().bbox, dets[0].bbox), 90.0 / 110.0, 1e-15);
  auto a = associate(tracks, dets, 0.5);
  ASSERT_EQ(a.matched.size(), 1u);
  EXPECT_EQ(a.matched[0], (std::pair<std::size_t, std::size_t>{0, 0}));
}

TEST(Associate, TrackWithoutDetectionIsLost) {
  std::vector<Track> tracks{track_at(0, {BoundingBox(0, 0, 10, 10)})};
  auto a = associate(tracks, {}, 0.3);
  EXPECT_EQ(a.lost_tracks, std::vector<std::size_t>{0});
}

TEST(Associate, NeverMatchesBelowThreshold) {
  std::vector<Track> tracks{track_at(0, {BoundingBox(0, 0, 10, 10)})};
  std::vector<Detection> dets{det(5, 0, 15, 10)};  // IoU 1/3
  auto a = associate(tracks, dets, 0.34);
  EXPECT_TRUE(a.matched.empty());
  EXPECT_EQ(a.lost_tracks.size(), 1u);
  EXPECT_EQ(a.unmatched_detections.size(), 1u);
}

TEST(Associate, TiesGoToLowerTrackId) {
  // Two tracks with identical boxes compete for one detection.
  std::vector<Track> tracks{track_at(500, {BoundingBox(0, 0, 10, 10)}),
                            track_at(200, {BoundingBox(0, 0, 10, 10)})};
  std::vector<Detection> dets{det(0, 0, 10, 10)};
  auto a = associate(tracks, dets, 0.3);
  ASSERT_EQ(a.matched.size(), 1u);
  EXPECT_EQ(a.matched[0].first, 1u);  // id 200
}

// Exhaustive oracle: among all matchings using only pairs at or above the
// threshold, pick the one whose IoU values, sorted descending, are
// lexicographically largest. Greedy descending selection must agree when
// IoU values are pairwise distinct.
std::vector<std::pair<std::size_t, std::size_t>> best_matching(
    const std::vector<std::vector<double>>& w, double threshold) {
  const std::size_t nt = w.size();
  const std::size_t nd = nt ? w[0].size() : 0;
  std::vector<std::pair<std::size_t, std::size_t>> best;
  std::vector<double> best_key;
  std::vector<std::pair<std::size_t, std::size_t>> cur;
  std::vector<bool> used(nd, false);
  std::function<void(std::size_t)> rec = [&](std::size_t t) {
    if (t == nt) {
      std::vector<double> key;
      for (auto [a, b] : cur) key.push_back(w[a][b]);
      std::sort(key.rbegin(), key.rend());
      if (best_key.empty() && best.empty() && key.empty()) return;
      if (std::lexicographical_compare(best_key.begin(), best_key.end(), key.begin(), key.end())) {
        best_key = key;
        best = cur;
      }
      return;
    }
    rec(t + 1);  // track t unmatched
    for (std::size_t d = 0; d < nd; ++d) {
      if (used[d] || w[t][d] < threshold || w[t][d] <= 0.0) continue;
      used[d] = true;
      cur.emplace_back(t, d);
      rec(t + 1);
      cur.pop_back();
      used[d] = false;
    }
  };
  rec(0);
  std::sort(best.begin(), best.end());
  return best;
}

TEST(Associate, GreedyEqualsExhaustiveOptimumOnSmallInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pos(0.0, 30.0), size(5.0, 20.0);
  std::uniform_int_distribution<int> count(0, 3);
  int checked = 0;
  for (int iter = 0; iter < 4000; ++iter) {
    std::vector<Track> tracks;
    std::vector<Detection> dets;
    const int nt = count(rng), nd = count(rng);
    for (int i = 0; i < nt; ++i) {
      double x = pos(rng), y = pos(rng);
      tracks.push_back(track_at(i * 1000, {BoundingBox(x, y, x + size(rng), y + size(rng))}));
    }
    for (int i = 0; i < nd; ++i) {
      double x = pos(rng), y = pos(rng);
      dets.push_back(det(x, y, x + size(rng), y + size(rng)));
    }
    std::vector<std::vector<double>> w(nt, std::vector<double>(nd));
    std::vector<double> all;
    for (int t = 0; t < nt; ++t) {
      for (int d = 0; d < nd; ++d) {
        w[t][d] = iou(tracks[t].history.back().bbox, dets[d].bbox);
        if (w[t][d] > 0.0) all.push_back(w[t][d]);
      }
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) continue;  // strict orderings only
    const double threshold = 0.1;
    auto a = associate(tracks, dets, threshold);
    auto got = a.matched;
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, best_matching(w, threshold));
    for (auto [t, d] : a.matched) EXPECT_GE(w[t][d], threshold);
    ++checked;
  }
  EXPECT_GT(checked, 3000);
}

TEST(ExtractFeatures, SingleEntryTrackHasNoMotion) {
  EdgeConfig cfg;
  auto t = track_at(1000, {BoundingBox(0, 0, 10, 10)});
  auto r = extract_features(t, Timestamp{1000}, cfg);
  EXPECT_EQ(r.speed, 0.0);
  EXPECT_EQ(r.direction_changes, 0);
  EXPECT_EQ(r.dwell, 0.0);
  EXPECT_EQ(r.object_id, Timestamp{1000});
}

TEST(ExtractFeatures, SpeedIsEuclideanStepLength) {
  EdgeConfig cfg;
  auto t = track_at(0, {BoundingBox(0, 0, 10, 10), BoundingBox(3, 4, 13, 14)});
  EXPECT_EQ(extract_features(t, Timestamp{200}, cfg).speed, 5.0);
}

TEST(ExtractFeatures, CountsHeadingReversal) {
  EdgeConfig cfg;  // 45 degrees
  // Steps: +x, +x, -x  -> headings 0, 0, 180 -> one change.
  auto t = track_at(0, {BoundingBox(0, 0, 10, 10), BoundingBox(5, 0, 15, 10),
                        BoundingBox(10, 0, 20, 10), BoundingBox(5, 0, 15, 10)});
  EXPECT_EQ(extract_features(t, Timestamp{600}, cfg).direction_changes, 1);
}

TEST(ExtractFeatures, IgnoresHeadingsOfStationarySteps) {
  EdgeConfig cfg;
  cfg.motion_epsilon = 0.5;
  // Jitter of 0.2 px in alternating directions must not count as turning.
  auto t = track_at(0, {BoundingBox(10, 10, 20, 20), BoundingBox(10.2, 10, 20.2, 20),
                        BoundingBox(10, 10, 20, 20), BoundingBox(10.2, 10, 20.2, 20)});
  EXPECT_EQ(extract_features(t, Timestamp{600}, cfg).direction_changes, 0);
}

TEST(ExtractFeatures, WindowedSpeedAveragesRecentSteps) {
  EdgeConfig cfg;
  cfg.speed_window = 2;
  auto t = track_at(0, {BoundingBox(0, 0, 10, 10), BoundingBox(3, 4, 13, 14),
                        BoundingBox(3, 5, 13, 15)});
  EXPECT_DOUBLE_EQ(extract_features(t, Timestamp{400}, cfg).speed, 3.0);
}

TEST(ProcessFrame, EmptyInputGivesEmptyFrame) {
  TrackerState state;
  state.camera_id = "cam-01";
  auto r = process_frame(state, {}, FrameMeta{0, Timestamp{0}}, EdgeConfig{});
  EXPECT_TRUE(r.features.objects.empty());
  EXPECT_EQ(r.features.camera_id, "cam-01");
}

TEST(ProcessFrame, RejectsOutOfOrderFrames) {
  TrackerState state;
  state.camera_id = "cam-01";
  auto r = process_frame(state, {}, FrameMeta{5, Timestamp{1000}}, EdgeConfig{});
  EXPECT_THROW(process_frame(r.state, {}, FrameMeta{5, Timestamp{1200}}, EdgeConfig{}),
               OrderingError);
  EXPECT_THROW(process_frame(r.state, {}, FrameMeta{4, Timestamp{1200}}, EdgeConfig{}),
               OrderingError);
}

TEST(ProcessFrame, DwellGrowsByOneFramePeriod) {
  EdgeConfig cfg;  // 5 fps -> 200 ms
  TrackerState state;
  state.camera_id = "cam-01";
  double prev = -1.0;
  for (std::int64_t f = 0; f < 50; ++f) {
    std::vector<Detection> dets{det(100 + f, 100, 140 + f, 180, f)};
    auto r = process_frame(state, dets, FrameMeta{f, frame_timestamp(Timestamp{0}, f, 5.0)}, cfg);
    ASSERT_EQ(r.features.objects.size(), 1u);
    const double dwell = r.features.objects.begin()->second.dwell;
    if (f > 0) {
      EXPECT_NEAR(dwell - prev, 0.2, 1e-12);
    }
    prev = dwell;
    state = r.state;
  }
}

TEST(ProcessFrame, SimultaneousNewObjectsGetDistinctIds) {
  TrackerState state;
  state.camera_id = "cam-01";
  std::vector<Detection> dets{det(0, 0, 10, 10), det(100, 100, 110, 110), det(200, 0, 210, 10)};
  auto r = process_frame(state, dets, FrameMeta{0, Timestamp{5000}}, EdgeConfig{});
  ASSERT_EQ(r.features.objects.size(), 3u);
  EXPECT_EQ(r.new_tracks[0].first, Timestamp{5000});
  EXPECT_EQ(r.new_tracks[1].first, Timestamp{5001});
  EXPECT_EQ(r.new_tracks[2].first, Timestamp{5002});
}

TEST(ProcessFrame, IdsAreNeverReusedAfterLoss) {
  TrackerState state;
  state.camera_id = "cam-01";
  EdgeConfig cfg;
  std::vector<ObjectId> seen;
  for (std::int64_t f = 0; f < 40; ++f) {
    std::vector<Detection> dets;
    if (f % 3 != 2) dets.push_back(det(50, 50, 60, 60, f));  // vanishes every third frame
    auto r = process_frame(state, dets, FrameMeta{f, Timestamp{f * 200}}, cfg);
    for (auto& [id, idx] : r.new_tracks) seen.push_back(id);
    state = r.state;
  }
  auto sorted = seen;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  EXPECT_GT(seen.size(), 5u);
}

// Hand-stepped replay of two objects: one walks right, one stands still
// and then leaves after frame 6.
TEST(ProcessFrame, MatchesHandSteppedReplayForTwoObjects) {
  EdgeConfig cfg;
  auto walker = [](std::int64_t f) { return BoundingBox(10.0 + 4 * f, 50, 50.0 + 4 * f, 130); };
  auto stander = [](std::int64_t) { return BoundingBox(300, 40, 340, 120); };

  TrackerState state;
  state.camera_id = "cam-01";
  std::vector<Track> oracle_tracks;  // the oracle's own bookkeeping
  for (std::int64_t f = 0; f < 10; ++f) {
    std::vector<Detection> dets{Detection{walker(f), 1.0, f}};
    if (f <= 6) dets.push_back(Detection{stander(f), 1.0, f});
    const Timestamp ts{1'000'000 + f * 200};

    auto r = process_frame(state, dets, FrameMeta{f, ts}, cfg);
    state = r.state;

    // Oracle: associate, then extend, drop and create by hand.
    auto a = associate(oracle_tracks, dets, cfg.iou_threshold);
    for (auto [t, d] : a.matched) oracle_tracks[t].history.push_back({f, dets[d].bbox});
    std::vector<Track> kept;
    for (std::size_t t = 0; t < oracle_tracks.size(); ++t) {
      if (std::find(a.lost_tracks.begin(), a.lost_tracks.end(), t) == a.lost_tracks.end())
        kept.push_back(oracle_tracks[t]);
    }
    std::int64_t next_id = ts.ms;
    for (std::size_t d : a.unmatched_detections)
      kept.push_back(Track{Timestamp{next_id++}, {{f, dets[d].bbox}}, TrackState::kActive});
    oracle_tracks = kept;

    FrameFeatureSet expected{f, "cam-01", ts, {}};
    for (const auto& t : oracle_tracks) expected.objects.emplace(t.id, extract_features(t, ts, cfg));
    EXPECT_EQ(r.features, expected) << "frame " << f;
    EXPECT_EQ(r.features.objects.size(), f <= 6 ? 2u : 1u);
  }
  // The walker moves 4 px/frame in a straight line.
  const auto& rec = state.active.front();
  EXPECT_EQ(extract_features(rec, Timestamp{1'001'800}, cfg).speed, 4.0);
  EXPECT_EQ(extract_features(rec, Timestamp{1'001'800}, cfg).direction_changes, 0);
}

TEST(ProcessFrame, ReplayIsByteIdentical) {
  auto script = std::make_shared<DetectionScript>();
  for (std::int64_t f = 0; f < 60; ++f) {
    script->push_back({det(10 + 3 * f, 20, 50 + 3 * f, 100, f), det(400, 300, 440, 380, f)});
  }
  auto run = [&] {
    EdgePipeline p("cam-01", EdgeConfig{}, make_detector("noisy", script, NoiseModel{1.5, 0.05, 42}),
                   Timestamp{0});
    std::string out;
    for (std::int64_t f = 0; f < 60; ++f) out += wire::encode_frame(p.step(f).features);
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(Detector, UnknownBackendIsRejected) {
  auto script = std::make_shared<DetectionScript>();
  EXPECT_THROW(make_detector("lcnn", script, {}), std::invalid_argument);
}

}  // namespace
}  // namespace lisps::edge
