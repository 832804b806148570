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

#include <memory>
#include <random>
#include <thread>

#include "lisps/ledger/node.hpp"
#include "lisps/security/http.hpp"
#include "lisps/security/screen.hpp"
#include "lisps/security/services.hpp"

namespace lisps::security {
namespace {

using ledger::KeyPair;

// SHA-256 of "FRAME 1\nCAM cam-01\nTS 100.000\nEND 1\n" from Python hashlib.
constexpr char kFrame1[] = "FRAME 1\nCAM cam-01\nTS 100.000\nEND 1\n";
constexpr char kFrame1Sha256[] = "1db2ff22f81a1543bf30855ffec9ac75c3d6dbdd8758b9cecde3a6d01d91c598";

std::string vid(const KeyPair& k) { return ledger::vid_of(ledger::address_of(k.public_key())); }

class SecurityTest : public ::testing::Test {
 protected:
  KeyPair miner = KeyPair::from_name("miner-a");
  KeyPair admin = KeyPair::from_name("admin");
  KeyPair edge = KeyPair::from_name("edge-cam-01");
  KeyPair fog = KeyPair::from_name("fog");
  KeyPair intruder = KeyPair::from_name("intruder");

  ledger::GenesisConfig genesis;
  std::unique_ptr<ledger::LedgerNode> node;
  std::unique_ptr<LocalLedgerView> view;
  ManualClock clock;
  std::unique_ptr<SecurityServices> services;

  void SetUp() override {
    genesis.timestamp_ms = SystemClock().now().ms;
    genesis.block_interval_ms = 50;
    genesis.miners = {{"A", miner.public_key()}};
    genesis.identities = {admin.public_key(), edge.public_key(), fog.public_key(),
                          intruder.public_key()};
    genesis.grants = {
        {vid(admin), "", ledger::kRead | ledger::kManage, ledger::kNeverExpires},
        {vid(edge), "camera/cam-01", ledger::kManage, ledger::kNeverExpires}};
    ledger::NodeOptions o;
    o.genesis = genesis;
    o.miner = miner;
    node = std::make_unique<ledger::LedgerNode>(o);
    clock.set(SystemClock().now());
    view = std::make_unique<LocalLedgerView>(*node);
    ServiceOptions so;
    so.poll_period = std::chrono::milliseconds(2);
    so.inclusion_timeout = std::chrono::milliseconds(5000);
    services = std::make_unique<SecurityServices>(*view, clock, so);
  }

  void TearDown() override { node->stop(); }

  void start() { node->start(true); }
};

TEST_F(SecurityTest, TokenFormatRoundTrip) {
  const AccessToken t = make_token(fog, Timestamp{1234567});
  EXPECT_EQ(t.vid, vid(fog));
  EXPECT_EQ(t.nonce, "1234567");
  auto back = AccessToken::parse(t.format());
  ASSERT_TRUE(back);
  EXPECT_EQ(back->format(), t.format());
  EXPECT_EQ(back->nonce_ms(), 1234567);
  EXPECT_FALSE(AccessToken::parse("abc:123"));
  EXPECT_FALSE(AccessToken::parse("abc:123:zz"));
  EXPECT_FALSE(AccessToken::parse(":123:" + std::string(128, 'a')));
  AccessToken odd = t;
  odd.nonce = "0123";
  EXPECT_FALSE(odd.nonce_ms());
}

TEST_F(SecurityTest, RegisterFreshAddressThenRejectDuplicate) {
  start();
  const KeyPair cam = KeyPair::from_name("camera-02");
  const auto addr = ledger::address_of(cam.public_key());
  const RegistrationResult r = services->register_entity(admin, addr, cam.public_key());
  ASSERT_TRUE(r.receipt.ok) << r.receipt.message;
  EXPECT_EQ(r.vid, ledger::vid_of(addr));
  ASSERT_TRUE(view->identity(r.vid));
  EXPECT_EQ(view->identity(r.vid)->public_key, cam.public_key());

  const RegistrationResult again = services->register_entity(admin, addr, cam.public_key());
  EXPECT_FALSE(again.receipt.ok);
  EXPECT_EQ(again.receipt.message, "already registered");
  EXPECT_EQ(again.vid, "");

  const RegistrationResult by_intruder =
      services->register_entity(intruder, ledger::address_of(KeyPair::from_name("x").public_key()),
                                KeyPair::from_name("x").public_key());
  EXPECT_FALSE(by_intruder.receipt.ok);
}

TEST_F(SecurityTest, SameAddressOnTwoNodesGivesTheSameVid) {
  // A second, observer node syncs from the first.
  ledger::NodeOptions o;
  o.genesis = genesis;
  o.sync_period_ms = 10;
  ledger::LedgerNode observer(o);
  observer.add_peer({"127.0.0.1", node->bind()});
  start();
  observer.start(true);

  const KeyPair cam = KeyPair::from_name("camera-03");
  const RegistrationResult r =
      services->register_entity(admin, ledger::address_of(cam.public_key()), cam.public_key());
  ASSERT_TRUE(r.receipt.ok);
  LocalLedgerView other(observer);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
  while (!other.identity(r.vid) && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ASSERT_TRUE(other.identity(r.vid));
  EXPECT_EQ(*other.identity(r.vid), *view->identity(r.vid));
  // Independent derivation: first 16 hex chars of SHA-256(SHA-256(key)).
  EXPECT_EQ(r.vid, to_hex(ledger::sha256(ByteView(ledger::sha256(ByteView(cam.public_key())))))
                       .substr(0, 16));
  observer.stop();
}

TEST_F(SecurityTest, AuthenticateVerdicts) {
  const AccessToken t = make_token(fog, clock.now());
  EXPECT_EQ(services->authenticate(t.vid, t.nonce, t.signature), AuthVerdict::kAccept);
  const AccessToken wrong = make_token(intruder, clock.now());
  EXPECT_EQ(services->authenticate(t.vid, t.nonce, wrong.signature), AuthVerdict::kBadSignature);
  EXPECT_EQ(services->authenticate(t.vid, t.nonce + "1", t.signature), AuthVerdict::kBadSignature);
  const AccessToken stranger = make_token(KeyPair::from_name("stranger"), clock.now());
  EXPECT_EQ(services->authenticate(stranger.vid, stranger.nonce, stranger.signature),
            AuthVerdict::kUnregistered);
}

TEST_F(SecurityTest, RecordAndVerifyHashedIndex) {
  start();
  const ledger::Receipt r = services->record_hashed_index(edge, "cam-01/frame/1", as_bytes(kFrame1));
  ASSERT_TRUE(r.ok) << r.message;
  EXPECT_EQ(to_hex(view->hia("cam-01/frame/1")->hash), kFrame1Sha256);
  EXPECT_EQ(view->hia("cam-01/frame/1")->recorder, vid(edge));

  std::string altered = kFrame1;
  altered[10] = 'X';
  const ledger::Receipt again = services->record_hashed_index(edge, "cam-01/frame/1", as_bytes(altered));
  EXPECT_FALSE(again.ok);
  EXPECT_EQ(again.message, "already recorded");
  EXPECT_EQ(to_hex(view->hia("cam-01/frame/1")->hash), kFrame1Sha256);

  const ledger::Receipt denied = services->record_hashed_index(intruder, "cam-01/frame/2", as_bytes(kFrame1));
  EXPECT_FALSE(denied.ok);
  EXPECT_EQ(denied.message, "denied: no manage grant on 'camera/cam-01'");
  EXPECT_FALSE(view->hia("cam-01/frame/2"));

  EXPECT_EQ(services->verify_hashed_index("cam-01/frame/1", as_bytes(kFrame1)), HiaStatus::kAuthentic);
  EXPECT_EQ(services->verify_hashed_index("cam-01/frame/2", as_bytes(kFrame1)), HiaStatus::kUnknown);
  EXPECT_EQ(services->verify_hashed_index("cam-01/frame/1", as_bytes(altered)), HiaStatus::kTampered);
}

TEST_F(SecurityTest, EverySingleByteMutationIsTampered) {
  start();
  const std::string frame =
      "FRAME 4\nCAM cam-01\nTS 100.800\n"
      "OBJ 90.200 SPEED=5.000 DIRCH=1 DWELL=9.800 BBOX=0.000,0.000,10.000,10.000\nEND 4\n";
  ASSERT_TRUE(services->record_hashed_index(edge, "cam-01/frame/4", as_bytes(frame)).ok);
  std::mt19937 rng(3);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      std::string m = frame;
      const auto delta = static_cast<char>(1 + rng() % 255);
      m[i] = static_cast<char>(m[i] ^ delta);
      ASSERT_EQ(services->verify_hashed_index("cam-01/frame/4", as_bytes(m)), HiaStatus::kTampered)
          << i;
    }
  }
  EXPECT_EQ(services->verify_hashed_index("cam-01/frame/4", as_bytes(frame)), HiaStatus::kAuthentic);
}

TEST_F(SecurityTest, GrantCheckAndExpiry) {
  start();
  const std::string res = "camera/cam-01/features";
  const AccessToken fog_token = make_token(fog, clock.now());
  EXPECT_EQ(services->check_access(fog_token, res, ledger::kRead).reason, "no grant");

  const ledger::Receipt by_fog = services->grant_access(fog, vid(fog), res, ledger::kRead, 60'000);
  EXPECT_FALSE(by_fog.ok);
  EXPECT_EQ(services->check_access(fog_token, res, ledger::kRead).reason, "no grant");

  const ledger::Receipt g = services->grant_access(admin, vid(fog), res, ledger::kRead, 60'000);
  ASSERT_TRUE(g.ok) << g.message;
  const AccessDecision d = services->check_access(fog_token, res, ledger::kRead);
  EXPECT_TRUE(d.allowed) << d.reason;
  EXPECT_EQ(d.expiry_ms, clock.now().ms + 60'000);
  EXPECT_EQ(services->check_access(fog_token, res, ledger::kManage).reason, "no grant");
  EXPECT_EQ(services->check_access(fog_token, "camera/cam-02/features", ledger::kRead).reason,
            "no grant");

  clock.advance_ms(61'000);
  const AccessToken later = make_token(fog, clock.now());
  EXPECT_EQ(services->check_access(later, res, ledger::kRead).reason, "no grant");
}

TEST_F(SecurityTest, CheckAccessDeniesBadTokens) {
  start();
  ASSERT_TRUE(services->grant_access(admin, vid(fog), "camera", ledger::kRead, ledger::kNeverExpires).ok);
  AccessToken t = make_token(fog, clock.now());
  EXPECT_TRUE(services->check_access(t, "camera/cam-01/features", ledger::kRead).allowed);

  AccessToken stale = make_token(fog, Timestamp{clock.now().ms - 30'001});
  EXPECT_EQ(services->check_access(stale, "camera/cam-01/features", ledger::kRead).reason,
            "stale token");
  AccessToken future = make_token(fog, Timestamp{clock.now().ms + 30'001});
  EXPECT_EQ(services->check_access(future, "camera/cam-01/features", ledger::kRead).reason,
            "stale token");
  AccessToken forged = t;
  forged.signature[0] ^= 1;
  EXPECT_EQ(services->check_access(forged, "camera/cam-01/features", ledger::kRead).reason,
            "bad signature");
  AccessToken impostor = make_token(intruder, clock.now());
  impostor.vid = vid(fog);
  EXPECT_EQ(services->check_access(impostor, "camera/cam-01/features", ledger::kRead).reason,
            "bad signature");
  AccessToken unknown = make_token(KeyPair::from_name("nobody"), clock.now());
  EXPECT_EQ(services->check_access(unknown, "camera/cam-01/features", ledger::kRead).reason,
            "unregistered");
}

TEST_F(SecurityTest, LedgerDownFailsClosed) {
  start();
  ASSERT_TRUE(services->grant_access(admin, vid(fog), "camera", ledger::kRead, ledger::kNeverExpires).ok);
  HttpLedgerView remote(node->endpoint());
  SecurityServices over_http(remote, clock);
  const AccessToken t = make_token(fog, clock.now());
  EXPECT_TRUE(over_http.check_access(t, "camera/cam-01/features", ledger::kRead).allowed);
  node->stop();
  const AccessDecision d = over_http.check_access(t, "camera/cam-01/features", ledger::kRead);
  EXPECT_FALSE(d.allowed);
  EXPECT_EQ(d.reason, "ledger unavailable");
}

TEST_F(SecurityTest, ScreenCachesAllowsWithinIntervalAndExpiry) {
  start();
  const std::string res = "camera/cam-01/features";
  AccessScreen screen(*services, 2000);
  const AccessToken t = make_token(fog, clock.now());

  EXPECT_EQ(screen.check("", res, ledger::kRead).reason, "missing token");
  EXPECT_EQ(screen.check("garbage", res, ledger::kRead).reason, "malformed token");
  EXPECT_EQ(screen.check(t.format(), res, ledger::kRead).reason, "no grant");
  EXPECT_EQ(screen.cached(), 0u);

  ASSERT_TRUE(services->grant_access(admin, vid(fog), res, ledger::kRead, 5'000).ok);
  EXPECT_TRUE(screen.check(t.format(), res, ledger::kRead).allowed);
  EXPECT_EQ(screen.cached(), 1u);
  clock.advance_ms(1'999);
  EXPECT_TRUE(screen.check(t.format(), res, ledger::kRead).allowed);

  // Past expiry the cached allow no longer applies.
  clock.advance_ms(3'001);
  const AccessToken t2 = make_token(fog, clock.now());
  EXPECT_FALSE(screen.check(t.format(), res, ledger::kRead).allowed);
  EXPECT_FALSE(screen.check(t2.format(), res, ledger::kRead).allowed);
}

TEST_F(SecurityTest, HttpEndpoints) {
  node->mount([&](httplib::Server& s) { mount_security_routes(s, *services, admin); });
  start();
  SecurityClient client(node->endpoint());

  const KeyPair cam = KeyPair::from_name("camera-09");
  const RegistrationResult reg = client.register_key(cam.public_key());
  ASSERT_TRUE(reg.receipt.ok) << reg.receipt.message;
  EXPECT_EQ(reg.vid, vid(cam));
  EXPECT_EQ(client.register_key(cam.public_key()).receipt.message, "already registered");

  EXPECT_EQ(client.authenticate(make_token(cam, clock.now())), AuthVerdict::kAccept);
  AccessToken bad = make_token(cam, clock.now());
  bad.signature[5] ^= 1;
  EXPECT_EQ(client.authenticate(bad), AuthVerdict::kBadSignature);
  EXPECT_EQ(client.authenticate(make_token(KeyPair::from_name("ghost"), clock.now())),
            AuthVerdict::kUnregistered);

  const auto rec = services->sign_next(
      edge, "hia", "record", ledger::hia_record_args("cam-01/frame/7", ledger::sha256(kFrame1)));
  EXPECT_TRUE(client.record(rec).ok);
  EXPECT_EQ(client.verify("cam-01/frame/7", as_bytes(kFrame1)), HiaStatus::kAuthentic);
  EXPECT_EQ(client.verify("cam-01/frame/7", as_bytes("x")), HiaStatus::kTampered);
  EXPECT_EQ(client.verify("cam-01/frame/8", as_bytes(kFrame1)), HiaStatus::kUnknown);

  const AccessToken t = make_token(fog, clock.now());
  EXPECT_EQ(client.check(t, "camera/cam-01/features", "read").reason, "no grant");
  const auto grant = services->sign_next(
      admin, "acl", "grant",
      ledger::acl_grant_args(vid(fog), "camera/cam-01/features", ledger::kRead, ledger::kNeverExpires));
  EXPECT_TRUE(client.grant(grant).ok);
  EXPECT_TRUE(client.check(t, "camera/cam-01/features", "read").allowed);
  EXPECT_EQ(client.check(t, "camera/cam-01/features", "write").reason, "bad actions");
  EXPECT_EQ(client.check(make_token(intruder, clock.now()), "camera/cam-01/features", "read").reason,
            "no grant");

  node->stop();
  EXPECT_EQ(client.check(t, "camera/cam-01/features", "read").reason, "ledger unavailable");
}

TEST(ParseActions, AcceptsNamesAndMasks) {
  EXPECT_EQ(parse_actions("read"), ledger::kRead);
  EXPECT_EQ(parse_actions("manage"), ledger::kManage);
  EXPECT_EQ(parse_actions("read,manage"), 3u);
  EXPECT_EQ(parse_actions("2"), 2u);
  EXPECT_FALSE(parse_actions("4"));
  EXPECT_FALSE(parse_actions("0"));
  EXPECT_FALSE(parse_actions(""));
}

}  // namespace
}  // namespace lisps::security
