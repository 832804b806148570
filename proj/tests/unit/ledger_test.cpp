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

#include <random>

#include "lisps/ledger/chain.hpp"
#include "lisps/ledger/encoding.hpp"

namespace lisps::ledger {
namespace {

// Reference values from Python hashlib and the `cryptography` package.
constexpr char kGenesisAtZero[] = "b1b897d21bcd2e7dc40a70c459cee458b3a20a88e80deb7dac08284b4baba3c5";
constexpr char kGenesisAt1760000000000[] =
    "b76d613801d2142b3fc59880a0f2a3810829307a038e7f8c1893cff6bf8cebee";
constexpr char kEmptyTxHash[] = "df3f619804a92fdb4057192dc43dd748ea778adc52bc498ce80524c014b81119";
constexpr char kAdminPub[] = "cc7398f067a5370e97dac90949ec73802995847d117ea1904d7812beb56c6623";
constexpr char kAdminAddr[] = "1e78a0bb58382a3bdd719d0b56af09bb4d241aac60042707d377d9d8d6bcccc5";
constexpr char kAdminVid[] = "da6048ffc32842ef";
constexpr char kAdminSigHello[] =
    "2ac36ce58f5b25c6e0cbfbf65088c632279b18fd5e5be56a1f1f9aaff491d27f"
    "4f225ffccb4ca918df464cf268bfd3e1804eb294e2572e37a201939375b70b05";

constexpr std::int64_t kT0 = 1'760'000'000'000;

struct World {
  KeyPair a = KeyPair::from_name("miner-a");
  KeyPair b = KeyPair::from_name("miner-b");
  KeyPair c = KeyPair::from_name("miner-c");
  KeyPair admin = KeyPair::from_name("admin");
  KeyPair edge = KeyPair::from_name("edge-cam-01");
  KeyPair fog = KeyPair::from_name("fog");
  KeyPair outsider = KeyPair::from_name("outsider");

  std::string vid(const KeyPair& k) const { return vid_of(address_of(k.public_key())); }

  GenesisConfig genesis() const {
    GenesisConfig g;
    g.timestamp_ms = kT0;
    g.block_interval_ms = 2000;
    g.miners = {{"A", a.public_key()}, {"B", b.public_key()}, {"C", c.public_key()}};
    g.identities = {admin.public_key(), edge.public_key(), fog.public_key()};
    g.grants = {{vid(admin), "", kRead | kManage, kNeverExpires}};
    return g;
  }

  const KeyPair& miner_for(const Chain& ch, std::int64_t slot) const {
    const std::size_t i = ch.scheduled_miner(slot);
    return i == 0 ? a : i == 1 ? b : c;
  }
};

TEST(Crypto, MatchesIndependentReferenceVectors) {
  const KeyPair admin = KeyPair::from_name("admin");
  EXPECT_EQ(to_hex(admin.public_key()), kAdminPub);
  EXPECT_EQ(to_hex(address_of(admin.public_key())), kAdminAddr);
  EXPECT_EQ(vid_of(address_of(admin.public_key())), kAdminVid);
  EXPECT_EQ(to_hex(admin.sign(as_bytes("hello"))), kAdminSigHello);
  EXPECT_TRUE(verify(admin.public_key(), as_bytes("hello"), admin.sign(as_bytes("hello"))));
  EXPECT_FALSE(verify(admin.public_key(), as_bytes("hellp"), admin.sign(as_bytes("hello"))));
}

TEST(HashBlock, GenesisMatchesGoldenVector) {
  EXPECT_EQ(to_hex(transactions_hash({})), kEmptyTxHash);
  EXPECT_EQ(to_hex(genesis_block(0).hash()), kGenesisAtZero);
  EXPECT_EQ(to_hex(genesis_block(kT0).hash()), kGenesisAt1760000000000);
}

TEST(HashBlock, AnySingleBitFlipInHeaderChangesDigest) {
  World w;
  Chain ch(w.genesis());
  auto tx = make_transaction(w.admin, 1, "acl", "grant",
                             acl_grant_args(w.vid(w.fog), "camera/cam-01/features", kRead, kT0 + 60'000));
  const Block blk = ch.propose(w.a, 1, std::vector{tx});
  const Bytes header = blk.header_encoding();
  const Hash32 digest = blk.hash();
  for (std::size_t bit = 0; bit < header.size() * 8; ++bit) {
    Bytes m = header;
    m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_NE(sha256(ByteView(m)), digest) << bit;
  }
}

TEST(HashBlock, EqualBlocksHaveEqualDigests) {
  World w;
  Chain ch(w.genesis());
  const Block x = ch.propose(w.a, 1, {});
  const Block y = Block::decode(x.encode());
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.hash(), y.hash());
}

TEST(Encoding, RoundTripsTransactionsAndBlocks) {
  World w;
  Chain ch(w.genesis());
  std::vector<Transaction> txs;
  for (std::uint64_t n = 1; n <= 3; ++n) {
    txs.push_back(make_transaction(w.edge, n, "hia", "record",
                                   hia_record_args(hia_key("cam-01", n), sha256("frame"))));
  }
  const Block b = ch.propose(w.a, 1, txs);
  EXPECT_EQ(Block::decode(b.encode()), b);
  EXPECT_EQ(Transaction::decode(txs[0].encode()), txs[0]);
  Bytes trailing = b.encode();
  trailing.push_back(0);
  EXPECT_THROW(Block::decode(trailing), EncodingError);
}

TEST(Propose, RoundRobinRotationAcrossHeights) {
  World w;
  Chain ch(w.genesis());
  const std::vector<const KeyPair*> expected{&w.a, &w.b, &w.c, &w.a};
  for (std::int64_t h = 1; h <= 4; ++h) {
    EXPECT_EQ(ch.scheduled_miner(h), static_cast<std::size_t>((h - 1) % 3));
    const Block b = ch.propose(*expected[h - 1], h, {});
    EXPECT_EQ(b.proposer, address_of(expected[h - 1]->public_key()));
    ASSERT_EQ(ch.validate_and_append(b), std::nullopt) << h;
  }
  EXPECT_EQ(ch.height(), 4u);
}

TEST(Propose, OutOfTurnProposalIsRejected) {
  World w;
  Chain ch(w.genesis());
  EXPECT_THROW(ch.propose(w.c, 1, {}), std::logic_error);
  // Forge C's block for slot 1 by hand.
  Block b;
  b.height = 1;
  b.previous_hash = ch.head().hash();
  b.timestamp_ms = ch.slot_start(1);
  b.transactions_hash = transactions_hash({});
  b.proposer = address_of(w.c.public_key());
  b.signature = w.c.sign(b.hash());
  EXPECT_EQ(ch.validate_and_append(b), RejectReason::kOutOfTurn);
  EXPECT_EQ(ch.height(), 0u);
}

TEST(Propose, NonMemberBlocksAreNeverAccepted) {
  World w;
  Chain ch(w.genesis());
  for (std::int64_t slot = 1; slot <= 3; ++slot) {
    Block b;
    b.height = 1;
    b.previous_hash = ch.head().hash();
    b.timestamp_ms = ch.slot_start(slot);
    b.transactions_hash = transactions_hash({});
    b.proposer = address_of(w.outsider.public_key());
    b.signature = w.outsider.sign(b.hash());
    EXPECT_EQ(ch.validate_and_append(b), RejectReason::kOutOfTurn);
    // Claiming to be the slot owner fails the signature check instead.
    b.proposer = address_of(w.miner_for(ch, slot).public_key());
    b.signature = w.outsider.sign(b.hash());
    EXPECT_EQ(ch.validate_and_append(b), RejectReason::kBadBlockSignature);
  }
}

TEST(Propose, BadSignatureTransactionIsExcluded) {
  World w;
  Chain ch(w.genesis());
  auto good = make_transaction(w.edge, 1, "hia", "record",
                               hia_record_args("cam-01/frame/0", sha256("x")));
  auto bad = make_transaction(w.edge, 2, "hia", "record",
                              hia_record_args("cam-01/frame/1", sha256("y")));
  bad.signature[0] ^= 1;
  std::vector<Transaction> excluded;
  const Block b = ch.propose(w.a, 1, std::vector{good, bad}, &excluded);
  ASSERT_EQ(b.transactions.size(), 1u);
  EXPECT_EQ(b.transactions[0], good);
  ASSERT_EQ(excluded.size(), 1u);
  EXPECT_EQ(excluded[0], bad);
}

TEST(ValidateAndAppend, EachViolationHasADistinctReason) {
  World w;
  Chain ch(w.genesis());
  ASSERT_EQ(ch.validate_and_append(ch.propose(w.a, 1, {})), std::nullopt);
  ASSERT_EQ(ch.validate_and_append(ch.propose(w.b, 2, {})), std::nullopt);
  const Block good = ch.propose(w.c, 3, {});

  auto resign = [&](Block b, const KeyPair& k) {
    b.signature = k.sign(b.hash());
    return b;
  };

  Block x = good;
  x.height = 5;
  EXPECT_EQ(ch.validate(resign(x, w.c)), RejectReason::kBadHeight);

  x = good;
  x.previous_hash = ch.block(1).hash();  // height - 2
  EXPECT_EQ(ch.validate(resign(x, w.c)), RejectReason::kBrokenLinkage);

  x = good;
  x.timestamp_ms += 1;
  EXPECT_EQ(ch.validate(resign(x, w.c)), RejectReason::kBadSlot);
  x.timestamp_ms = ch.slot_start(2);  // not after the parent's slot
  EXPECT_EQ(ch.validate(resign(x, w.b)), RejectReason::kBadSlot);

  x = good;
  x.signature[10] ^= 4;
  EXPECT_EQ(ch.validate(x), RejectReason::kBadBlockSignature);

  x = good;
  x.transactions.push_back(make_transaction(w.edge, 1, "hia", "record",
                                            hia_record_args("cam-01/frame/0", sha256("x"))));
  EXPECT_EQ(ch.validate(x), RejectReason::kBadTransactionsHash);

  auto skip = make_transaction(w.edge, 2, "hia", "record",
                               hia_record_args("cam-01/frame/0", sha256("x")));
  x = good;
  x.transactions = {skip};
  x.transactions_hash = transactions_hash(x.transactions);
  EXPECT_EQ(ch.validate(resign(x, w.c)), RejectReason::kBadNonce);

  auto forged = skip;
  forged.nonce = 1;  // signature no longer matches
  x.transactions = {forged};
  x.transactions_hash = transactions_hash(x.transactions);
  EXPECT_EQ(ch.validate(resign(x, w.c)), RejectReason::kBadTransactionSignature);

  const std::uint64_t before = ch.height();
  const Hash32 state_before = ch.state().digest();
  EXPECT_TRUE(ch.validate_and_append(resign(x, w.c)).has_value());
  EXPECT_EQ(ch.height(), before);
  EXPECT_EQ(ch.state().digest(), state_before);

  EXPECT_EQ(ch.validate_and_append(good), std::nullopt);
  EXPECT_EQ(ch.height(), 3u);
}

TEST(ValidateAndAppend, SilentMinerLeavesGapsOnlyAtItsSlots) {
  World w;
  Chain ch(w.genesis());
  std::vector<std::int64_t> produced;
  for (std::int64_t slot = 1; slot <= 12; ++slot) {
    const KeyPair& m = w.miner_for(ch, slot);
    if (&m == &w.b) continue;  // B is silent
    ASSERT_EQ(ch.validate_and_append(ch.propose(m, slot, {})), std::nullopt);
    produced.push_back(slot);
  }
  EXPECT_EQ(produced, (std::vector<std::int64_t>{1, 3, 4, 6, 7, 9, 10, 12}));
  EXPECT_EQ(ch.height(), 8u);
}

TEST(Contracts, RegisterAddsVid) {
  World w;
  Chain ch(w.genesis());
  const KeyPair fresh = KeyPair::from_name("camera-02");
  const Address addr = address_of(fresh.public_key());
  auto tx = make_transaction(w.admin, 1, "registry", "register", register_args(addr, fresh.public_key()));
  ASSERT_EQ(ch.validate_and_append(ch.propose(w.a, 1, std::vector{tx})), std::nullopt);
  ASSERT_NE(ch.state().identity(addr), nullptr);
  EXPECT_EQ(ch.state().identity(addr)->vid, vid_of(addr));
  EXPECT_TRUE(ch.receipt(tx.id())->ok);

  auto again = make_transaction(w.admin, 2, "registry", "register", register_args(addr, fresh.public_key()));
  ASSERT_EQ(ch.validate_and_append(ch.propose(w.b, 2, std::vector{again})), std::nullopt);
  EXPECT_FALSE(ch.receipt(again.id())->ok);
  EXPECT_EQ(ch.receipt(again.id())->message, "already registered");
}

TEST(Contracts, RegistrationRequiresRegistryManage) {
  World w;
  Chain ch(w.genesis());
  const KeyPair fresh = KeyPair::from_name("camera-02");
  auto tx = make_transaction(w.edge, 1, "registry", "register",
                             register_args(address_of(fresh.public_key()), fresh.public_key()));
  ASSERT_EQ(ch.validate_and_append(ch.propose(w.a, 1, std::vector{tx})), std::nullopt);
  EXPECT_FALSE(ch.receipt(tx.id())->ok);
  EXPECT_EQ(ch.state().identity(address_of(fresh.public_key())), nullptr);
}

TEST(Contracts, HiaIsWriteOnce) {
  World w;
  Chain ch(w.genesis());
  auto grant = make_transaction(w.admin, 1, "acl", "grant",
                                acl_grant_args(w.vid(w.edge), "camera/cam-01", kManage, kNeverExpires));
  auto first = make_transaction(w.edge, 1, "hia", "record", hia_record_args("cam-01/frame/1", sha256("a")));
  auto second = make_transaction(w.edge, 2, "hia", "record", hia_record_args("cam-01/frame/1", sha256("b")));
  ASSERT_EQ(ch.validate_and_append(ch.propose(w.a, 1, std::vector{grant, first, second})), std::nullopt);
  EXPECT_TRUE(ch.receipt(first.id())->ok);
  EXPECT_EQ(ch.receipt(second.id())->message, "already recorded");
  EXPECT_EQ(ch.state().hia.at("cam-01/frame/1").hash, sha256("a"));
}

TEST(Contracts, UnknownMethodLeavesStateButAdvancesNonce) {
  World w;
  Chain ch(w.genesis());
  const auto before = ch.state();
  auto tx = make_transaction(w.edge, 1, "hia", "erase", {});
  ASSERT_EQ(ch.validate_and_append(ch.propose(w.a, 1, std::vector{tx})), std::nullopt);
  EXPECT_FALSE(ch.receipt(tx.id())->ok);
  EXPECT_EQ(ch.state().hia, before.hia);
  EXPECT_EQ(ch.state().acl, before.acl);
  EXPECT_EQ(ch.state().registry, before.registry);
  EXPECT_EQ(ch.state().nonce(tx.sender), 1u);
}

TEST(Contracts, GrantNeedsManageAndFutureExpiry) {
  World w;
  Chain ch(w.genesis());
  auto by_fog = make_transaction(w.fog, 1, "acl", "grant",
                                 acl_grant_args(w.vid(w.fog), "camera/cam-01/features", kRead, kNeverExpires));
  auto past = make_transaction(w.admin, 1, "acl", "grant",
                               acl_grant_args(w.vid(w.fog), "camera/cam-01/features", kRead, kT0));
  auto ok = make_transaction(w.admin, 2, "acl", "grant",
                             acl_grant_args(w.vid(w.fog), "camera/cam-01/features", kRead, kT0 + 62'000));
  ASSERT_EQ(ch.validate_and_append(ch.propose(w.a, 1, std::vector{by_fog, past, ok})), std::nullopt);
  EXPECT_FALSE(ch.receipt(by_fog.id())->ok);
  EXPECT_FALSE(ch.receipt(past.id())->ok);
  EXPECT_TRUE(ch.receipt(ok.id())->ok);
  EXPECT_TRUE(ch.state().allows(w.vid(w.fog), "camera/cam-01/features", kRead, kT0 + 61'999));
  EXPECT_FALSE(ch.state().allows(w.vid(w.fog), "camera/cam-01/features", kRead, kT0 + 62'000));
  EXPECT_FALSE(ch.state().allows(w.vid(w.fog), "camera/cam-01/features", kManage, kT0 + 3000));
  EXPECT_FALSE(ch.state().allows(w.vid(w.fog), "camera/cam-02/features", kRead, kT0 + 3000));
}

TEST(Contracts, ResourcePrefixMatchingFollowsPathSegments) {
  EXPECT_TRUE(resource_covers("", "anything"));
  EXPECT_TRUE(resource_covers("camera/cam-01", "camera/cam-01"));
  EXPECT_TRUE(resource_covers("camera/cam-01", "camera/cam-01/features"));
  EXPECT_FALSE(resource_covers("camera/cam-01", "camera/cam-011"));
  EXPECT_FALSE(resource_covers("camera/cam-01/features", "camera/cam-01"));
}

TEST(Contracts, HiaKeyFormat) {
  EXPECT_EQ(hia_key("cam-01", 1024), "cam-01/frame/1024");
  EXPECT_EQ(hia_resource("cam-01/frame/1024"), "camera/cam-01");
  EXPECT_EQ(hia_resource("cam-01/frame/"), std::nullopt);
  EXPECT_EQ(hia_resource("a/b/frame/1"), std::nullopt);
  EXPECT_EQ(hia_resource("/frame/1"), std::nullopt);
}

// Builds a chain from random transactions, some valid and some failing at
// the contract level.
Chain random_chain(World& w, std::uint64_t seed, int tx_count, int per_block) {
  Chain ch(w.genesis());
  std::mt19937_64 rng(seed);
  std::map<const KeyPair*, std::uint64_t> nonce;
  std::vector<const KeyPair*> senders{&w.admin, &w.edge, &w.fog};
  std::vector<Transaction> pending;
  std::int64_t slot = 1;
  auto flush = [&] {
    const Block b = ch.propose(w.miner_for(ch, slot), slot, pending);
    ASSERT_EQ(b.transactions.size(), pending.size());
    ASSERT_EQ(ch.validate_and_append(b), std::nullopt);
    pending.clear();
    ++slot;
  };
  for (int i = 0; i < tx_count; ++i) {
    const KeyPair* s = senders[rng() % senders.size()];
    const std::uint64_t n = ++nonce[s];
    switch (rng() % 4) {
      case 0:
        pending.push_back(make_transaction(
            *s, n, "hia", "record",
            hia_record_args(hia_key("cam-0" + std::to_string(rng() % 3), rng() % 50),
                            sha256(std::to_string(rng())))));
        break;
      case 1:
        pending.push_back(make_transaction(
            *s, n, "acl", "grant",
            acl_grant_args(w.vid(*senders[rng() % 3]), "camera/cam-0" + std::to_string(rng() % 3),
                           1 + rng() % 3, kT0 + 1000 * static_cast<std::int64_t>(rng() % 100))));
        break;
      case 2: {
        const KeyPair k = KeyPair::from_name("dyn-" + std::to_string(rng() % 20));
        pending.push_back(make_transaction(*s, n, "registry", "register",
                                           register_args(address_of(k.public_key()), k.public_key())));
        break;
      }
      default:
        pending.push_back(make_transaction(*s, n, "acl", "revoke", {}));
    }
    if (static_cast<int>(pending.size()) == per_block) flush();
  }
  if (!pending.empty()) flush();
  return ch;
}

TEST(Replay, TwoHundredRandomTransactionsReplayToTheSameState) {
  World w;
  Chain live = random_chain(w, 77, 200, 20);
  EXPECT_GE(live.height(), 10u);
  EXPECT_GT(live.state().hia.size(), 0u);
  const ContractState replayed = live.replay();
  EXPECT_EQ(replayed, live.state());
  EXPECT_EQ(replayed.digest(), live.state().digest());

  std::vector<Bytes> encoded;
  for (std::uint64_t h = 1; h <= live.height(); ++h) encoded.push_back(live.block(h).encode());
  EXPECT_EQ(validate_from_genesis(w.genesis(), encoded), std::nullopt);
}

TEST(Replay, CanonicalDigestIgnoresTiming) {
  ContractState a, b;
  World w;
  seed_identity(a, w.admin.public_key());
  seed_identity(b, w.admin.public_key());
  a.hia["k/frame/1"] = HiaEntry{sha256("x"), "v", 3};
  b.hia["k/frame/1"] = HiaEntry{sha256("x"), "v", 9};
  a.acl[{"v", "r"}] = Grant{1, 100, 3};
  b.acl[{"v", "r"}] = Grant{1, 900, 4};
  EXPECT_NE(a.digest(), b.digest());
  EXPECT_EQ(a.canonical_digest(), b.canonical_digest());
  b.hia["k/frame/1"].hash = sha256("y");
  EXPECT_NE(a.canonical_digest(), b.canonical_digest());
}

TEST(TamperEvidence, SingleBitFlipAtEveryBytePositionIsDetected) {
  World w;
  Chain live = random_chain(w, 5, 40, 4);
  ASSERT_EQ(live.height(), 10u);
  std::vector<Bytes> encoded;
  std::vector<Chain> prefix{Chain(w.genesis())};
  for (std::uint64_t h = 1; h <= live.height(); ++h) {
    encoded.push_back(live.block(h).encode());
    prefix.push_back(prefix.back());
    ASSERT_EQ(prefix.back().validate_and_append(live.block(h)), std::nullopt);
  }

  std::size_t positions = 0, detected = 0;
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    for (std::size_t pos = 0; pos < encoded[i].size(); ++pos) {
      Bytes m = encoded[i];
      m[pos] ^= static_cast<std::uint8_t>(1u << (pos % 8));
      bool caught = true;
      try {
        caught = prefix[i].validate(Block::decode(m)).has_value();
      } catch (const EncodingError&) {
      }
      ++positions;
      if (caught) ++detected;
      if (positions % 97 == 0) {
        auto mutated = encoded;
        mutated[i] = m;
        EXPECT_EQ(validate_from_genesis(w.genesis(), mutated), i + 1) << i << ":" << pos;
      }
    }
  }
  EXPECT_EQ(detected, positions);
  EXPECT_GT(positions, 2000u);
}

TEST(Genesis, JsonRoundTrip) {
  World w;
  const GenesisConfig g = w.genesis();
  const GenesisConfig back = GenesisConfig::from_json(g.to_json());
  EXPECT_EQ(back.to_json(), g.to_json());
  EXPECT_EQ(back.initial_state(), g.initial_state());
  EXPECT_THROW(GenesisConfig::from_json(R"({"timestamp_ms":0,"miners":[]})"), std::invalid_argument);
  EXPECT_THROW(GenesisConfig::from_json("not json"), std::invalid_argument);
}

}  // namespace
}  // namespace lisps::ledger
