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


#include <fmt/format.h>

#include <fstream>
#include <memory>

#include "commands.hpp"
#include "common.hpp"
#include "lisps/common/net.hpp"
#include "lisps/ledger/contracts.hpp"
#include "lisps/security/ledger_view.hpp"
#include "lisps/security/services.hpp"
#include "lisps/wire/stream.hpp"

namespace lisps::tools {

namespace {

struct VerifyFlags {
  std::string ledger = "127.0.0.1:7000";
  std::string stream;
  std::string camera;
};

struct SavedFrame {
  std::string bytes;
  std::optional<std::int64_t> index;
  std::string camera;
};

std::optional<std::int64_t> index_after(std::string_view line, std::string_view tag) {
  if (line.substr(0, tag.size()) != tag) return std::nullopt;
  const std::string_view digits = line.substr(tag.size());
  if (digits.empty() || digits.size() > 18 ||
      digits.find_first_not_of("0123456789") != std::string_view::npos) {
    return std::nullopt;
  }
  return std::stoll(std::string(digits));
}

// Splits a saved stream at END lines without trusting the rest of the
// grammar, so a damaged frame still lines up with its recorded hash.
std::vector<SavedFrame> split_frames(const std::string& text) {
  std::vector<SavedFrame> out;
  SavedFrame cur;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::size_t end = nl == std::string::npos ? text.size() : nl + 1;
    const std::string_view line(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
    const bool first = cur.bytes.empty();
    cur.bytes.append(text, pos, end - pos);
    pos = end;
    if (first) cur.index = index_after(line, "FRAME ");
    if (line.substr(0, 4) == "CAM " && cur.camera.empty()) cur.camera = std::string(line.substr(4));
    if (line.substr(0, 4) == "END ") {
      if (!cur.index) cur.index = index_after(line, "END ");
      out.push_back(std::move(cur));
      cur = SavedFrame{};
    }
  }
  if (!cur.bytes.empty()) out.push_back(std::move(cur));
  return out;
}

int run_verify(const VerifyFlags& f) {
  std::ifstream in(f.stream, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  security::HttpLedgerView view(parse_endpoint(f.ledger), std::chrono::seconds(5));
  SystemClock clock;
  security::SecurityServices services(view, clock);

  std::size_t authentic = 0;
  std::size_t tampered = 0;
  std::size_t unknown = 0;
  for (const auto& frame : split_frames(text)) {
    const std::string camera = f.camera.empty() ? frame.camera : f.camera;
    if (!frame.index || !wire::is_valid_camera_id(camera)) {
      fmt::print("frame ? tampered (unreadable header)\n");
      ++tampered;
      continue;
    }
    const auto status = services.verify_hashed_index(ledger::hia_key(camera, *frame.index),
                                                     as_bytes(frame.bytes));
    fmt::print("frame {} {}\n", *frame.index, security::to_string(status));
    switch (status) {
      case security::HiaStatus::kAuthentic: ++authentic; break;
      case security::HiaStatus::kTampered: ++tampered; break;
      case security::HiaStatus::kUnknown: ++unknown; break;
    }
  }
  fmt::print("verified {} frame(s): {} authentic, {} tampered, {} unknown\n",
             authentic + tampered + unknown, authentic, tampered, unknown);
  return tampered == 0 && unknown == 0 ? 0 : 1;
}

}  // namespace

Command add_verify_command(CLI::App& app) {
  auto flags = std::make_shared<VerifyFlags>();
  CLI::App* sub = app.add_subcommand("verify", "Check a saved feature stream against the ledger");
  sub->add_option("--ledger", flags->ledger, "Ledger node, host:port");
  sub->add_option("--stream", flags->stream, "Saved feature stream file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--camera", flags->camera, "Camera id; read from each frame when omitted");
  return [flags] { return run_verify(*flags); };
}

}  // namespace lisps::tools
