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

#include "lisps/fog/persist.hpp"

#include <spdlog/spdlog.h>

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "lisps/wire/codec.hpp"

namespace lisps::fog {

namespace {

class StdioWriter final : public FileWriter {
 public:
  explicit StdioWriter(const std::filesystem::path& path) : path_(path.string()) {
    f_ = std::fopen(path_.c_str(), "ab");
    if (f_ == nullptr) throw std::system_error(errno, std::generic_category(), path_);
  }
  ~StdioWriter() override {
    if (f_ != nullptr) std::fclose(f_);
  }
  void write(std::string_view bytes) override {
    if (std::fwrite(bytes.data(), 1, bytes.size(), f_) != bytes.size()) {
      throw std::system_error(errno, std::generic_category(), path_);
    }
  }
  void flush() override {
    if (std::fflush(f_) != 0) throw std::system_error(errno, std::generic_category(), path_);
  }

 private:
  std::string path_;
  std::FILE* f_ = nullptr;
};

}  // namespace

std::unique_ptr<FileWriter> open_append_file(const std::filesystem::path& path) {
  return std::make_unique<StdioWriter>(path);
}

DailyStreamLog::DailyStreamLog(std::filesystem::path root, std::string camera_id,
                               int utc_offset_minutes, std::size_t flush_every,
                               WriterFactory factory)
    : dir_(std::move(root) / camera_id),
      utc_offset_minutes_(utc_offset_minutes),
      flush_every_(flush_every == 0 ? 1 : flush_every),
      factory_(std::move(factory)) {}

DailyStreamLog::~DailyStreamLog() { close(); }

std::filesystem::path DailyStreamLog::path_for(Timestamp t) const {
  return dir_ / ("features-" + local_date_stamp(t, utc_offset_minutes_) + ".log");
}

void DailyStreamLog::close() {
  if (!writer_) return;
  try {
    writer_->flush();
  } catch (const std::exception& e) {
    spdlog::warn("feature log flush failed on close: {}", e.what());
  }
  writer_.reset();
  unflushed_ = 0;
}

void DailyStreamLog::append(std::string_view bytes, Timestamp received) {
  if (bytes.empty()) return;
  try {
    const std::string day = local_date_stamp(received, utc_offset_minutes_);
    if (!writer_ || day != day_) {
      close();
      std::filesystem::create_directories(dir_);
      writer_ = factory_(path_for(received));
      day_ = day;
    }
    while (!bytes.empty()) {
      const std::size_t n = std::min(bytes.size(), flush_every_ - unflushed_);
      writer_->write(bytes.substr(0, n));
      written_ += n;
      unflushed_ += n;
      bytes.remove_prefix(n);
      if (unflushed_ == flush_every_) {
        writer_->flush();
        unflushed_ = 0;
      }
    }
    if (degraded_) spdlog::info("feature log for {} recovered", dir_.string());
    degraded_ = false;
  } catch (const std::exception& e) {
    if (!degraded_) spdlog::warn("feature log degraded: {}", e.what());
    degraded_ = true;
    dropped_ += bytes.size();
    writer_.reset();  // reopen on the next append
    unflushed_ = 0;
  }
}

ReferenceStore::ReferenceStore(std::filesystem::path root, std::string camera_id) {
  const std::filesystem::path dir = std::move(root) / camera_id;
  std::filesystem::create_directories(dir);
  path_ = dir / "references.log";

  std::ifstream in(path_, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0, valid_end = 0;
  while (true) {
    const auto lf = content.find('\n', pos);
    if (lf == std::string::npos) break;
    std::string_view line(content.data() + pos, lf - pos);
    pos = lf + 1;
    // <frame> OBJ ...
    const auto sp = line.find(' ');
    std::int64_t frame = 0;
    auto [p, ec] = std::from_chars(line.data(), line.data() + std::min(sp, line.size()), frame);
    if (ec != std::errc() || sp == std::string_view::npos) break;
    try {
      auto rec = wire::decode_object_line(line.substr(sp + 1));
      by_object_[rec.object_id].push_back({frame, rec});
      ++size_;
    } catch (const std::invalid_argument&) {
      break;
    }
    valid_end = pos;
  }
  if (valid_end != content.size()) {
    spdlog::warn("reference store {}: discarding {} trailing bytes", path_.string(),
                 content.size() - valid_end);
    in.close();
    std::filesystem::resize_file(path_, valid_end);
  }
}

void ReferenceStore::append(std::int64_t frame_index, const edge::FeatureRecord& rec) {
  const std::string line = std::to_string(frame_index) + " " + wire::encode_object_line(rec) + "\n";
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out << line;
  out.flush();
  if (!out) throw std::system_error(errno, std::generic_category(), path_.string());
  by_object_[rec.object_id].push_back({frame_index, rec});
  ++size_;
}

PersistenceWorker::PersistenceWorker(std::filesystem::path root, int utc_offset_minutes,
                                     WriterFactory factory)
    : root_(std::move(root)), utc_offset_minutes_(utc_offset_minutes), factory_(std::move(factory)) {
  thread_ = std::thread([this] { run(); });
}

PersistenceWorker::~PersistenceWorker() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  thread_.join();
}

PersistenceWorker::Camera& PersistenceWorker::camera(const std::string& id) {
  auto it = cameras_.find(id);
  if (it == cameras_.end()) {
    Camera c;
    c.log = std::make_unique<DailyStreamLog>(root_, id, utc_offset_minutes_, 10, factory_);
    try {
      c.refs = std::make_unique<ReferenceStore>(root_, id);
    } catch (const std::exception& e) {
      spdlog::warn("reference store for {} unavailable: {}", id, e.what());
    }
    it = cameras_.emplace(id, std::move(c)).first;
  }
  return it->second;
}

void PersistenceWorker::submit_raw(const std::string& camera_id, std::string bytes,
                                   Timestamp received) {
  std::lock_guard lock(mu_);
  jobs_.push_back([this, camera_id, b = std::move(bytes), received] {
    camera(camera_id).log->append(b, received);
  });
  cv_.notify_one();
}

void PersistenceWorker::submit_frame(const edge::FrameFeatureSet& frame) {
  std::lock_guard lock(mu_);
  jobs_.push_back([this, frame] {
    auto& refs = camera(frame.camera_id).refs;
    if (!refs) return;
    try {
      for (const auto& [id, rec] : frame.objects) refs->append(frame.frame_index, rec);
    } catch (const std::exception& e) {
      spdlog::warn("reference store append failed: {}", e.what());
    }
  });
  cv_.notify_one();
}

void PersistenceWorker::drain() {
  std::unique_lock lock(mu_);
  idle_cv_.wait(lock, [this] { return jobs_.empty() && !busy_; });
}

bool PersistenceWorker::degraded(const std::string& camera_id) {
  drain();
  std::lock_guard lock(mu_);
  auto it = cameras_.find(camera_id);
  return it != cameras_.end() && it->second.log->degraded();
}

void PersistenceWorker::run() {
  std::unique_lock lock(mu_);
  while (true) {
    cv_.wait(lock, [this] { return stop_ || !jobs_.empty(); });
    if (jobs_.empty() && stop_) break;
    auto job = std::move(jobs_.front());
    jobs_.pop_front();
    busy_ = true;
    lock.unlock();
    job();
    lock.lock();
    busy_ = false;
    if (jobs_.empty()) idle_cv_.notify_all();
  }
  for (auto& [id, c] : cameras_) c.log->close();
}

}  // namespace lisps::fog
