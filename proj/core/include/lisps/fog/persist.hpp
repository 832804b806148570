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

// Fog-side storage: the raw daily feature stream and the per-camera
// reference store of decoded records.

#ifndef LISPS_FOG_PERSIST_HPP_
#define LISPS_FOG_PERSIST_HPP_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "lisps/common/time.hpp"
#include "lisps/edge/tracker.hpp"

namespace lisps::fog {

// Append-only byte file. Implementations throw std::system_error on I/O
// failure.
class FileWriter {
 public:
  virtual ~FileWriter() = default;
  virtual void write(std::string_view bytes) = 0;
  virtual void flush() = 0;
};

using WriterFactory = std::function<std::unique_ptr<FileWriter>(const std::filesystem::path&)>;

// stdio-backed writer opened in append mode.
std::unique_ptr<FileWriter> open_append_file(const std::filesystem::path& path);

// Raw feature bytes for one camera in <root>/<camera>/features-YYYYMMDD.log,
// one file per local calendar day. Bytes are handed to the writer in pieces
// of at most `flush_every` and flushed after each full piece.
class DailyStreamLog {
 public:
  DailyStreamLog(std::filesystem::path root, std::string camera_id, int utc_offset_minutes,
                 std::size_t flush_every = 10, WriterFactory factory = open_append_file);
  ~DailyStreamLog();

  // `received` selects the day file. Never throws: on I/O failure the log
  // turns degraded, drops the bytes and retries on the next append.
  void append(std::string_view bytes, Timestamp received);
  void close();

  std::filesystem::path path_for(Timestamp t) const;
  bool degraded() const { return degraded_; }
  std::uint64_t bytes_written() const { return written_; }
  std::uint64_t bytes_dropped() const { return dropped_; }

 private:
  std::filesystem::path dir_;
  int utc_offset_minutes_;
  std::size_t flush_every_;
  WriterFactory factory_;
  std::unique_ptr<FileWriter> writer_;
  std::string day_;
  std::size_t unflushed_ = 0;
  bool degraded_ = false;
  std::uint64_t written_ = 0;
  std::uint64_t dropped_ = 0;
};

// Append-only per-camera log of decoded records in
// <root>/<camera>/references.log. Reloads existing records on open; a torn
// final line from a crash is discarded.
class ReferenceStore {
 public:
  struct Entry {
    std::int64_t frame_index;
    edge::FeatureRecord record;
  };

  ReferenceStore(std::filesystem::path root, std::string camera_id);

  void append(std::int64_t frame_index, const edge::FeatureRecord& rec);

  std::size_t size() const { return size_; }
  const std::map<ObjectId, std::vector<Entry>>& by_object() const { return by_object_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::map<ObjectId, std::vector<Entry>> by_object_;
  std::size_t size_ = 0;
};

// Runs persistence on its own thread so storage stalls cannot hold up the
// decision path.
class PersistenceWorker {
 public:
  PersistenceWorker(std::filesystem::path root, int utc_offset_minutes,
                    WriterFactory factory = open_append_file);
  ~PersistenceWorker();

  PersistenceWorker(const PersistenceWorker&) = delete;
  PersistenceWorker& operator=(const PersistenceWorker&) = delete;

  void submit_raw(const std::string& camera_id, std::string bytes, Timestamp received);
  void submit_frame(const edge::FrameFeatureSet& frame);

  // Blocks until every submitted job has run.
  void drain();
  bool degraded(const std::string& camera_id);

 private:
  struct Camera {
    std::unique_ptr<DailyStreamLog> log;
    std::unique_ptr<ReferenceStore> refs;
  };
  Camera& camera(const std::string& id);
  void run();

  std::filesystem::path root_;
  int utc_offset_minutes_;
  WriterFactory factory_;
  std::map<std::string, Camera> cameras_;  // worker thread only

  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable idle_cv_;
  std::deque<std::function<void()>> jobs_;
  bool busy_ = false;
  bool stop_ = false;
  std::thread thread_;
};

}  // namespace lisps::fog

#endif  // LISPS_FOG_PERSIST_HPP_
