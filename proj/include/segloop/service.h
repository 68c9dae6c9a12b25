// Copyright 2026 The segloop Authors
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

#ifndef SEGLOOP_SERVICE_H_
#define SEGLOOP_SERVICE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "segloop/config.h"
#include "segloop/error.h"
#include "segloop/store.h"

namespace httplib {
class Server;
}

namespace segloop {

// HTTP status for an error code: 404 kNotFound, 409 for state conflicts,
// 422 for request validation failures, 500 otherwise.
int HttpStatusFor(ErrorCode code);

// JSON API over a Store. Routes (bodies and responses are JSON unless noted):
//   GET  /api/sites
//   GET  /api/sites/{s}/faces/{f}/image          PNG
//   GET  /api/sites/{s}/faces/{f}/prediction     colorized base prediction, PNG
//   GET  /api/sites/{s}/faces/{f}/overlay        current mask over the image, PNG
//   GET  /api/sites/{s}/faces/{f}/failures       entropy heat map PNG; ?format=regions for JSON
//   GET  /api/sites/{s}/faces/{f}/mask           indexed PNG; ?format=bin for SEGB
//   POST /api/sessions                           {site_id, face}
//   POST /api/sessions/{id}/wand                 {x, y, tolerance?, connectivity?}
//   POST /api/sessions/{id}/corrections          {selection, class, intervention_type?, interactions?, elapsed_s?}
//   POST /api/sessions/{id}/undo
//   POST /api/propagate/{record}
//   GET  /api/review-queue                       ?all=1 includes decided items
//   POST /api/review/{item}                      {decision: accept|reject}
//   GET  /api/metrics
//   GET  /api/stats/effort
// Errors are {code, message}. Readers share a lock; mutations hold it
// exclusively, so the record log sees one total order.
class Service {
 public:
  Service(Store store, PipelineConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds host:port, port 0 picking a free one; returns the bound port.
  // Throws kPortInUse.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after Bind.
  void Run();
  void Stop();
  void WaitUntilReady() const;

  const Store& store() const { return store_; }

 private:
  struct Session {
    FaceKey key;
    std::vector<std::string> undo_stack;
    int wand_calls = 0;
    std::int64_t last_commit_ms = 0;
  };

  void Routes();
  Session& FindSession(const std::string& id);
  std::shared_ptr<const PropagationIndex> IndexSnapshot();

  Store store_;
  PipelineConfig config_;
  std::unique_ptr<httplib::Server> server_;
  std::shared_mutex store_mutex_;
  std::mutex session_mutex_;
  std::map<std::string, Session> sessions_;
  std::uint64_t next_session_ = 1;
  std::shared_ptr<const PropagationIndex> index_;
};

}  // namespace segloop

#endif  // SEGLOOP_SERVICE_H_
