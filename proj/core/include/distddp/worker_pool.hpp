/*
 Copyright 2026 The distddp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <functional>

namespace distddp {

/// Runs independent per-agent tasks. Each task must write only to its own slot, so
/// results do not depend on the schedule. A size of 1 runs everything inline.
class WorkerPool {
 public:
  explicit WorkerPool(int workers = 1);

  [[nodiscard]] int size() const { return workers_; }

  /// Calls fn(0..n-1). If tasks throw, the exception of the lowest index is rethrown
  /// after all tasks finish.
  void parallel_for(int n, const std::function<void(int)>& fn) const;

  /// `configured` unless the DISTDDP_WORKERS environment variable overrides it.
  static int resolve_size(int configured);

 private:
  int workers_;
};

}  // namespace distddp
