/*
 * Copyright 2026 the tlrd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TLRD_PARALLEL_HPP
#define TLRD_PARALLEL_HPP

#include <functional>

#include "tlrd/tensor.hpp"

namespace tlrd {

/// Resolve a requested worker count: values < 1 mean "use all hardware
/// threads".
int resolve_workers(int requested);

/// Run fn(i) for i in [0, n). Work items must write to disjoint state; the
/// result is then identical for any worker count. With workers <= 1 the loop
/// runs inline. The first exception thrown by any item is rethrown.
void parallel_for(Index n, int workers, const std::function<void(Index)>& fn);

}  // namespace tlrd

#endif  // TLRD_PARALLEL_HPP
