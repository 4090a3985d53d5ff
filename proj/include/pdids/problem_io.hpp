// Copyright 2026 The pdids Authors
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

#ifndef PDIDS_PROBLEM_IO_HPP_
#define PDIDS_PROBLEM_IO_HPP_

#include <string>

#include "pdids/instances.hpp"

namespace pdids {

// Native problem format (line oriented; full grammar in the README):
//
//   pdids-problem-v1
//   kind <instance kind>
//   dims <n> <m>
//   f <prox kind> [params...]
//   g <prox kind> [params...]
//   A <nnz>
//   <row> <col> <value>          one triplet per line, 0-based indices
//   optimum <n+m values>         optional
//   start <n+m values>           optional
//   meta <key> <value>           optional, repeated
//
// '#' starts a comment; values are written with 17 significant digits so a
// write/read round trip is bit-exact.
void write_native(const InstanceSpec& spec, const std::string& path);
InstanceSpec read_native(const std::string& path);

// Minimal MPS subset: NAME, ROWS (one N row plus E rows), COLUMNS, RHS,
// ENDATA, whitespace-split. Anything else (L/G rows, RANGES, BOUNDS, markers,
// objective RHS offsets, ...) raises ParseError naming the feature and line.
void write_mps(const LpInstance& lp, const std::string& path,
               const std::string& name = "PDIDS");
LpInstance read_mps(const std::string& path);

// Convenience: wrap an MPS file as a loaded instance (start point all-ones).
InstanceSpec load_instance(const std::string& path);

}  // namespace pdids

#endif  // PDIDS_PROBLEM_IO_HPP_
