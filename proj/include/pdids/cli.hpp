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

#ifndef PDIDS_CLI_HPP_
#define PDIDS_CLI_HPP_

#include <string>
#include <vector>

namespace pdids {

// Entry point behind the pdids binary, factored out so tests can drive the
// command surface directly. Exit codes: 0 success, 1 numerical failure or a
// failed audit, 2 usage/configuration/file errors.
int cli_main(const std::vector<std::string>& args);

}  // namespace pdids

#endif  // PDIDS_CLI_HPP_
