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

#ifndef SEGLOOP_DIGEST_H_
#define SEGLOOP_DIGEST_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace segloop {

// 256-bit content digest (SHA-256).
using Digest = std::array<std::uint8_t, 32>;

Digest Sha256(std::span<const std::uint8_t> bytes);
std::string DigestToHex(const Digest& digest);
// Throws kBadFormat on anything but 64 hex characters.
Digest DigestFromHex(std::string_view hex);

}  // namespace segloop

#endif  // SEGLOOP_DIGEST_H_
