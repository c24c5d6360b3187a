// Copyright 2026 The tempspan Authors.
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


// SHA-256 digests for manifests.

#ifndef TEMPSPAN_DIGEST_H_
#define TEMPSPAN_DIGEST_H_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace tempspan {

class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void Update(std::string_view bytes);
  // Lowercase hex. The object must not be updated afterwards.
  std::string HexDigest();

 private:
  struct Context;
  std::unique_ptr<Context> context_;
};

std::string Sha256Hex(std::string_view bytes);
// Throws IoError when the file cannot be read.
std::string Sha256File(const std::filesystem::path& path);

}  // namespace tempspan

#endif  // TEMPSPAN_DIGEST_H_
