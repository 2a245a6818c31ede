// Copyright 2026 The partloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "partloc/tensor.hpp"

namespace partloc {

// TNSR layout (all little-endian):
//   "TNSR" | u8 version=1 | u8 dtype=1 (f32) | u16 reserved=0 | u32 ndim
//   | ndim x u64 dims | prod(dims) x f32 payload, row-major
inline constexpr std::uint8_t kTnsrVersion = 1;
inline constexpr std::uint8_t kTnsrDtypeF32 = 1;

enum class TensorIoErrc {
  bad_magic,
  unsupported_version,
  unsupported_dtype,
  malformed_header,  // reserved != 0, ndim == 0 or a zero dim
  truncated,         // header or payload shorter than declared
  trailing_bytes,
  io_failure,
};

const char* to_string(TensorIoErrc code);

class TensorIoError : public std::runtime_error {
 public:
  TensorIoError(TensorIoErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  TensorIoErrc code() const { return code_; }

 private:
  TensorIoErrc code_;
};

std::vector<std::uint8_t> encode_tensor(const Tensor& t);
Tensor decode_tensor(std::span<const std::uint8_t> bytes);

Tensor read_tensor(const std::filesystem::path& path);
void write_tensor(const Tensor& t, const std::filesystem::path& path);

}  // namespace partloc
