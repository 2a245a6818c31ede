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

#include "partloc/tnsr_io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

namespace partloc {
namespace {

constexpr std::uint8_t kMagic[4] = {0x54, 0x4E, 0x53, 0x52};

template <class U>
void put_le(std::vector<std::uint8_t>& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i)
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
}

template <class U>
U get_le(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i)
    v |= static_cast<std::uint64_t>(bytes[at + i]) << (8 * i);
  return static_cast<U>(v);
}

[[noreturn]] void fail(TensorIoErrc code, const std::string& detail) {
  throw TensorIoError(code, std::string("TNSR: ") + to_string(code) + ": " + detail);
}

}  // namespace

const char* to_string(TensorIoErrc code) {
  switch (code) {
    case TensorIoErrc::bad_magic: return "bad magic";
    case TensorIoErrc::unsupported_version: return "unsupported version";
    case TensorIoErrc::unsupported_dtype: return "unsupported dtype";
    case TensorIoErrc::malformed_header: return "malformed header";
    case TensorIoErrc::truncated: return "truncated";
    case TensorIoErrc::trailing_bytes: return "trailing bytes";
    case TensorIoErrc::io_failure: return "i/o failure";
  }
  return "unknown";
}

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
  std::vector<std::uint8_t> out;
  out.reserve(12 + 8 * t.rank() + 4 * t.size());
  for (std::uint8_t b : kMagic) out.push_back(b);
  out.push_back(kTnsrVersion);
  out.push_back(kTnsrDtypeF32);
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
  for (std::size_t d : t.dims()) put_le<std::uint64_t>(out, d);
  for (float v : t.data()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) fail(TensorIoErrc::truncated, "file shorter than magic");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin()))
    fail(TensorIoErrc::bad_magic, "expected \"TNSR\"");
  if (bytes.size() < 12) fail(TensorIoErrc::truncated, "file shorter than fixed header");
  if (bytes[4] != kTnsrVersion)
    fail(TensorIoErrc::unsupported_version, "version " + std::to_string(bytes[4]));
  if (bytes[5] != kTnsrDtypeF32)
    fail(TensorIoErrc::unsupported_dtype, "dtype " + std::to_string(bytes[5]));
  if (get_le<std::uint16_t>(bytes, 6) != 0) fail(TensorIoErrc::malformed_header, "reserved field is non-zero");

  const auto ndim = get_le<std::uint32_t>(bytes, 8);
  if (ndim == 0) fail(TensorIoErrc::malformed_header, "ndim is 0");
  if (bytes.size() < 12 + 8ull * ndim) fail(TensorIoErrc::truncated, "dims table cut short");

  std::vector<std::size_t> dims(ndim);
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    const auto d = get_le<std::uint64_t>(bytes, 12 + 8ull * i);
    if (d == 0) fail(TensorIoErrc::malformed_header, "zero-sized dim");
    if (count > (std::uint64_t{1} << 40) / d) fail(TensorIoErrc::malformed_header, "element count overflows");
    count *= d;
    dims[i] = static_cast<std::size_t>(d);
  }

  const std::size_t offset = 12 + 8ull * ndim;
  const std::size_t need = offset + 4 * count;
  if (bytes.size() < need)
    fail(TensorIoErrc::truncated, "payload has " + std::to_string((bytes.size() - offset) / 4) +
                                      " floats, header declares " + std::to_string(count));
  if (bytes.size() > need) fail(TensorIoErrc::trailing_bytes, "extra data after payload");

  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i)
    data[i] = std::bit_cast<float>(get_le<std::uint32_t>(bytes, offset + 4 * i));
  return Tensor(std::move(dims), std::move(data));
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(TensorIoErrc::io_failure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(TensorIoErrc::io_failure, "read error on " + path.string());
  return decode_tensor(bytes);
}

void write_tensor(const Tensor& t, const std::filesystem::path& path) {
  const auto bytes = encode_tensor(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(TensorIoErrc::io_failure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(TensorIoErrc::io_failure, "write error on " + path.string());
}

}  // namespace partloc
