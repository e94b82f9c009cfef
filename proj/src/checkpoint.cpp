// Copyright 2026 The Vidalign Authors
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

#include "vidalign/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace vidalign {

namespace {

constexpr char kMagic[8] = {'V', 'A', 'L', 'N', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <class T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::ifstream& in, const std::string& what) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint truncated reading " + what);
  return value;
}

}  // namespace

std::uint64_t fnv1a_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_checkpoint(const std::string& path, const ParamVector& params,
                     std::uint64_t config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kVersion);
  write_pod(out, config_hash);
  write_pod(out, static_cast<std::uint32_t>(params.segments().size()));
  for (const ParamVector::Segment& s : params.segments()) {
    write_pod(out, static_cast<std::uint32_t>(s.name.size()));
    out.write(s.name.data(), static_cast<std::streamsize>(s.name.size()));
    write_pod(out, static_cast<std::uint64_t>(s.rows));
    write_pod(out, static_cast<std::uint64_t>(s.cols));
  }
  out.write(reinterpret_cast<const char*>(params.values().data()),
            static_cast<std::streamsize>(params.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed for checkpoint: " + path);
}

ParamVector load_checkpoint(const std::string& path,
                            std::uint64_t expected_config_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("bad checkpoint magic: " + path);
  }
  const auto version = read_pod<std::uint32_t>(in, "version");
  if (version != kVersion) {
    throw std::runtime_error("unsupported checkpoint version: " +
                             std::to_string(version));
  }
  const auto hash = read_pod<std::uint64_t>(in, "config hash");
  if (hash != expected_config_hash) {
    throw std::runtime_error(
        "checkpoint config hash mismatch: the checkpoint was written under "
        "a different configuration");
  }

  ParamVector params;
  const auto n_segments = read_pod<std::uint32_t>(in, "segment count");
  for (std::uint32_t i = 0; i < n_segments; ++i) {
    const auto name_len = read_pod<std::uint32_t>(in, "segment name length");
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw std::runtime_error("checkpoint truncated reading name");
    const auto rows = read_pod<std::uint64_t>(in, "segment rows");
    const auto cols = read_pod<std::uint64_t>(in, "segment cols");
    params.add_segment(std::move(name), static_cast<std::size_t>(rows),
                       static_cast<std::size_t>(cols));
  }
  in.read(reinterpret_cast<char*>(params.values().data()),
          static_cast<std::streamsize>(params.size() * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint truncated reading values");
  return params;
}

std::uint64_t peek_checkpoint_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("bad checkpoint magic: " + path);
  }
  read_pod<std::uint32_t>(in, "version");
  return read_pod<std::uint64_t>(in, "config hash");
}

}  // namespace vidalign
