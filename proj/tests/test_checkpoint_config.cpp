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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "vidalign/checkpoint.hpp"
#include "vidalign/config.hpp"
#include "vidalign/pipeline.hpp"

namespace {

using namespace vidalign;
namespace fs = std::filesystem;

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a_hash("") == 14695981039346656037ULL);
  CHECK(fnv1a_hash("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a_hash("abc") != fnv1a_hash("acb"));
}

TEST_CASE("checkpoint round-trip and validation") {
  const fs::path path = fs::temp_directory_path() / "vidalign-ckpt-test.ckpt";

  ParamVector p;
  p.add_segment("w1", 3, 4);
  p.add_segment("b1", 1, 3);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p.values()[i] = 0.25 * static_cast<double>(i) - 1.0;
  }
  save_checkpoint(path.string(), p, 42);

  const ParamVector back = load_checkpoint(path.string(), 42);
  CHECK(back.values() == p.values());
  REQUIRE(back.segments().size() == 2);
  CHECK(back.segments()[0].name == "w1");
  CHECK(back.segments()[0].rows == 3);
  CHECK(back.segments()[0].cols == 4);
  CHECK(back.segments()[1].offset == 12);

  CHECK(peek_checkpoint_hash(path.string()) == 42);
  CHECK_THROWS(load_checkpoint(path.string(), 43));

  // Truncated files are rejected.
  {
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 9));
  }
  CHECK_THROWS(load_checkpoint(path.string(), 42));

  // Bad magic is rejected.
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "NOTACKPT and then some bytes to get past the header length";
  }
  CHECK_THROWS(load_checkpoint(path.string(), 42));
  fs::remove(path);
}

TEST_CASE("ini parsing, fallbacks, and the resolved dump") {
  const IniFile ini = IniFile::parse_string(
      "# comment\n"
      "; another comment\n"
      "[stage1]\n"
      "group_size = 12\n"
      "kl_beta=0.01\n"
      "[data]\n"
      "world_seed = 99\n"
      "curated = true\n");

  CHECK(ini.has("stage1", "group_size"));
  CHECK_FALSE(ini.has("stage1", "missing"));
  CHECK(ini.get_int("stage1", "group_size", 8) == 12);
  CHECK(ini.get_double("stage1", "kl_beta", 0.001) == 0.01);
  CHECK(ini.get_u64("data", "world_seed", 7) == 99);
  CHECK(ini.get_bool("data", "curated", false));
  CHECK(ini.get_int("stage1", "epochs", 3) == 3);  // fallback
  CHECK_THROWS(ini.get_int("stage1", "kl_beta", 0));

  const std::string dump = ini.dump_resolved();
  CHECK(dump.find("stage1.group_size=12") != std::string::npos);
  // Defaulted lookups are recorded too.
  CHECK(dump.find("stage1.epochs=3") != std::string::npos);
}

TEST_CASE("pipeline defaults follow the published constants") {
  const PipelineSettings s = load_settings(IniFile::parse_string(""));
  CHECK(s.stage1_grpo.group_size == 8);
  CHECK(s.stage1_grpo.kl_beta == 0.001);
  CHECK(s.stage1_grpo.epochs == 3);
  CHECK(s.reward.alpha == 0.3);
  CHECK(s.reward.mu == 0.8);
  CHECK(s.reward.gamma == 0.1);
  CHECK(s.reward.l_min == 320);
  CHECK(s.reward.l_max == 512);
  CHECK(s.arch.score_bins == 21);
  CHECK(s.stage3_pool_size == 10);
  CHECK(s.config_hash == fnv1a_hash(s.resolved));
}

TEST_CASE("identical configs hash identically; overrides change the hash") {
  const PipelineSettings a = load_settings(IniFile::parse_string(""));
  const PipelineSettings b = load_settings(IniFile::parse_string(""));
  CHECK(a.resolved == b.resolved);
  CHECK(a.config_hash == b.config_hash);

  const PipelineSettings c =
      load_settings(IniFile::parse_string("[stage1]\ngroup_size = 4\n"));
  CHECK(c.config_hash != a.config_hash);
}

}  // namespace
