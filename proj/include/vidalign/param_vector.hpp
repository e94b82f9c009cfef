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

#ifndef VIDALIGN_PARAM_VECTOR_HPP_
#define VIDALIGN_PARAM_VECTOR_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vidalign {

// Flat parameter storage with named segments. Segments are appended, so
// ranges are disjoint and cover the vector exactly by construction.
class ParamVector {
 public:
  struct Segment {
    std::string name;
    std::size_t offset;
    std::size_t rows;
    std::size_t cols;
    std::size_t size() const { return rows * cols; }
  };

  std::size_t add_segment(std::string name, std::size_t rows,
                          std::size_t cols, double fill = 0.0) {
    for (const Segment& s : segments_) {
      if (s.name == name) {
        throw std::invalid_argument("duplicate segment: " + name);
      }
    }
    const std::size_t offset = values_.size();
    segments_.push_back(Segment{std::move(name), offset, rows, cols});
    values_.resize(offset + rows * cols, fill);
    return offset;
  }

  const Segment& segment_info(std::string_view name) const {
    for (const Segment& s : segments_) {
      if (s.name == name) return s;
    }
    throw std::invalid_argument("unknown segment: " + std::string(name));
  }

  std::span<double> segment(std::string_view name) {
    const Segment& s = segment_info(name);
    return {values_.data() + s.offset, s.size()};
  }

  std::span<const double> segment(std::string_view name) const {
    const Segment& s = segment_info(name);
    return {values_.data() + s.offset, s.size()};
  }

  std::size_t offset_of(std::string_view name) const {
    return segment_info(name).offset;
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  std::vector<Segment> segments_;
};

}  // namespace vidalign

#endif  // VIDALIGN_PARAM_VECTOR_HPP_
