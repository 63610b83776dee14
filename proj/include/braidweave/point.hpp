// Copyright 2026 The Braidweave Authors
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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <ostream>

namespace bw {

/// A lattice site measured in plumbing pieces. The temporal axis is x.
struct Point {
    int64_t x = 0;
    int64_t y = 0;
    int64_t z = 0;

    auto operator<=>(const Point &) const = default;

    int64_t operator[](int axis) const {
        return axis == 0 ? x : axis == 1 ? y : z;
    }
    int64_t &operator[](int axis) {
        return axis == 0 ? x : axis == 1 ? y : z;
    }
    Point operator+(const Point &o) const {
        return {x + o.x, y + o.y, z + o.z};
    }
    Point operator-(const Point &o) const {
        return {x - o.x, y - o.y, z - o.z};
    }
    Point operator*(int64_t k) const {
        return {x * k, y * k, z * k};
    }
    Point operator-() const {
        return {-x, -y, -z};
    }
};

inline std::ostream &operator<<(std::ostream &out, const Point &p) {
    return out << '(' << p.x << ',' << p.y << ',' << p.z << ')';
}

struct PointHash {
    size_t operator()(const Point &p) const noexcept {
        uint64_t h = static_cast<uint64_t>(p.x) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<uint64_t>(p.y) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        h ^= static_cast<uint64_t>(p.z) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
        return static_cast<size_t>(h);
    }
};

/// Axis (0, 1, 2) along which `delta` points, or -1 if `delta` is zero or not
/// axis-aligned.
inline int axis_of(const Point &delta) {
    int nonzero = (delta.x != 0) + (delta.y != 0) + (delta.z != 0);
    if (nonzero != 1) {
        return -1;
    }
    return delta.x != 0 ? 0 : delta.y != 0 ? 1 : 2;
}

inline Point unit_vector(int axis, int sign) {
    Point p;
    p[axis] = sign < 0 ? -1 : 1;
    return p;
}

/// Unit direction of an axis-aligned nonzero delta.
inline Point direction_of(const Point &delta) {
    int a = axis_of(delta);
    return unit_vector(a, delta[a] < 0 ? -1 : 1);
}

inline int64_t manhattan_length(const Point &delta) {
    return std::llabs(delta.x) + std::llabs(delta.y) + std::llabs(delta.z);
}

}  // namespace bw

template <>
struct std::hash<bw::Point> {
    size_t operator()(const bw::Point &p) const noexcept {
        return bw::PointHash{}(p);
    }
};
