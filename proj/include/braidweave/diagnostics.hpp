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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "braidweave/point.hpp"

namespace bw {

/// One broken invariant. `code` is a stable kebab-case identifier, `message`
/// is for humans.
struct Violation {
    std::string code;
    std::string message;
    std::vector<std::string> strands;
    std::vector<Point> points;
};

struct ValidityReport {
    std::vector<Violation> violations;

    bool ok() const {
        return violations.empty();
    }
    bool has(const std::string &code) const {
        return std::any_of(violations.begin(), violations.end(), [&](const Violation &v) {
            return v.code == code;
        });
    }
    void add(std::string code, std::string message, std::vector<std::string> strands = {}, std::vector<Point> points = {}) {
        violations.push_back({std::move(code), std::move(message), std::move(strands), std::move(points)});
    }
    void append(const ValidityReport &other) {
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    }

    std::string str() const {
        std::ostringstream out;
        for (const auto &v : violations) {
            out << v.code << ": " << v.message;
            if (!v.strands.empty()) {
                out << " [strands:";
                for (const auto &s : v.strands) {
                    out << ' ' << s;
                }
                out << ']';
            }
            if (!v.points.empty()) {
                out << " [points:";
                for (const auto &p : v.points) {
                    out << ' ' << p;
                }
                out << ']';
            }
            out << '\n';
        }
        return out.str();
    }
};

}  // namespace bw
