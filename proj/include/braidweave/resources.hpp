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

// Physical cost of a circuit volume. One plumbing piece of a distance-d code
// costs a fixed number of physical qubits and syndrome-extraction steps; the
// distance itself is chosen so that the whole volume fails with probability
// below a target under a simple per-piece failure law.

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidweave/geometry.hpp"

namespace bw {

enum class Code { surface, raussendorf };

inline const char *to_string(Code c) {
    return c == Code::surface ? "surface" : "raussendorf";
}

inline Code parse_code(const std::string &s) {
    if (s == "surface") {
        return Code::surface;
    }
    if (s == "raussendorf") {
        return Code::raussendorf;
    }
    throw std::invalid_argument("unknown code '" + s + "' (expected surface or raussendorf)");
}

/// Per-piece logical failure p_L(d) = prefactor * (p_phys / p_th)^ceil((d+1)/2).
struct ErrorModel {
    double p_phys = 1e-3;
    double p_th = 0.01;
    double prefactor = 0.1;

    void check() const {
        if (!(p_phys > 0 && p_phys < 1)) {
            throw std::invalid_argument("p_phys must lie in (0,1)");
        }
        if (!(p_th > 0) || !(prefactor > 0)) {
            throw std::invalid_argument("p_th and prefactor must be positive");
        }
        if (!(p_phys < p_th)) {
            throw std::invalid_argument("p_phys must be below p_th");
        }
    }
    static int exponent(int d) {
        return (d + 2) / 2;
    }
    double log_piece_failure(int d) const {
        return std::log(prefactor) + exponent(d) * std::log(p_phys / p_th);
    }
};

inline constexpr int kMaxDistance = 199;

namespace detail {

inline void check_distance(int d) {
    if (d < 3) {
        throw std::invalid_argument("code distance must be at least 3, got " + std::to_string(d));
    }
}

inline int64_t checked_mul(int64_t a, int64_t b) {
    int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw std::overflow_error("resource count overflows 64 bits");
    }
    return out;
}

}  // namespace detail

/// Physical qubits in one plumbing piece. The surface count 25d^2/4 is
/// rounded up when 4 does not divide d.
inline int64_t qubits_per_piece(Code code, int d) {
    detail::check_distance(d);
    const int64_t D = d;
    if (code == Code::surface) {
        return (25 * D * D + 3) / 4 + 5 * D + 1;
    }
    return 6 * D * D * D + 9 * D * D + 3 * D;
}

/// Syndrome-extraction steps spanned by one piece, ceil(5d/4).
inline int64_t steps_per_piece(int d) {
    detail::check_distance(d);
    return (5 * static_cast<int64_t>(d) + 3) / 4;
}

/// Smallest odd d >= 3 with volume * p_L(d) <= eps_target. The comparison is
/// made in log space with a 1e-12 relative allowance so exact boundary cases
/// such as 0.1 * 10^-9 <= 1e-10 are accepted.
inline int select_distance(int64_t volume_pieces, const ErrorModel &model, double eps_target) {
    if (volume_pieces < 1) {
        throw std::invalid_argument("volume must be at least 1 plumbing piece");
    }
    if (!(eps_target > 0 && eps_target < 1)) {
        throw std::invalid_argument("eps_target must lie in (0,1)");
    }
    model.check();
    const double log_v = std::log(static_cast<double>(volume_pieces));
    const double log_eps = std::log(eps_target);
    const double slack = 1e-12 * std::max(1.0, std::abs(log_eps));
    for (int d = 3; d <= kMaxDistance; d += 2) {
        if (log_v + model.log_piece_failure(d) <= log_eps + slack) {
            return d;
        }
    }
    throw std::domain_error("target unreachable under model");
}

struct ResourceReport {
    Code code = Code::surface;
    int d = 3;
    int64_t volume_pieces = 0;
    int64_t extent_x = 0;
    int64_t extent_y = 0;
    int64_t extent_z = 0;
    int64_t qubits_per_piece = 0;
    int64_t steps_per_piece = 0;
    /// Headline count for `code`: cross-section for surface, volume for
    /// raussendorf.
    int64_t qubits = 0;
    int64_t time_steps = 0;
    /// Both totals, whichever code was asked for.
    int64_t qubits_cross_section = 0;
    int64_t qubits_volume = 0;
    bool distance_forced = false;
    double eps_target = 0;
    double total_failure = 0;
    ErrorModel model;

    /// Fixed-order key: value lines.
    std::string str() const {
        std::ostringstream out;
        out.precision(6);
        out << "code: " << to_string(code) << '\n';
        out << "volume_pieces: " << volume_pieces << '\n';
        out << "extents: " << extent_x << 'x' << extent_y << 'x' << extent_z << '\n';
        out << "d: " << d << (distance_forced ? " (forced)" : "") << '\n';
        out << "qubits_per_piece: " << qubits_per_piece << '\n';
        out << "steps_per_piece: " << steps_per_piece << '\n';
        out << "qubits: " << qubits << '\n';
        out << "time_steps: " << time_steps << '\n';
        out << "qubits_cross_section: " << qubits_cross_section << '\n';
        out << "qubits_volume: " << qubits_volume << '\n';
        out << "p_phys: " << model.p_phys << '\n';
        out << "p_th: " << model.p_th << '\n';
        out << "prefactor: " << model.prefactor << '\n';
        out << "eps_target: " << eps_target << '\n';
        out << "total_failure: " << total_failure << '\n';
        return out.str();
    }
};

/// Resources of `c` at distance `forced_d` or, if absent, the distance chosen
/// by select_distance.
inline ResourceReport estimate(const TopoCircuit &c, Code code, const ErrorModel &model, double eps_target,
                               std::optional<int> forced_d = std::nullopt) {
    Box box = tight_box(c);
    if (box.empty) {
        throw std::invalid_argument("empty circuit");
    }
    ResourceReport r;
    r.code = code;
    r.model = model;
    r.eps_target = eps_target;
    r.extent_x = box.extent(0);
    r.extent_y = box.extent(1);
    r.extent_z = box.extent(2);
    r.volume_pieces = box.volume();
    if (forced_d) {
        detail::check_distance(*forced_d);
        r.d = *forced_d;
        r.distance_forced = true;
    } else {
        r.d = select_distance(r.volume_pieces, model, eps_target);
    }
    r.qubits_per_piece = qubits_per_piece(code, r.d);
    r.steps_per_piece = steps_per_piece(r.d);
    r.qubits_cross_section = detail::checked_mul(detail::checked_mul(r.extent_y, r.extent_z), r.qubits_per_piece);
    r.qubits_volume = detail::checked_mul(r.volume_pieces, r.qubits_per_piece);
    r.qubits = code == Code::surface ? r.qubits_cross_section : r.qubits_volume;
    r.time_steps = detail::checked_mul(r.extent_x, r.steps_per_piece);
    r.total_failure = static_cast<double>(r.volume_pieces) * std::exp(model.log_piece_failure(r.d));
    return r;
}

/// CSV of the resource totals of `c` over a list of distances.
inline std::string resource_sweep_csv(const TopoCircuit &c, Code code, const ErrorModel &model,
                                      const std::vector<int> &distances) {
    std::ostringstream out;
    out << "d,qubits_per_piece,steps_per_piece,qubits,time_steps,total_failure\n";
    for (int d : distances) {
        auto r = estimate(c, code, model, 0.5, d);
        out << d << ',' << r.qubits_per_piece << ',' << r.steps_per_piece << ',' << r.qubits << ',' << r.time_steps
            << ',' << r.total_failure << '\n';
    }
    return out.str();
}

}  // namespace bw
