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

// Volume minimization over the move set: greedy descent, simulated annealing
// with best-state checkpointing, and a deduplicating beam search. All three
// are deterministic given the input circuit and config.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidweave/geometry.hpp"
#include "braidweave/moves.hpp"
#include "braidweave/topology.hpp"
#include "braidweave/tqc.hpp"

namespace bw {

enum class Strategy { greedy, anneal, beam };
enum class Objective { bounding_volume, occupied_cells };

inline const char *to_string(Strategy s) {
    switch (s) {
        case Strategy::greedy:
            return "greedy";
        case Strategy::anneal:
            return "anneal";
        case Strategy::beam:
            return "beam";
    }
    return "?";
}
inline const char *to_string(Objective o) {
    return o == Objective::bounding_volume ? "bounding_volume" : "occupied_cells";
}

inline Strategy parse_strategy(const std::string &s) {
    if (s == "greedy") {
        return Strategy::greedy;
    }
    if (s == "anneal") {
        return Strategy::anneal;
    }
    if (s == "beam") {
        return Strategy::beam;
    }
    throw std::invalid_argument("unknown strategy '" + s + "'");
}
inline Objective parse_objective(const std::string &s) {
    if (s == "bounding_volume" || s == "volume") {
        return Objective::bounding_volume;
    }
    if (s == "occupied_cells" || s == "cells") {
        return Objective::occupied_cells;
    }
    throw std::invalid_argument("unknown objective '" + s + "'");
}

struct AnnealParams {
    double t0 = 2.0;
    double cooling = 0.95;
    int steps_per_temp = 10;
};

struct BeamParams {
    int width = 4;
};

struct SearchConfig {
    Strategy strategy = Strategy::greedy;
    uint64_t seed = 1;
    int max_steps = 1000;
    AnnealParams anneal;
    BeamParams beam;
    Objective objective = Objective::bounding_volume;
    /// Candidate moves considered per step.
    size_t move_budget = 4096;
    /// Threads used to enumerate candidates. Results do not depend on it.
    unsigned workers = 1;
    /// Re-validate every accepted state and compare its signature with the
    /// input. Slow.
    bool verify = false;

    void check() const {
        if (max_steps < 0) {
            throw std::invalid_argument("max_steps must be non-negative");
        }
        if (move_budget < 1) {
            throw std::invalid_argument("move_budget must be positive");
        }
        if (!(anneal.t0 > 0) || !(anneal.cooling > 0 && anneal.cooling < 1) || anneal.steps_per_temp < 1) {
            throw std::invalid_argument("anneal needs t0 > 0, cooling in (0,1), steps_per_temp >= 1");
        }
        if (beam.width < 1) {
            throw std::invalid_argument("beam width must be positive");
        }
    }
};

inline int64_t objective_value(const TopoCircuit &c, Objective o) {
    return o == Objective::bounding_volume ? bounding_volume(c) : occupied_count(c);
}

struct TraceRow {
    int step = 0;
    int64_t objective = 0;
    bool accepted = false;
    std::string move_kind;
};

struct OptimizeResult {
    TopoCircuit final;
    MoveLog log;
    int64_t initial_volume = 0;
    int64_t final_volume = 0;
    int steps_taken = 0;
    std::vector<int64_t> objective_trace;
    std::vector<TraceRow> trace;
};

inline std::string write_trace_csv(const std::vector<TraceRow> &trace) {
    std::ostringstream out;
    out << "step,objective,accepted,move_kind\n";
    for (const auto &row : trace) {
        out << row.step << ',' << row.objective << ',' << (row.accepted ? "true" : "false") << ',' << row.move_kind
            << '\n';
    }
    return out.str();
}

/// Best improving candidate of `c`, if any: lowest objective, ties to the
/// earliest in enumeration order.
inline std::optional<Candidate> best_improvement(const TopoCircuit &c, Objective o, size_t budget,
                                                 unsigned workers = 1) {
    const int64_t current = objective_value(c, o);
    auto cands = enumerate_candidates(c, budget, workers);
    std::optional<size_t> best;
    int64_t best_value = current;
    for (size_t i = 0; i < cands.size(); i++) {
        int64_t v = objective_value(cands[i].result, o);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    if (!best) {
        return std::nullopt;
    }
    return std::move(cands[*best]);
}

/// One greedy step on the default objective: the move and the volume it
/// leads to, or nothing when no move improves.
inline std::optional<std::pair<Move, int64_t>> greedy_step(const TopoCircuit &c,
                                                           Objective o = Objective::bounding_volume,
                                                           size_t budget = 4096) {
    auto cand = best_improvement(c, o, budget);
    if (!cand) {
        return std::nullopt;
    }
    return std::make_pair(cand->move, objective_value(cand->result, o));
}

namespace detail {

class Run {
   public:
    Run(const TopoCircuit &base, const SearchConfig &cfg) : cfg_(cfg) {
        if (cfg.verify) {
            base_sig_ = signature(base);
        }
        result_.log.base_hash = circuit_digest(base);
        result_.initial_volume = objective_value(base, cfg.objective);
        record(0, result_.initial_volume, true, "");
    }

    void record(int step, int64_t value, bool accepted, const std::string &kind) {
        result_.objective_trace.push_back(value);
        result_.trace.push_back({step, value, accepted, kind});
    }

    void verify(const TopoCircuit &c) const {
        if (!cfg_.verify) {
            return;
        }
        auto r = validate_geometry(c);
        if (!r.ok()) {
            throw std::logic_error("optimizer produced invalid geometry:\n" + r.str());
        }
        auto diff = signatures_equal(*base_sig_, signature(c));
        if (!diff) {
            throw std::logic_error("optimizer changed the signature:\n" + diff.str());
        }
    }

    OptimizeResult finish(TopoCircuit final, MoveLog log, int steps) {
        result_.final = std::move(final);
        log.base_hash = result_.log.base_hash;
        result_.log = std::move(log);
        result_.final_volume = objective_value(result_.final, cfg_.objective);
        result_.steps_taken = steps;
        return std::move(result_);
    }

    const SearchConfig &cfg() const {
        return cfg_;
    }

   private:
    const SearchConfig &cfg_;
    std::optional<TopoSignature> base_sig_;
    OptimizeResult result_;
};

inline OptimizeResult run_greedy(const TopoCircuit &c, const SearchConfig &cfg) {
    Run run(c, cfg);
    TopoCircuit cur = c;
    MoveLog log;
    int step = 0;
    while (step < cfg.max_steps) {
        auto cand = best_improvement(cur, cfg.objective, cfg.move_budget, cfg.workers);
        if (!cand) {
            break;
        }
        step++;
        cur = std::move(cand->result);
        run.verify(cur);
        log.append(cand->move);
        run.record(step, objective_value(cur, cfg.objective), true, to_string(cand->move.kind));
    }
    return run.finish(std::move(cur), std::move(log), step);
}

inline double unit_uniform(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline OptimizeResult run_anneal(const TopoCircuit &c, const SearchConfig &cfg) {
    Run run(c, cfg);
    std::mt19937_64 rng(cfg.seed);
    TopoCircuit cur = c;
    int64_t cur_value = objective_value(c, cfg.objective);
    TopoCircuit best = c;
    int64_t best_value = cur_value;
    size_t best_len = 0;
    MoveLog log;
    double temp = cfg.anneal.t0;
    int step = 0;
    while (step < cfg.max_steps) {
        auto cands = enumerate_candidates(cur, cfg.move_budget, cfg.workers);
        if (cands.empty()) {
            break;
        }
        step++;
        auto &pick = cands[static_cast<size_t>(rng() % cands.size())];
        int64_t value = objective_value(pick.result, cfg.objective);
        double delta = static_cast<double>(value - cur_value);
        double u = unit_uniform(rng);
        bool accept = delta <= 0 || u < std::exp(-delta / temp);
        if (accept) {
            cur = std::move(pick.result);
            cur_value = value;
            run.verify(cur);
            log.append(pick.move);
            if (cur_value < best_value) {
                best_value = cur_value;
                best = cur;
                best_len = log.moves.size();
            }
        }
        run.record(step, cur_value, accept, to_string(pick.move.kind));
        if (step % cfg.anneal.steps_per_temp == 0) {
            temp *= cfg.anneal.cooling;
        }
    }
    log.truncate(best_len);
    return run.finish(std::move(best), std::move(log), step);
}

inline OptimizeResult run_beam(const TopoCircuit &c, const SearchConfig &cfg) {
    Run run(c, cfg);
    struct State {
        TopoCircuit circuit;
        MoveLog log;
        int64_t value;
    };
    std::vector<State> beam{{c, {}, objective_value(c, cfg.objective)}};
    State best = beam.front();
    std::set<std::string> seen{write_tqc(c)};
    int step = 0;
    while (step < cfg.max_steps) {
        std::vector<State> next;
        for (const auto &st : beam) {
            for (auto &cand : enumerate_candidates(st.circuit, cfg.move_budget, cfg.workers)) {
                if (!seen.insert(write_tqc(cand.result)).second) {
                    continue;
                }
                State child{std::move(cand.result), st.log, 0};
                child.value = objective_value(child.circuit, cfg.objective);
                child.log.append(cand.move);
                next.push_back(std::move(child));
            }
        }
        if (next.empty()) {
            break;
        }
        step++;
        std::stable_sort(next.begin(), next.end(), [](const State &a, const State &b) {
            return a.value < b.value;
        });
        if (next.size() > static_cast<size_t>(cfg.beam.width)) {
            next.resize(static_cast<size_t>(cfg.beam.width));
        }
        beam = std::move(next);
        run.verify(beam.front().circuit);
        if (beam.front().value < best.value) {
            best = beam.front();
        }
        run.record(step, beam.front().value, true, to_string(beam.front().log.moves.back().kind));
    }
    return run.finish(std::move(best.circuit), std::move(best.log), step);
}

}  // namespace detail

/// Minimizes the configured objective. The result never has a larger
/// objective than the input and its log replays onto the input exactly.
inline OptimizeResult optimize(const TopoCircuit &c, const SearchConfig &cfg) {
    cfg.check();
    auto report = validate_geometry(c);
    if (!report.ok()) {
        throw std::invalid_argument("cannot optimize an invalid circuit:\n" + report.str());
    }
    switch (cfg.strategy) {
        case Strategy::greedy:
            return detail::run_greedy(c, cfg);
        case Strategy::anneal:
            return detail::run_anneal(c, cfg);
        case Strategy::beam:
            return detail::run_beam(c, cfg);
    }
    throw std::invalid_argument("unknown strategy");
}

}  // namespace bw
