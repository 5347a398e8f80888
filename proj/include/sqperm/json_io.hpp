#pragma once

#include <json.hpp>

#include "sqperm/crucial.hpp"
#include "sqperm/enumerate.hpp"
#include "sqperm/search.hpp"

namespace sqperm {

inline nlohmann::json to_json(const SearchStats& s) {
  return nlohmann::json{{"nodes", s.nodes},
                        {"leaves", s.leaves},
                        {"pruned_square", s.pruned_square},
                        {"pruned_bound", s.pruned_bound},
                        {"pruned_symmetry", s.pruned_symmetry},
                        {"pruned_phase", s.pruned_phase},
                        {"wall_seconds", s.wall_seconds}};
}

inline nlohmann::json to_json(const CrucialReport& r) {
  nlohmann::json j{{"subject", r.subject.str()},
                   {"square_free", r.square_free},
                   {"left_crucial", r.left_crucial},
                   {"right_crucial", r.right_crucial},
                   {"bicrucial", r.bicrucial()}};
  if (r.failing_extension) {
    j["failing_extension"] =
        nlohmann::json{{"side", r.failing_extension->side == CrucialReport::Side::Left ? "left" : "right"},
                       {"value", r.failing_extension->value},
                       {"extended", r.failing_extension->extended.str()}};
  } else {
    j["failing_extension"] = nullptr;
  }
  return j;
}

inline nlohmann::json to_json(const CountReport& r) {
  return nlohmann::json{{"kind", to_string(r.kind)},
                        {"length", r.length},
                        {"count", r.count},
                        {"method", r.method == CountMethod::SymmetryReduced ? "symmetry-reduced"
                                                                            : "brute-force"},
                        {"reduced_count", r.reduced_count},
                        {"correction", r.correction},
                        {"wall_seconds", r.wall_seconds},
                        {"stats", to_json(r.stats)}};
}

}  // namespace sqperm
