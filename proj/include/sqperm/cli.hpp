#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqperm/construct.hpp"
#include "sqperm/crucial.hpp"
#include "sqperm/enumerate.hpp"
#include "sqperm/json_io.hpp"
#include "sqperm/permutation.hpp"
#include "sqperm/search.hpp"
#include "sqperm/squares.hpp"

namespace sqperm::cli {

// Exit codes: 0 success, 1 usage error, 2 no such object exists,
// 3 feasible but unsupported / budget exhausted, 4 negative check result.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitUnsupported = 3;
inline constexpr int kExitNegative = 4;

/// One "index value" pair per line, e.g. for plotting.
inline std::string emit_coordinates(const Permutation& p) {
  std::string s;
  for (int i = 0; i < p.size(); ++i) {
    s += std::to_string(i);
    s += ' ';
    s += std::to_string(p[i]);
    s += '\n';
  }
  return s;
}

namespace detail_cli {

inline StartPhase parse_phase(const std::string& s) {
  if (s == "up-up") return StartPhase::UpUp;
  if (s == "up") return StartPhase::Up;
  if (s == "any") return StartPhase::Any;
  throw CLI::ValidationError("--phase must be one of up-up, up, any");
}

inline CountKind parse_kind(const std::string& s) {
  if (s == "square-free") return CountKind::SquareFree;
  if (s == "left-crucial") return CountKind::LeftCrucial;
  if (s == "bicrucial") return CountKind::Bicrucial;
  throw CLI::ValidationError("--kind must be one of square-free, left-crucial, bicrucial");
}

}  // namespace detail_cli

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"squares in permutations: detection, crucial status, constructions, enumeration"};
  app.require_subcommand(1);

  // construct
  int c_length = 0;
  bool c_verify = false, c_json = false;
  auto* construct = app.add_subcommand("construct", "build a bicrucial permutation of a given length");
  construct->add_option("--length", c_length, "target length")->required();
  construct->add_flag("--verify", c_verify, "re-verify the output before printing");
  construct->add_flag("--json", c_json, "emit a JSON object instead of plain text");

  // check
  std::string k_perm;
  bool k_sf = false, k_left = false, k_right = false, k_bi = false, k_json = false;
  auto* check = app.add_subcommand("check", "decide square-freeness and crucial status");
  check->add_option("perm", k_perm, "permutation in text form, e.g. \"0,6,5,2,4,7,3,1,8\"")->required();
  check->add_flag("--square-free", k_sf, "require square-free");
  check->add_flag("--left", k_left, "require left-crucial");
  check->add_flag("--right", k_right, "require right-crucial");
  check->add_flag("--bi", k_bi, "require bicrucial");
  check->add_flag("--json", k_json, "emit the full report as JSON");

  // count
  std::string n_kind;
  int n_length = 0, n_threads = 0;
  bool n_brute = false, n_json = false;
  auto* count = app.add_subcommand("count", "exact enumeration of a permutation class");
  count->add_option("--kind", n_kind, "square-free | left-crucial | bicrucial")->required();
  count->add_option("--length", n_length, "target length")->required();
  count->add_flag("--brute-force", n_brute, "use the unreduced oracle counter");
  count->add_option("--threads", n_threads, "worker threads (default: SQPERM_THREADS or hardware)");
  count->add_flag("--json", n_json, "emit the full report as JSON");

  // search
  int s_length = 0, s_threads = 0;
  bool s_nonexistence = false, s_left_crucial = false, s_emit = false;
  std::string s_phase = "any";
  uint64_t s_budget = 0;
  auto* search = app.add_subcommand("search", "exhaustive searches over the prefix-pattern tree");
  search->add_flag("--nonexistence", s_nonexistence, "exhaustive bicrucial search at one length");
  search->add_flag("--left-crucial", s_left_crucial, "enumerate left-crucial permutations");
  search->add_option("--length", s_length, "target length")->required();
  search->add_option("--phase", s_phase, "start filter: up-up | up | any (default any)");
  search->add_flag("--emit", s_emit, "stream matching permutations, one per line");
  search->add_option("--threads", s_threads, "worker threads");
  search->add_option("--budget", s_budget, "node budget (0 = unlimited)");

  // table1
  int t_max = 12;
  bool t_json = false;
  auto* table1 = app.add_subcommand("table1", "recompute counts and diff against the bundled reference");
  table1->add_option("--max", t_max, "largest length to recompute (default 12)");
  table1->add_flag("--json", t_json, "emit one JSON object per row");

  // coords
  std::string x_perm;
  auto* coords = app.add_subcommand("coords", "print \"index value\" pairs for plotting");
  coords->add_option("perm", x_perm, "permutation in text form")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 convention
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (construct->parsed()) {
      ConstructResult res = construct_bicrucial(c_length);
      if (res.status == ConstructResult::Status::Infeasible) {
        err << "no bicrucial permutation of length " << c_length << " exists\n";
        return kExitInfeasible;
      }
      if (res.status == ConstructResult::Status::Unsupported) {
        err << "length " << c_length << " is feasible but the bounded search gave up\n";
        return kExitUnsupported;
      }
      const Permutation& p = *res.perm;
      if (c_verify && !is_bicrucial(p)) {
        err << "verification failed\n";
        return kExitUsage;
      }
      if (c_json) {
        nlohmann::json j{{"length", p.size()}, {"permutation", p.str()}, {"verified", c_verify}};
        out << j.dump() << "\n";
      } else {
        out << p.str() << "\n";
      }
      return kExitOk;
    }

    if (check->parsed()) {
      const Permutation p = Permutation::parse(k_perm);
      const CrucialReport rep = analyze(p);
      if (k_json) {
        out << to_json(rep).dump() << "\n";
      } else {
        out << "square-free: " << (rep.square_free ? "yes" : "no") << "\n"
            << "left-crucial: " << (rep.left_crucial ? "yes" : "no") << "\n"
            << "right-crucial: " << (rep.right_crucial ? "yes" : "no") << "\n"
            << "bicrucial: " << (rep.bicrucial() ? "yes" : "no") << "\n";
        if (rep.failing_extension) {
          out << "square-free extension: "
              << (rep.failing_extension->side == CrucialReport::Side::Left ? "prepend " : "append ")
              << rep.failing_extension->value << " -> " << rep.failing_extension->extended.str()
              << "\n";
        }
      }
      bool ok = true;
      if (k_sf) ok = ok && rep.square_free;
      if (k_left) ok = ok && rep.left_crucial;
      if (k_right) ok = ok && rep.right_crucial;
      if (k_bi) ok = ok && rep.bicrucial();
      return ok ? kExitOk : kExitNegative;
    }

    if (count->parsed()) {
      const CountKind kind = detail_cli::parse_kind(n_kind);
      SearchTuning tuning;
      tuning.threads = n_threads;
      CountReport rep = n_brute ? count_brute(kind, n_length) : count_of_kind(kind, n_length, tuning);
      if (n_json) {
        out << to_json(rep).dump() << "\n";
      } else {
        out << rep.count << "\n";
      }
      return kExitOk;
    }

    if (search->parsed()) {
      if (s_nonexistence == s_left_crucial) {
        err << "choose exactly one of --nonexistence and --left-crucial\n";
        return kExitUsage;
      }
      SearchTuning tuning;
      tuning.threads = s_threads;
      tuning.node_budget = s_budget;
      if (s_nonexistence) {
        NonexistenceResult res = search_bicrucial_nonexistence(s_length, tuning);
        if (s_emit) {
          for (const auto& w : res.witnesses) out << w.str() << "\n";
        }
        const char* outcome = res.outcome == NonexistenceResult::Outcome::Verified ? "verified"
                              : res.outcome == NonexistenceResult::Outcome::FoundWitness
                                  ? "found-witness"
                                  : "budget-exhausted";
        nlohmann::json j{{"mode", "nonexistence"},
                         {"length", s_length},
                         {"outcome", outcome},
                         {"witnesses", res.witnesses.size()},
                         {"stats", to_json(res.stats)}};
        err << j.dump() << "\n";
        return res.outcome == NonexistenceResult::Outcome::BudgetExhausted ? kExitUnsupported
                                                                           : kExitOk;
      }
      // left-crucial enumeration
      if (s_emit && tuning.threads != 1) tuning.threads = 1;  // keep the stream order deterministic
      uint64_t found = 0;
      SearchStats stats = enumerate_left_crucial(
          s_length, detail_cli::parse_phase(s_phase),
          [&](const Permutation& p) {
            ++found;
            if (s_emit) out << p.str() << "\n";
          },
          tuning);
      nlohmann::json j{{"mode", "left-crucial"},
                       {"length", s_length},
                       {"phase", s_phase},
                       {"count", found},
                       {"stats", to_json(stats)}};
      err << j.dump() << "\n";
      return kExitOk;
    }

    if (table1->parsed()) {
      bool all_match = true;
      for (const auto& row : kKnownCounts) {
        if (row.n > t_max) break;
        SearchTuning tuning;
        const uint64_t sf = count_square_free(row.n, tuning).count;
        const uint64_t lc = count_left_crucial(row.n, tuning).count;
        const uint64_t bi = count_bicrucial(row.n, tuning).count;
        const bool match = sf == row.square_free && lc == row.left_crucial && bi == row.bicrucial;
        all_match = all_match && match;
        if (t_json) {
          nlohmann::json j{{"n", row.n},
                           {"square_free", sf},
                           {"left_crucial", lc},
                           {"bicrucial", bi},
                           {"reference",
                            {{"square_free", row.square_free},
                             {"left_crucial", row.left_crucial},
                             {"bicrucial", row.bicrucial}}},
                           {"match", match}};
          out << j.dump() << "\n";
        } else {
          out << row.n << "\t" << sf << "\t" << lc << "\t" << bi << "\t"
              << (match ? "ok" : "MISMATCH") << "\n";
        }
      }
      return all_match ? kExitOk : kExitNegative;
    }

    if (coords->parsed()) {
      out << emit_coordinates(Permutation::parse(x_perm));
      return kExitOk;
    }
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BadLength& e) {
    err << "bad length: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoWitness& e) {
    err << e.what() << "\n";
    return kExitInfeasible;
  } catch (const CapExceeded& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace sqperm::cli
