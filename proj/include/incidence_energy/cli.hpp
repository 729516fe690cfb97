#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "incidence_energy/enumeration.hpp"
#include "incidence_energy/graph6.hpp"
#include "incidence_energy/search.hpp"
#include "incidence_energy/verify.hpp"

namespace incidence_energy::cli {

enum ExitStatus : int {
  kOk = 0,
  kUsageError = 1,
  kViolationFound = 2,
  kSolverFailure = 3,
};

inline constexpr const char* kWorkersEnv = "SPECTRA_VERIFY_WORKERS";

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline void add_tolerance_flags(CLI::App& app, Tolerances& t) {
  app.add_option("--tol-jacobi", t.jacobi, "Jacobi stopping tolerance, relative to ||M||_F");
  app.add_option("--tol-recheck", t.recheck_jacobi, "Jacobi tolerance for re-checking violations");
  app.add_option("--tol-clamp", t.clamp, "eigenvalues within tol*||M||_F of zero count as zero");
  app.add_option("--tol-violation", t.violation, "gap below -tol counts as a violation");
  app.add_option("--tol-equality", t.equality, "|gap| at most tol counts as equality");
  app.add_option("--tol-regular", t.regular_crosscheck, "regular reformulation cross-check tolerance");
}

inline int resolve_workers(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv(kWorkersEnv)) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return default_worker_count();
}

inline GraphFilter make_filter(const std::string& name) {
  if (name == "all") return {};
  if (name == "connected") return [](const Graph& g) { return is_connected(g); };
  if (name == "bipartite") return [](const Graph& g) { return is_bipartite(g); };
  if (name == "regular") return [](const Graph& g) { return is_regular(g).has_value(); };
  throw ContractViolation("unknown filter " + name);
}

// Parses args (program name excluded). Returns -1 when parsing succeeded and
// the command should run, otherwise the exit status to return.
inline int parse(CLI::App& app, std::vector<std::string> args, Streams io) {
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    io.err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }
  return -1;
}

// Opens path for writing unless it is empty or "-", in which case the
// fallback stream is used.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      stream_ = file_.get();
    }
  }
  bool ok() const { return static_cast<bool>(*stream_); }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

inline int status_code(CampaignStatus s) { return static_cast<int>(s); }

}  // namespace detail

/// verify: exhaustive campaign over an order range, or over a graph6 file.
inline int cmd_verify(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Check E(D) <= E(X) on every graph in a range", "verify"};
  int n_min = 1;
  int n_max = 8;
  std::string filter = "all";
  int workers = 0;
  std::string out_path;
  std::string format = "csv";
  std::string report_path;
  std::string graph6_in;
  bool quiet = false;
  Tolerances tols;
  app.add_option("--n-min", n_min, "smallest order")->check(CLI::Range(1, kMaxCanonicalOrder));
  app.add_option("--n-max", n_max, "largest order")->check(CLI::Range(1, kMaxCanonicalOrder));
  app.add_option("--filter", filter, "all|connected|bipartite|regular")
      ->check(CLI::IsMember({"all", "connected", "bipartite", "regular"}));
  app.add_option("--workers", workers, "worker threads (default: $SPECTRA_VERIFY_WORKERS or all cores)");
  app.add_option("--out", out_path, "per-graph record file ('-' for stdout)");
  app.add_option("--format", format, "record format")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--report", report_path, "campaign report JSON path ('-' for stdout)");
  app.add_option("--graph6-in", graph6_in, "verify the graphs in this graph6 file instead of enumerating");
  app.add_flag("--quiet", quiet, "no progress on stderr");
  detail::add_tolerance_flags(app, tols);
  if (int rc = detail::parse(app, args, io); rc >= 0) return rc;
  if (n_min > n_max) {
    io.err << "error: --n-min must not exceed --n-max\n";
    return kUsageError;
  }
  if (graph6_in.empty() && n_max > kEnumerationSoftCeiling) {
    io.err << "warning: n=" << n_max << " is beyond the practical enumeration range\n";
  }

  CampaignConfig cfg;
  cfg.n_min = n_min;
  cfg.n_max = n_max;
  cfg.filter = detail::make_filter(filter);
  cfg.filter_name = filter;
  cfg.tols = tols;
  cfg.workers = detail::resolve_workers(workers);

  std::unique_ptr<detail::Output> records;
  std::unique_ptr<RecordSink> sink;
  if (!out_path.empty()) {
    records = std::make_unique<detail::Output>(out_path, io.out);
    if (!records->ok()) {
      io.err << "error: cannot open " << out_path << '\n';
      return kUsageError;
    }
    if (format == "csv") {
      sink = std::make_unique<CsvSink>(records->get());
    } else {
      sink = std::make_unique<JsonLinesSink>(records->get());
    }
    cfg.sink = sink.get();
  }
  if (!quiet) {
    cfg.progress = [&io, start = std::chrono::steady_clock::now()](int n, std::size_t done,
                                                                  std::size_t total) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      io.err << "\rn=" << n << ": " << done << '/' << total << " classes, "
             << static_cast<long>(secs > 0 ? done / secs : 0) << " graphs/s";
      if (done == total) io.err << '\n';
      io.err.flush();
    };
  }

  CampaignReport rep;
  if (!graph6_in.empty()) {
    std::ifstream in(graph6_in);
    if (!in) {
      io.err << "error: cannot open " << graph6_in << '\n';
      return kUsageError;
    }
    std::vector<Graph> graphs;
    try {
      graphs = read_graph6_stream(in);
    } catch (const ParseError& e) {
      io.err << "error: " << graph6_in << ": " << e.what() << '\n';
      return kUsageError;
    }
    rep = run_campaign_on(graphs, cfg);
  } else {
    rep = run_campaign(cfg);
  }
  if (records) records->get().flush();

  const auto json = report_to_json(rep);
  if (!report_path.empty()) {
    detail::Output report(report_path, io.out);
    if (!report.ok()) {
      io.err << "error: cannot open " << report_path << '\n';
      return kUsageError;
    }
    report.get() << json.dump(2) << '\n';
  }

  // Keep stdout machine-readable when a report or records go there.
  std::ostream& summary = report_path == "-" || out_path == "-" ? io.err : io.out;
  summary << "verify n=" << rep.n_min << ".." << rep.n_max << " filter=" << rep.filter << ": "
         << rep.graphs_checked << " graphs, " << rep.violations.size() << " violations, "
         << rep.solver_failures << " solver failures, min gap "
         << (rep.min_gap ? format12(*rep.min_gap) : std::string("n/a"));
  if (rep.min_gap_nonbipartite) {
    summary << ", min non-bipartite gap " << format12(*rep.min_gap_nonbipartite) << " ("
           << rep.min_gap_witness << ")";
  }
  summary << ": " << json["status"].get<std::string>() << '\n';
  return detail::status_code(rep.status());
}

/// check: full record for one graph6 string.
inline int cmd_check(const std::vector<std::string>& args, Streams io, std::istream& in = std::cin) {
  CLI::App app{"Compute E(D), E(X) and the verdict for one graph", "check"};
  std::string text;
  bool from_stdin = false;
  bool spectra = false;
  Tolerances tols;
  app.add_option("graph6", text, "graph in graph6 format");
  app.add_flag("--stdin", from_stdin, "read the graph6 string from standard input");
  app.add_flag("--spectra", spectra, "include Laplacian and signless Laplacian spectra");
  detail::add_tolerance_flags(app, tols);
  if (int rc = detail::parse(app, args, io); rc >= 0) return rc;
  if (from_stdin) {
    std::getline(in, text);
    if (!text.empty() && text.back() == '\r') text.pop_back();
  }
  if (text.empty() && !from_stdin) {
    io.err << "error: a graph6 string or --stdin is required\n\n" << app.help();
    return kUsageError;
  }
  Graph g;
  try {
    g = parse_graph6(text);
  } catch (const ParseError& e) {
    io.err << "error: malformed graph6 at " << e.what() << '\n';
    return kUsageError;
  }
  const ConjectureRecord r = check_graph(g, tols);
  auto json = record_to_json(r, spectra);
  if (r.regular_k && r.verdict != Verdict::kSolverFailure) {
    const auto reg = check_regular_reformulation(g, r.e_d, r.e_x, tols);
    json["regular"] = {{"k", reg.k},
                       {"lhs", round12(reg.lhs)},
                       {"rhs", round12(reg.rhs)},
                       {"delta_lhs_e_d", round12(reg.delta_d)},
                       {"delta_rhs_e_x", round12(reg.delta_x)}};
  }
  io.out << json.dump(2) << '\n';
  switch (r.verdict) {
    case Verdict::kViolation: return kViolationFound;
    case Verdict::kSolverFailure: return kSolverFailure;
    default: return kOk;
  }
}

/// search: annealing plus descent polish; exit 2 only for a re-checked violation.
inline int cmd_search(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Heuristic search for graphs with small E(X) - E(D)", "search"};
  SearchConfig cfg;
  std::string out_path;
  int workers = 0;
  bool timing = false;
  bool no_polish = false;
  Tolerances tols;
  app.add_option("--n", cfg.n, "vertex count")->check(CLI::Range(1, kMaxSearchOrder));
  app.add_option("--iters", cfg.iterations, "objective evaluations per restart");
  app.add_option("--restarts", cfg.restarts, "independent restarts");
  app.add_option("--seed", cfg.seed, "64-bit seed");
  app.add_option("--top-k", cfg.top_k, "best graphs to keep");
  app.add_option("--temperature", cfg.initial_temperature, "initial temperature");
  app.add_option("--decay", cfg.decay, "geometric temperature decay per iteration");
  app.add_option("--workers", workers, "threads for restarts");
  app.add_option("--out", out_path, "result JSON path (default stdout)");
  app.add_flag("--bipartite-moves", cfg.bipartite_moves, "only toggle pairs across a fixed bipartition");
  app.add_flag("--timing", timing, "include wall time in the JSON (breaks byte-identical reruns)");
  app.add_flag("--no-polish", no_polish, "skip the descent polish of retained graphs");
  detail::add_tolerance_flags(app, tols);
  if (int rc = detail::parse(app, args, io); rc >= 0) return rc;
  cfg.workers = detail::resolve_workers(workers);
  try {
    cfg.validate();
  } catch (const ContractViolation& e) {
    io.err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  const SearchResult result = anneal(cfg, tols);

  std::vector<SearchEntry> polished;
  std::vector<ConjectureRecord> confirmed;
  std::vector<std::string> errors = result.errors;
  if (!no_polish) {
    incidence_energy::detail::BestList list(cfg.top_k);
    for (const auto& e : result.best) {
      try {
        const auto d = exhaustive_neighborhood_descent(parse_graph6(e.graph6), tols);
        list.offer(d.graph, d.gap);
        if (d.gap < -tols.violation) {
          auto r = check_graph(d.graph, tols);
          if (r.verdict == Verdict::kViolation) confirmed.push_back(std::move(r));
        }
      } catch (const ConvergenceError& ex) {
        errors.push_back(std::string("polish: ") + ex.what());
      } catch (const NegativeEigenvalueError& ex) {
        errors.push_back(std::string("polish: ") + ex.what());
      }
    }
    polished = list.entries();
  }

  nlohmann::ordered_json j;
  j["config"] = search_config_to_json(cfg);
  j["min_gap"] = round12(result.min_gap);
  j["best"] = search_entries_to_json(result.best);
  if (!no_polish) {
    j["polished"] = search_entries_to_json(polished);
    j["polished_min_gap"] = polished.empty() ? nlohmann::ordered_json(nullptr)
                                             : nlohmann::ordered_json(round12(polished.front().gap));
  }
  j["moves_evaluated"] = result.moves_evaluated;
  auto candidates = nlohmann::ordered_json::array();
  for (const auto& r : result.violation_candidates) candidates.push_back(record_to_json(r));
  j["violation_candidates"] = candidates;
  auto confirmed_json = nlohmann::ordered_json::array();
  for (const auto& r : confirmed) confirmed_json.push_back(record_to_json(r));
  j["confirmed_violations"] = confirmed_json;
  j["errors"] = errors;
  if (timing) j["wall_time"] = round12(result.wall_time);

  detail::Output out(out_path, io.out);
  if (!out.ok()) {
    io.err << "error: cannot open " << out_path << '\n';
    return kUsageError;
  }
  out.get() << j.dump(2) << '\n';
  out.get().flush();

  if (!confirmed.empty() || !result.violation_candidates.empty()) return kViolationFound;
  if (!errors.empty()) return kSolverFailure;
  return kOk;
}

/// regular: the k-regular reformulation against the direct energies.
inline int cmd_regular(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Cross-check the regular-graph reformulation", "regular"};
  int n_min = 1;
  int n_max = 8;
  int workers = 0;
  Tolerances tols;
  app.add_option("--n-min", n_min, "smallest order")->check(CLI::Range(1, kMaxCanonicalOrder));
  app.add_option("--n-max", n_max, "largest order")->check(CLI::Range(1, kMaxCanonicalOrder));
  app.add_option("--workers", workers, "enumeration threads");
  detail::add_tolerance_flags(app, tols);
  if (int rc = detail::parse(app, args, io); rc >= 0) return rc;
  if (n_min > n_max) {
    io.err << "error: --n-min must not exceed --n-max\n";
    return kUsageError;
  }
  const int threads = detail::resolve_workers(workers);
  io.out << "n,graph6,k,lhs,rhs,e_d,e_x,delta_lhs_e_d,delta_rhs_e_x\n";
  bool ok = true;
  for (int n = n_min; n <= n_max; ++n) {
    const auto graphs =
        enumerate_graphs(n, [](const Graph& g) { return is_regular(g).has_value(); }, threads);
    for (const auto& g : graphs) {
      try {
        const auto p = energy_pair(g, tols);
        const auto r = check_regular_reformulation(g, p.e_d, p.e_x, tols);
        ok = ok && r.consistent;
        io.out << n << ',' << to_graph6(g) << ',' << r.k << ',' << format12(r.lhs) << ','
               << format12(r.rhs) << ',' << format12(p.e_d) << ',' << format12(p.e_x) << ','
               << format12(r.delta_d) << ',' << format12(r.delta_x) << '\n';
      } catch (const ConvergenceError& e) {
        io.err << "error: " << to_graph6(g) << ": " << e.what() << '\n';
        ok = false;
      }
    }
  }
  return ok ? kOk : kSolverFailure;
}

/// enumerate: write one graph6 line per isomorphism class.
inline int cmd_enumerate(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Emit all isomorphism classes on n vertices as graph6", "enumerate"};
  int n = 4;
  std::string filter = "all";
  std::string out_path;
  int workers = 0;
  app.add_option("--n", n, "vertex count")->check(CLI::Range(1, kMaxCanonicalOrder));
  app.add_option("--filter", filter, "all|connected|bipartite|regular")
      ->check(CLI::IsMember({"all", "connected", "bipartite", "regular"}));
  app.add_option("--out", out_path, "output path (default stdout)");
  app.add_option("--workers", workers, "threads");
  if (int rc = detail::parse(app, args, io); rc >= 0) return rc;
  if (n > kEnumerationSoftCeiling) {
    io.err << "warning: n=" << n << " is beyond the practical enumeration range\n";
  }
  detail::Output out(out_path, io.out);
  if (!out.ok()) {
    io.err << "error: cannot open " << out_path << '\n';
    return kUsageError;
  }
  write_graph6_stream(out.get(),
                      enumerate_graphs(n, detail::make_filter(filter), detail::resolve_workers(workers)));
  return kOk;
}

inline const char* kUsage =
    "usage: spectra-verify <command> [options]\n"
    "\n"
    "commands:\n"
    "  verify     exhaustive check of E(D) <= E(X) over all graphs in an order range\n"
    "  check      energies and verdict for a single graph6 string\n"
    "  search     simulated-annealing search for small E(X) - E(D)\n"
    "  regular    cross-check the regular-graph reformulation\n"
    "  enumerate  emit isomorphism classes as graph6\n"
    "\n"
    "Run 'spectra-verify <command> --help' for command options.\n";

inline int run(const std::vector<std::string>& argv, Streams io) {
  if (argv.empty() || argv[0] == "--help" || argv[0] == "-h") {
    (argv.empty() ? io.err : io.out) << kUsage;
    return argv.empty() ? kUsageError : kOk;
  }
  const std::string& cmd = argv[0];
  const std::vector<std::string> rest(argv.begin() + 1, argv.end());
  try {
    if (cmd == "verify") return cmd_verify(rest, io);
    if (cmd == "check") return cmd_check(rest, io);
    if (cmd == "search") return cmd_search(rest, io);
    if (cmd == "regular") return cmd_regular(rest, io);
    if (cmd == "enumerate") return cmd_enumerate(rest, io);
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  io.err << "error: unknown command '" << cmd << "'\n\n" << kUsage;
  return kUsageError;
}

}  // namespace incidence_energy::cli
