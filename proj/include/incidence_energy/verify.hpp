#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "incidence_energy/enumeration.hpp"
#include "incidence_energy/errors.hpp"
#include "incidence_energy/graph.hpp"
#include "incidence_energy/graph6.hpp"
#include "incidence_energy/parallel.hpp"
#include "incidence_energy/spectral.hpp"

namespace incidence_energy {

enum class Verdict { kHolds, kEquality, kViolation, kSolverFailure };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "HOLDS";
    case Verdict::kEquality: return "EQUALITY";
    case Verdict::kViolation: return "VIOLATION";
    case Verdict::kSolverFailure: return "SOLVER_FAILURE";
  }
  return "?";
}

/// Twelve significant digits, the fixed precision of every report.
inline std::string format12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// x rounded to twelve significant digits, so JSON output prints the same
/// digits as the CSV sink.
inline double round12(double x) { return std::strtod(format12(x).c_str(), nullptr); }

inline Verdict classify_gap(double gap, const Tolerances& tols) {
  if (gap < -tols.violation) return Verdict::kViolation;
  if (std::abs(gap) <= tols.equality) return Verdict::kEquality;
  return Verdict::kHolds;
}

struct ConjectureRecord {
  std::string graph6;
  int n = 0;
  int m = 0;
  bool bipartite = false;
  bool connected = false;
  std::optional<int> regular_k;
  double e_d = 0.0;
  double e_x = 0.0;
  double gap = 0.0;
  Verdict verdict = Verdict::kHolds;
  bool rechecked = false;  // a tightened solve confirmed a violation candidate
  std::string error;       // solver message when verdict is SOLVER_FAILURE
  std::vector<double> laplacian_spectrum;
  std::vector<double> signless_spectrum;

  /// Bipartite graphs must come out as equalities; false flags a numerical
  /// problem, not a property of the graph.
  bool bipartite_consistent() const {
    return !bipartite || verdict == Verdict::kEquality;
  }
};

/// Energies, structural flags and verdict for one graph. A gap below
/// -violation is re-solved at the tightened Jacobi tolerance before it is
/// reported. Solver errors become a SOLVER_FAILURE record instead of escaping.
inline ConjectureRecord check_graph(const Graph& g, const Tolerances& tols = {}) {
  ConjectureRecord r;
  r.graph6 = g.order() <= kMaxGraph6Order ? to_graph6(g) : std::string{};
  r.n = g.order();
  r.m = g.edge_count();
  r.bipartite = is_bipartite(g);
  r.connected = is_connected(g);
  r.regular_k = is_regular(g);
  try {
    EnergyPair p = energy_pair(g, tols.jacobi, tols.clamp);
    if (classify_gap(p.gap, tols) == Verdict::kViolation) {
      p = energy_pair(g, tols.recheck_jacobi, tols.clamp);
      r.rechecked = true;
    }
    r.e_d = p.e_d;
    r.e_x = p.e_x;
    r.gap = p.gap;
    r.verdict = classify_gap(p.gap, tols);
    r.laplacian_spectrum = std::move(p.laplacian.values);
    r.signless_spectrum = std::move(p.signless.values);
  } catch (const ConvergenceError& e) {
    r.verdict = Verdict::kSolverFailure;
    r.error = e.what();
  } catch (const NegativeEigenvalueError& e) {
    r.verdict = Verdict::kSolverFailure;
    r.error = e.what();
  }
  return r;
}

/// The k-regular reformulation: with adjacency eigenvalues l_i,
/// lhs = sum sqrt(k - l_i) should equal E(D) and rhs = sum sqrt(k + l_i)
/// should equal E(X).
struct RegularReport {
  int k = 0;
  std::vector<double> adjacency_spectrum;
  double lhs = 0.0;
  double rhs = 0.0;
  double delta_d = 0.0;  // |lhs - e_d|
  double delta_x = 0.0;  // |rhs - e_x|
  bool consistent = true;
};

inline RegularReport check_regular_reformulation(const Graph& g, double e_d, double e_x,
                                                 const Tolerances& tols = {}) {
  const auto k = is_regular(g);
  if (!k) throw ContractViolation("regular reformulation needs a regular graph");
  RegularReport rep;
  rep.k = *k;
  const Spectrum adjacency = sym_eigenvalues(adjacency_matrix(g), tols.jacobi);
  rep.adjacency_spectrum = adjacency.values;
  // k - l and k + l are the L and Q eigenvalues; same zero band as the energies.
  const double clamp = tols.clamp * laplacian(g).frobenius_norm();
  for (double lambda : rep.adjacency_spectrum) {
    rep.lhs += clamped_sqrt(rep.k - lambda, clamp);
    rep.rhs += clamped_sqrt(rep.k + lambda, clamp);
  }
  rep.delta_d = std::abs(rep.lhs - e_d);
  rep.delta_x = std::abs(rep.rhs - e_x);
  rep.consistent = rep.delta_d <= tols.regular_crosscheck && rep.delta_x <= tols.regular_crosscheck;
  return rep;
}

inline RegularReport check_regular_reformulation(const Graph& g, const Tolerances& tols = {}) {
  const auto p = energy_pair(g, tols);
  return check_regular_reformulation(g, p.e_d, p.e_x, tols);
}

// ---------------------------------------------------------------------------
// Record sinks

inline const char* kCsvHeader = "n,graph6,m,bipartite,connected,regular_k,e_d,e_x,gap,verdict";

inline nlohmann::ordered_json record_to_json(const ConjectureRecord& r, bool with_spectra = false) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["graph6"] = r.graph6;
  j["m"] = r.m;
  j["bipartite"] = r.bipartite;
  j["connected"] = r.connected;
  j["regular_k"] = r.regular_k ? nlohmann::ordered_json(*r.regular_k) : nlohmann::ordered_json(nullptr);
  j["e_d"] = round12(r.e_d);
  j["e_x"] = round12(r.e_x);
  j["gap"] = round12(r.gap);
  j["verdict"] = to_string(r.verdict);
  if (!r.error.empty()) j["error"] = r.error;
  if (with_spectra) {
    auto spectrum = [](const std::vector<double>& v) {
      auto a = nlohmann::ordered_json::array();
      for (double x : v) a.push_back(round12(x));
      return a;
    };
    j["laplacian_spectrum"] = spectrum(r.laplacian_spectrum);
    j["signless_laplacian_spectrum"] = spectrum(r.signless_spectrum);
  }
  return j;
}

inline std::string record_to_csv(const ConjectureRecord& r) {
  std::string s = std::to_string(r.n) + ',' + r.graph6 + ',' + std::to_string(r.m) + ',' +
                  (r.bipartite ? "true" : "false") + ',' + (r.connected ? "true" : "false") + ',' +
                  (r.regular_k ? std::to_string(*r.regular_k) : std::string{}) + ',' +
                  format12(r.e_d) + ',' + format12(r.e_x) + ',' + format12(r.gap) + ',' +
                  to_string(r.verdict);
  return s;
}

/// Destination for per-graph records. append() may be called from several
/// threads; implementations serialise internally.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void append(const ConjectureRecord& r) = 0;
};

class CsvSink : public RecordSink {
 public:
  explicit CsvSink(std::ostream& out) : out_(out) { out_ << kCsvHeader << '\n'; }
  void append(const ConjectureRecord& r) override {
    std::lock_guard lock(mutex_);
    out_ << record_to_csv(r) << '\n';
  }

 private:
  std::ostream& out_;
  std::mutex mutex_;
};

class JsonLinesSink : public RecordSink {
 public:
  explicit JsonLinesSink(std::ostream& out) : out_(out) {}
  void append(const ConjectureRecord& r) override {
    const std::string line = record_to_json(r).dump();
    std::lock_guard lock(mutex_);
    out_ << line << '\n';
  }

 private:
  std::ostream& out_;
  std::mutex mutex_;
};

class VectorSink : public RecordSink {
 public:
  void append(const ConjectureRecord& r) override {
    std::lock_guard lock(mutex_);
    records.push_back(r);
  }
  std::vector<ConjectureRecord> records;

 private:
  std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Campaigns

enum class CampaignStatus { kHolds = 0, kViolation = 2, kSolverFailure = 3 };

struct CampaignConfig {
  int n_min = 1;
  int n_max = 8;
  GraphFilter filter;
  std::string filter_name = "all";
  Tolerances tols;
  int workers = 1;
  std::size_t chunk = 4096;
  RecordSink* sink = nullptr;
  // Called on the campaign thread only: (n, graphs done at this n, total at this n).
  std::function<void(int, std::size_t, std::size_t)> progress;
};

struct CampaignReport {
  int n_min = 0;
  int n_max = 0;
  std::string source = "enumeration";
  std::string filter = "all";
  std::size_t graphs_checked = 0;
  std::map<int, std::size_t> per_n;
  std::vector<ConjectureRecord> violations;
  std::optional<double> min_gap_nonbipartite;
  std::string min_gap_witness;
  std::optional<double> min_gap;
  std::size_t equality_count = 0;
  std::size_t holds_count = 0;
  std::size_t solver_failures = 0;
  std::size_t bipartite_checked = 0;
  std::size_t bipartite_mismatches = 0;
  double max_bipartite_abs_gap = 0.0;
  std::size_t regular_checked = 0;
  std::size_t regular_crosscheck_failures = 0;
  double max_regular_delta = 0.0;
  double wall_time = 0.0;

  CampaignStatus status() const {
    if (!violations.empty()) return CampaignStatus::kViolation;
    if (solver_failures > 0 || bipartite_mismatches > 0 || regular_crosscheck_failures > 0) {
      return CampaignStatus::kSolverFailure;
    }
    return CampaignStatus::kHolds;
  }
};

namespace detail {

struct CheckedGraph {
  ConjectureRecord record;
  std::optional<RegularReport> regular;
};

inline CheckedGraph check_with_reformulation(const Graph& g, const Tolerances& tols) {
  CheckedGraph c{check_graph(g, tols), std::nullopt};
  if (c.record.regular_k && c.record.verdict != Verdict::kSolverFailure) {
    try {
      c.regular = check_regular_reformulation(g, c.record.e_d, c.record.e_x, tols);
    } catch (const ConvergenceError& e) {
      c.record.verdict = Verdict::kSolverFailure;
      c.record.error = e.what();
    } catch (const NegativeEigenvalueError& e) {
      c.record.verdict = Verdict::kSolverFailure;
      c.record.error = e.what();
    }
  }
  return c;
}

inline void accumulate(CampaignReport& rep, const CheckedGraph& c) {
  const auto& r = c.record;
  ++rep.graphs_checked;
  ++rep.per_n[r.n];
  switch (r.verdict) {
    case Verdict::kHolds: ++rep.holds_count; break;
    case Verdict::kEquality: ++rep.equality_count; break;
    case Verdict::kViolation: rep.violations.push_back(r); break;
    case Verdict::kSolverFailure: ++rep.solver_failures; return;
  }
  if (!rep.min_gap || r.gap < *rep.min_gap) rep.min_gap = r.gap;
  if (r.bipartite) {
    ++rep.bipartite_checked;
    rep.max_bipartite_abs_gap = std::max(rep.max_bipartite_abs_gap, std::abs(r.gap));
    if (!r.bipartite_consistent()) ++rep.bipartite_mismatches;
  } else if (!rep.min_gap_nonbipartite || r.gap < *rep.min_gap_nonbipartite) {
    rep.min_gap_nonbipartite = r.gap;
    rep.min_gap_witness = r.graph6;
  }
  if (c.regular) {
    ++rep.regular_checked;
    rep.max_regular_delta = std::max({rep.max_regular_delta, c.regular->delta_d, c.regular->delta_x});
    if (!c.regular->consistent) ++rep.regular_crosscheck_failures;
  }
}

// Checks graphs[begin, end) in parallel, then emits and aggregates them in
// index order so the report does not depend on the worker count.
inline void check_block(const std::vector<Graph>& graphs, const CampaignConfig& cfg,
                        CampaignReport& rep) {
  std::vector<CheckedGraph> checked(graphs.size());
  parallel_for(graphs.size(), cfg.workers, [&](std::size_t i, int) {
    checked[i] = check_with_reformulation(graphs[i], cfg.tols);
  }, 32);
  for (const auto& c : checked) {
    if (cfg.sink) cfg.sink->append(c.record);
    accumulate(rep, c);
  }
}

}  // namespace detail

/// Checks every isomorphism class with n_min <= n <= n_max (after the
/// optional filter). Records go to cfg.sink in (n, canonical form) order.
inline CampaignReport run_campaign(const CampaignConfig& cfg) {
  if (cfg.n_min < 1 || cfg.n_min > cfg.n_max) {
    throw ContractViolation("campaign needs 1 <= n_min <= n_max");
  }
  const auto start = std::chrono::steady_clock::now();
  CampaignReport rep;
  rep.n_min = cfg.n_min;
  rep.n_max = cfg.n_max;
  rep.filter = cfg.filter_name;

  std::vector<CanonicalForm> level{CanonicalForm{1, {}}};
  for (int n = 1; n <= cfg.n_max; ++n) {
    if (n > 1) level = detail::extend_level(level, cfg.workers);
    if (n < cfg.n_min) continue;
    rep.per_n[n] = 0;
    std::vector<Graph> block;
    block.reserve(cfg.chunk);
    std::size_t done = 0;
    for (std::size_t i = 0; i < level.size(); ++i) {
      Graph g = graph_from_canonical(level[i]);
      if (!cfg.filter || cfg.filter(g)) block.push_back(std::move(g));
      if (block.size() == cfg.chunk || i + 1 == level.size()) {
        detail::check_block(block, cfg, rep);
        block.clear();
        done = i + 1;
        if (cfg.progress) cfg.progress(n, done, level.size());
      }
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Same checks over an externally supplied list, processed in the given order.
inline CampaignReport run_campaign_on(const std::vector<Graph>& graphs, const CampaignConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  CampaignReport rep;
  rep.source = "graph6";
  rep.filter = cfg.filter_name;
  std::vector<Graph> selected;
  for (const auto& g : graphs) {
    if (!cfg.filter || cfg.filter(g)) selected.push_back(g);
  }
  if (!selected.empty()) {
    rep.n_min = selected.front().order();
    rep.n_max = selected.front().order();
    for (const auto& g : selected) {
      rep.n_min = std::min(rep.n_min, g.order());
      rep.n_max = std::max(rep.n_max, g.order());
    }
  }
  for (std::size_t begin = 0; begin < selected.size(); begin += cfg.chunk) {
    const auto end = std::min(selected.size(), begin + cfg.chunk);
    std::vector<Graph> block(selected.begin() + static_cast<std::ptrdiff_t>(begin),
                             selected.begin() + static_cast<std::ptrdiff_t>(end));
    detail::check_block(block, cfg, rep);
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline nlohmann::ordered_json report_to_json(const CampaignReport& rep) {
  nlohmann::ordered_json j;
  j["n_range"] = {rep.n_min, rep.n_max};
  j["source"] = rep.source;
  j["filter"] = rep.filter;
  j["graphs_checked"] = rep.graphs_checked;
  auto per_n = nlohmann::ordered_json::object();
  for (auto [n, count] : rep.per_n) per_n[std::to_string(n)] = count;
  j["graphs_per_n"] = per_n;
  auto violations = nlohmann::ordered_json::array();
  for (const auto& v : rep.violations) violations.push_back(record_to_json(v));
  j["violations"] = violations;
  j["min_gap"] = rep.min_gap ? nlohmann::ordered_json(round12(*rep.min_gap)) : nlohmann::ordered_json(nullptr);
  if (rep.min_gap_nonbipartite) {
    j["min_gap_nonbipartite"] = {{"gap", round12(*rep.min_gap_nonbipartite)},
                                 {"graph6", rep.min_gap_witness}};
  } else {
    j["min_gap_nonbipartite"] = nullptr;
  }
  j["equality_count"] = rep.equality_count;
  j["holds_count"] = rep.holds_count;
  j["solver_failures"] = rep.solver_failures;
  j["bipartite_checked"] = rep.bipartite_checked;
  j["bipartite_mismatches"] = rep.bipartite_mismatches;
  j["max_bipartite_abs_gap"] = round12(rep.max_bipartite_abs_gap);
  j["regular_checked"] = rep.regular_checked;
  j["regular_crosscheck_failures"] = rep.regular_crosscheck_failures;
  j["max_regular_delta"] = round12(rep.max_regular_delta);
  j["status"] = rep.status() == CampaignStatus::kHolds        ? "conjecture holds on range"
                : rep.status() == CampaignStatus::kViolation ? "violation found"
                                                             : "solver failure";
  j["wall_time"] = round12(rep.wall_time);
  return j;
}

}  // namespace incidence_energy
