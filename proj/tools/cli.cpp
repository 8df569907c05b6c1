#include "cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cyclekit/catalog.hpp"
#include "cyclekit/io.hpp"
#include "cyclekit/nodes.hpp"
#include "cyclekit/reference_tables.hpp"
#include "cyclekit/search.hpp"

namespace cyclekit::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr const char* kFamilyHelp =
    "mapping: collatz, 3x1, perm:<1-6>, carnielli-T:<d>, carnielli-L:<d>, custom:<file>. "
    "perm:1-4 assign (2n,4n-3,4n-1), (2n,4n-1,4n-3), (4n-3,4n-1,2n), (4n-3,2n,4n-1) to the classes "
    "(3n,3n-2,3n-1); perm:5 and perm:6 are (4n-1,2n,4n-3) and (4n-1,4n-3,2n)";

unsigned default_precision() {
  if (const char* env = std::getenv("CYCLEKIT_PRECISION")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 64 && v <= (1u << 20)) return static_cast<unsigned>(v);
    throw UsageError("CYCLEKIT_PRECISION must be an integer >= 64");
  }
  return 256;
}

struct MappingArgs {
  std::string family;
  std::string file;

  void add(CLI::App* cmd, const std::string& default_family) {
    family = default_family;
    cmd->add_option("--family", family, kFamilyHelp);
    cmd->add_option("--file", file, "JSON mapping file (overrides --family)");
  }

  MappingDef resolve() const {
    if (!file.empty()) return load_mapping_file(file);
    return resolve_family(family);
  }
};

struct OutputArgs {
  std::string format = "pretty";
  std::string path;

  void add(CLI::App* cmd, const std::string& default_format) {
    format = default_format;
    cmd->add_option("--format", format, "json, csv or pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));
    cmd->add_option("--output,-o", path, "write to this file instead of stdout");
  }

  void emit(std::ostream& out, const std::string& text) const {
    if (path.empty()) {
      out << text;
    } else {
      write_text_file(path, text);
    }
  }
};

struct Cutoffs {
  std::uint64_t max_steps = 1'000'000;
  std::string max_magnitude = "10^30";

  void add(CLI::App* cmd) {
    cmd->add_option("--max-steps", max_steps, "step cutoff per start")->check(CLI::PositiveNumber);
    cmd->add_option("--max-magnitude", max_magnitude, "magnitude cutoff, e.g. 10^30");
  }

  DetectLimits limits() const {
    const auto mag = parse_bigint(max_magnitude);
    if (!mag || sgn(*mag) <= 0) throw UsageError("--max-magnitude must be a positive integer");
    return {max_steps, *mag};
  }
};

ExactRatio parse_constant(const std::string& text) {
  if (text == "collatz" || text == "7/24") return bound_constants::collatz();
  if (text == "atkin") return bound_constants::atkin();
  if (text == "3x1") return bound_constants::three_x_plus_one();
  const auto q = parse_ratio(text);
  if (!q || sgn(*q) <= 0) throw UsageError("--constant must be collatz, atkin, 3x1 or a positive ratio such as 7/24");
  return *q;
}

std::optional<ExactRatio> constant_for(const std::string& text, const TwoRatioFamily& family) {
  if (!text.empty()) return parse_constant(text);
  return family.default_constant();
}

std::vector<std::uint64_t> parse_counts(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::uint64_t>(v));
    } catch (const std::exception&) {
      throw UsageError("--counts expects comma-separated non-negative integers");
    }
  }
  return out;
}

/// Branch counts from either --counts or (--k1, --k2) on a two-ratio mapping.
BranchCounts counts_from_args(const MappingDef& mapping, const std::string& counts, std::optional<std::uint64_t> k1,
                              std::optional<std::uint64_t> k2) {
  if (!counts.empty()) {
    BranchCounts c{parse_counts(counts)};
    if (c.counts.size() != mapping.branch_count()) {
      throw UsageError("--counts needs " + std::to_string(mapping.branch_count()) + " entries");
    }
    return c;
  }
  if (!k1 || !k2) throw UsageError("give --counts, or --k1 and --k2");
  if (distinct_ratio_count(mapping) != 2) throw UsageError("--k1/--k2 need a mapping with two distinct ratios");
  // Put all growth steps on the first growth branch and all divisions on the first division branch.
  const auto growth = growth_branches(mapping);
  BranchCounts c{std::vector<std::uint64_t>(mapping.branch_count(), 0)};
  bool g_done = false;
  bool d_done = false;
  for (std::size_t i = 0; i < growth.size(); ++i) {
    if (growth[i] && !g_done) {
      c.counts[i] = *k1;
      g_done = true;
    } else if (!growth[i] && !d_done) {
      c.counts[i] = *k2;
      d_done = true;
    }
  }
  return c;
}

std::string node_label(const ReferenceRow& row) {
  return "(" + std::to_string(row.k1) + "," + std::to_string(row.k2) + ")";
}

int check_against_reference(const TwoRatioFamily& family, const NodeOptions& options, std::ostream& out) {
  std::span<const ReferenceRow> rows;
  if (family.growth == ExactRatio(4, 3) && family.division == ExactRatio(2, 3)) {
    rows = collatz_reference_nodes();
  } else if (family.growth == ExactRatio(3, 2) && family.division == ExactRatio(1, 2)) {
    rows = three_x_plus_one_reference_nodes();
  } else {
    throw UsageError("--check-paper is only available for the collatz and 3x1 families");
  }
  std::uint64_t max_k = 0;
  for (const auto& r : rows) max_k = std::max(max_k, r.k);
  NodeStop stop;
  stop.max_k = BigInt(std::to_string(max_k));
  const auto nodes = generate_nodes(family, stop, options);
  const auto checks = compare_with_reference(nodes, rows);
  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (c.passed()) continue;
    ++failed;
    out << "MISMATCH " << node_label(c.row);
    if (!c.found) {
      out << " not generated";
    } else {
      if (!c.side_ok) out << " side";
      if (!c.k_ok) out << " k";
      if (!c.lambda_ok) out << " lambda differs by " << c.lambda_diff;
      if (!c.ln_C_ok) out << " ln_C differs by " << c.ln_C_diff;
    }
    out << "\n";
  }
  out << "reference check: " << (checks.size() - failed) << "/" << checks.size() << " rows within tolerance\n";
  return failed == 0 ? kOk : kVerificationFailed;
}

void print_trajectory(const MappingDef& mapping, const Trajectory& t, std::ostream& out) {
  const auto growth = growth_branches(mapping);
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  out << "step value branch k1 k2\n";
  for (std::size_t j = 0; j < t.values.size(); ++j) {
    out << j << ' ' << to_string(t.values[j]);
    if (j < t.branches.size()) {
      (growth[t.branches[j]] ? k1 : k2) += 1;
      out << ' ' << t.branches[j] << ' ' << k1 << ' ' << k2;
    }
    out << "\n";
  }
  out << "values:";
  for (const auto& v : t.values) out << ' ' << to_string(v);
  out << "\n";
  if (t.magnitude_cutoff) out << "stopped: magnitude cutoff\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycle search, cycle catalogs and PP/PG nodes for generalized 3x+1 mappings", "cyclekit"};
  app.require_subcommand(1);

  unsigned threads = 0;
  unsigned precision = 256;

  // nodes
  auto* nodes_cmd = app.add_subcommand("nodes", "emit the PP/PG node table of a two-ratio family");
  MappingArgs nodes_map;
  nodes_map.add(nodes_cmd, "collatz");
  std::uint64_t depth = 9;
  std::string nodes_max_k;
  std::optional<std::uint64_t> nodes_count;
  std::string nodes_constant;
  bool check_paper = false;
  std::uint64_t exact_k_limit = 100'000;
  OutputArgs nodes_out;
  nodes_out.add(nodes_cmd, "pretty");
  nodes_cmd->add_option("--depth", depth, "largest main node index (0 or 1: seeds only)");
  nodes_cmd->add_option("--max-k", nodes_max_k, "stop before k = k1 + k2 exceeds this");
  nodes_cmd->add_option("--count", nodes_count, "stop after this many products");
  nodes_cmd->add_option("--constant", nodes_constant, "bound constant: collatz (7/24), atkin (63/248), 3x1 (5/12) or p/q");
  nodes_cmd->add_option("--precision", precision, "working precision in bits")->check(CLI::Range(64u, 1u << 20));
  nodes_cmd->add_option("--exact-k-limit", exact_k_limit, "keep exact lambda values while k is at most this");
  nodes_cmd->add_flag("--check-paper", check_paper, "compare with the published node tables (exit 1 on mismatch)");

  // search
  auto* search_cmd = app.add_subcommand("search", "detect the cycle entered from every start in [lo, hi]");
  MappingArgs search_map;
  search_map.add(search_cmd, "collatz");
  std::int64_t lo = 1;
  std::int64_t hi = 200;
  bool no_memo = false;
  Cutoffs search_cut;
  OutputArgs search_out;
  search_cut.add(search_cmd);
  search_out.add(search_cmd, "pretty");
  search_cmd->add_option("--lo", lo, "first start");
  search_cmd->add_option("--hi", hi, "last start");
  search_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  search_cmd->add_flag("--no-memo", no_memo, "disable the known-cycle shortcut");

  // search-node
  auto* snode_cmd = app.add_subcommand("search-node", "search all starts with |m| <= C for a node (k1, k2)");
  MappingArgs snode_map;
  snode_map.add(snode_cmd, "collatz");
  std::string snode_k1;
  std::string snode_k2;
  std::string snode_constant;
  std::string signs = "auto";
  std::int64_t max_range = 10'000'000;
  Cutoffs snode_cut;
  OutputArgs snode_out;
  snode_cut.add(snode_cmd);
  snode_out.add(snode_cmd, "pretty");
  snode_cmd->add_option("--k1", snode_k1, "growth steps")->required();
  snode_cmd->add_option("--k2", snode_k2, "division steps")->required();
  snode_cmd->add_option("--constant", snode_constant, "bound constant (default per family)");
  snode_cmd->add_option("--signs", signs, "auto, positive, negative or both")
      ->check(CLI::IsMember({"auto", "positive", "negative", "both"}));
  snode_cmd->add_option("--max-range", max_range, "cap on |m| searched")->check(CLI::PositiveNumber);
  snode_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "re-walk every cycle of a catalog file");
  std::string catalog_path;
  verify_cmd->add_option("catalog", catalog_path, "catalog JSON")->required();

  // trajectory
  auto* traj_cmd = app.add_subcommand("trajectory", "print a trajectory with branches and running (k1, k2)");
  MappingArgs traj_map;
  traj_map.add(traj_cmd, "collatz");
  std::string start = "1";
  std::uint64_t steps = 10;
  std::string traj_mag;
  traj_cmd->add_option("--start", start, "start value")->required();
  traj_cmd->add_option("--steps", steps, "number of steps");
  traj_cmd->add_option("--max-magnitude", traj_mag, "stop when |value| exceeds this");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "list every cycle up to a period by exact fixed-point solving");
  MappingArgs oracle_map;
  oracle_map.add(oracle_cmd, "collatz");
  std::size_t max_period = 5;
  std::uint64_t budget = 10'000'000;
  std::string oracle_path;
  oracle_cmd->add_option("--max-period", max_period, "largest period");
  oracle_cmd->add_option("--budget", budget, "largest number of branch sequences d^p");
  oracle_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  oracle_cmd->add_option("--output,-o", oracle_path, "write the catalog here instead of stdout");

  // lambda
  auto* lambda_cmd = app.add_subcommand("lambda", "exact lambda and ln lambda of a branch-count vector");
  MappingArgs lambda_map;
  lambda_map.add(lambda_cmd, "collatz");
  std::string lambda_counts;
  std::optional<std::uint64_t> lambda_k1;
  std::optional<std::uint64_t> lambda_k2;
  lambda_cmd->add_option("--counts", lambda_counts, "per-branch counts, e.g. 1,1,1,1");
  lambda_cmd->add_option("--k1", lambda_k1, "growth steps (two-ratio mappings)");
  lambda_cmd->add_option("--k2", lambda_k2, "division steps (two-ratio mappings)");
  lambda_cmd->add_option("--precision", precision, "working precision in bits")->check(CLI::Range(64u, 1u << 20));

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "bound C on the least element of a cycle with given counts");
  MappingArgs bound_map;
  bound_map.add(bound_cmd, "collatz");
  std::string bound_counts;
  std::optional<std::uint64_t> bound_k1;
  std::optional<std::uint64_t> bound_k2;
  std::string bound_constant;
  bound_cmd->add_option("--counts", bound_counts, "per-branch counts");
  bound_cmd->add_option("--k1", bound_k1, "growth steps (two-ratio mappings)");
  bound_cmd->add_option("--k2", bound_k2, "division steps (two-ratio mappings)");
  bound_cmd->add_option("--constant", bound_constant, "collatz, atkin, 3x1 or p/q (required for other families)");
  bound_cmd->add_option("--precision", precision, "working precision in bits")->check(CLI::Range(64u, 1u << 20));

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    precision = default_precision();
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*nodes_cmd) {
      const MappingDef mapping = nodes_map.resolve();
      TwoRatioFamily family = TwoRatioFamily::from_mapping(mapping);
      NodeOptions options;
      options.precision_bits = precision;
      options.exact_k_limit = exact_k_limit;
      options.constant = constant_for(nodes_constant, family);
      if (check_paper) return check_against_reference(family, options, out);
      NodeStop stop;
      stop.max_main = depth;
      if (!nodes_max_k.empty()) {
        const auto k = parse_bigint(nodes_max_k);
        if (!k) throw UsageError("--max-k must be an integer");
        stop.max_k = *k;
      }
      stop.max_products = nodes_count;
      const auto nodes = generate_nodes(family, stop, options);
      std::string text;
      if (nodes_out.format == "json") {
        text = nodes_to_json(nodes, mapping.name());
      } else if (nodes_out.format == "csv") {
        text = nodes_to_csv(nodes);
      } else {
        text = nodes_to_table(nodes);
        if (!options.constant) text += "no bound constant for this family; pass --constant to get ln C\n";
      }
      nodes_out.emit(out, text);
      return kOk;
    }

    if (*search_cmd) {
      if (lo > hi) throw UsageError("empty range: --lo is greater than --hi");
      const MappingDef mapping = search_map.resolve();
      SearchOptions options;
      options.limits = search_cut.limits();
      options.threads = threads;
      options.use_memo = !no_memo;
      const auto report = search_range(mapping, lo, hi, options);
      const std::string text = search_out.format == "json"  ? report_to_json(report)
                               : search_out.format == "csv" ? report_to_csv(report)
                                                            : report_to_table(report);
      search_out.emit(out, text);
      return kOk;
    }

    if (*snode_cmd) {
      const MappingDef mapping = snode_map.resolve();
      const TwoRatioFamily family = TwoRatioFamily::from_mapping(mapping);
      const auto constant = constant_for(snode_constant, family);
      if (!constant) throw UsageError("this family has no default bound constant; pass --constant");
      const auto k1 = parse_bigint(snode_k1);
      const auto k2 = parse_bigint(snode_k2);
      if (!k1 || !k2 || sgn(*k1) < 0 || sgn(*k2) < 0) throw UsageError("--k1 and --k2 must be non-negative integers");
      NodeSearchOptions options;
      options.search.limits = snode_cut.limits();
      options.search.threads = threads;
      options.max_range = max_range;
      options.signs = signs == "positive"   ? SignPolicy::Positive
                      : signs == "negative" ? SignPolicy::Negative
                      : signs == "both"     ? SignPolicy::Both
                                            : SignPolicy::Auto;
      const auto result = search_node(mapping, *k1, *k2, *constant, options);
      std::string text;
      if (snode_out.format == "json") {
        text = node_report_to_json(result);
      } else if (snode_out.format == "csv") {
        text = report_to_csv(result.report);
      } else {
        text = "node (" + to_string(result.k1) + ", " + to_string(result.k2) + ") " + to_string(result.side) +
               ", C = " + result.bound.C.fixed(7) + ", ln C = " + result.bound.ln_C.fixed(7) + "\n";
        text += result.empty ? std::string("C < 1: nothing to search\n") : report_to_table(result.report);
      }
      snode_out.emit(out, text);
      return kOk;
    }

    if (*verify_cmd) {
      const CatalogFile file = load_catalog_file(catalog_path);
      const auto report = verify_catalog(file);
      for (const auto& e : report.entries) {
        out << (e.passed ? "PASS" : "FAIL") << " #" << e.index;
        if (e.passed) {
          out << " period " << e.period << " min " << to_string(*e.min) << " least " << to_string(*e.least_magnitude)
              << " counts";
          for (const auto c : e.counts.counts) out << ' ' << c;
        } else {
          out << ": " << e.message;
        }
        out << "\n";
      }
      out << (report.entries.size() - report.failures()) << "/" << report.entries.size() << " cycles verified\n";
      return report.all_passed() ? kOk : kVerificationFailed;
    }

    if (*traj_cmd) {
      const MappingDef mapping = traj_map.resolve();
      const auto s = parse_bigint(start);
      if (!s) throw UsageError("--start must be an integer");
      TrajectoryLimits limits;
      if (!traj_mag.empty()) {
        limits.max_magnitude = parse_bigint(traj_mag);
        if (!limits.max_magnitude) throw UsageError("--max-magnitude must be an integer");
      }
      print_trajectory(mapping, trajectory(mapping, *s, steps, limits), out);
      return kOk;
    }

    if (*oracle_cmd) {
      const MappingDef mapping = oracle_map.resolve();
      OracleOptions options;
      options.budget = budget;
      options.threads = threads;
      const auto result = enumerate_cycles_exact(mapping, max_period, options);
      const std::string text = catalog_to_json(result.catalog);
      if (oracle_path.empty()) {
        out << text;
      } else {
        write_text_file(oracle_path, text);
        out << result.catalog.cycles.size() << " cycles written to " << oracle_path << "\n";
      }
      return kOk;
    }

    if (*lambda_cmd) {
      const MappingDef mapping = lambda_map.resolve();
      const BranchCounts counts = counts_from_args(mapping, lambda_counts, lambda_k1, lambda_k2);
      const ExactRatio lambda = lambda_exact(mapping, counts);
      out << "lambda " << to_string(lambda) << "\n";
      out << "decimal " << Real::from(lambda, precision).fixed(15) << "\n";
      if (sgn(lambda) > 0) {
        const auto ln = ln_lambda(mapping, counts, precision);
        out << "ln_lambda " << ln.value.scientific(20) << " (error <= 2^" << ln.error_exponent << ")\n";
      } else {
        out << "ln_lambda undefined (lambda is negative)\n";
      }
      return kOk;
    }

    if (*bound_cmd) {
      const MappingDef mapping = bound_map.resolve();
      const BranchCounts counts = counts_from_args(mapping, bound_counts, bound_k1, bound_k2);
      std::optional<ExactRatio> constant;
      if (!bound_constant.empty()) {
        constant = parse_constant(bound_constant);
      } else if (distinct_ratio_count(mapping) == 2) {
        constant = TwoRatioFamily::from_mapping(mapping).default_constant();
      }
      if (!constant) throw UsageError("this family has no default bound constant (par); pass --constant");
      const auto bound = bound_C(mapping, counts, *constant, precision);
      out << "constant " << to_string(bound.constant) << "\n";
      out << "C " << bound.C.fixed(7) << "\n";
      out << "ln_C " << bound.ln_C.fixed(7) << "\n";
      if (bound.used_absolute_lambda) out << "warning: lambda is negative; |lambda| was used\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace cyclekit::cli
