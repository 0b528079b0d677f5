#include "cli.hpp"

#include "treeshape/treeshape.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace treeshape::cli {
namespace {

using nlohmann::json;

inline constexpr std::uint64_t kDefaultSeed = 20060601;
inline constexpr std::size_t kExactMeanCap = 5000;
inline constexpr std::size_t kRootMinCap = 20000;
inline constexpr std::size_t kSubtreePmfCap = 5000;

struct io_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Fixed-precision decimal for report columns.
std::string fixed(double v, int digits = 10) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw io_failure("cannot open output file: " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw io_failure("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string read_all(const std::string& path, std::istream& fallback) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << fallback.rdbuf();
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_failure("cannot open input file: " + path);
    buf << f.rdbuf();
  }
  return buf.str();
}

struct SeedOption {
  std::string text = std::to_string(kDefaultSeed);

  std::uint64_t resolve(std::ostream& err) const {
    if (text == "random") {
      const std::uint64_t s = (static_cast<std::uint64_t>(std::random_device{}()) << 32) |
                              std::random_device{}();
      err << "seed=" << s << '\n';
      return s;
    }
    try {
      std::size_t used = 0;
      const auto v = std::stoull(text, &used, 0);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw usage_error("--seed must be an unsigned 64-bit integer or 'random'");
    }
  }
};

json envelope(const std::string& schema) {
  return json{{"schema", schema}, {"version", kVersion}};
}

ModelKind tree_model(const std::string& name) {
  const ModelKind m = parse_model(name);
  if (!is_tree_model(m)) throw usage_error("model must be 'yule' or 'uniform'");
  return m;
}

std::size_t exact_cap_from_env() {
  const char* v = std::getenv(kExactCapEnv);
  if (!v || !*v) return kDefaultJointPmfCap;
  try {
    std::size_t used = 0;
    const auto cap = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument("trailing");
    return cap;
  } catch (const std::exception&) {
    throw usage_error(std::string(kExactCapEnv) + " must be a positive integer");
  }
}

json pmf_json(const ExactPmf& pmf) {
  json obj = json::object();
  for (const auto& [k, p] : pmf) obj[std::to_string(k)] = to_string(p);
  return obj;
}

// ---------------------------------------------------------------------------
// gen

struct GenConfig {
  std::string model;
  std::size_t n = 0;
  std::size_t count = 1;
  SeedOption seed;
  std::string format = "newick";
  std::string output;
};

void cmd_gen(const GenConfig& cfg, Streams io) {
  const ModelKind model = tree_model(cfg.model);
  const std::uint64_t seed = cfg.seed.resolve(io.err);
  OutputTarget target(cfg.output, io.out);
  std::ostream& os = target.get();
  json trees = json::array();
  for (std::size_t i = 0; i < cfg.count; ++i) {
    RngStream rng = replication_stream(seed, StreamTag::Generate, cfg.n, i);
    const PhyloTree tree = generate(cfg.n, model, rng);
    if (cfg.format == "newick")
      os << emit_newick(tree) << '\n';
    else
      trees.push_back(tree_to_json(tree));
  }
  if (cfg.format == "json") os << trees.dump() << '\n';
  target.finish();
}

// ---------------------------------------------------------------------------
// stats

struct StatsConfig {
  std::string input;
  std::string format = "newick";
  std::string output;
};

void write_stats_row(std::ostream& os, const PhyloTree& tree) {
  const TreeStats st = compute_stats(tree);
  os << tree.leaf_count() << ',' << st.sackin << ',' << st.colless << ',' << st.min_split_sum
     << ',' << fixed(st.f_stat) << '\n';
}

void cmd_stats(const StatsConfig& cfg, Streams io) {
  const std::string text = read_all(cfg.input, io.in);
  std::vector<PhyloTree> trees;
  if (cfg.format == "json") {
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
      json doc;
      try {
        doc = json::parse(text);
      } catch (const json::exception& e) {
        throw io_failure(std::string("invalid JSON input: ") + e.what());
      }
      try {
        if (doc.is_array()) {
          for (const auto& t : doc) trees.push_back(tree_from_json(t));
        } else {
          trees.push_back(tree_from_json(doc));
        }
      } catch (const invalid_tree& e) {
        throw io_failure(std::string("invalid tree: ") + e.what());
      }
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        trees.push_back(parse_newick(line));
      } catch (const std::invalid_argument& e) {
        throw io_failure("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  OutputTarget target(cfg.output, io.out);
  std::ostream& os = target.get();
  os << "n,sackin,colless,minsum,fstat\n";
  for (const auto& t : trees) write_stats_row(os, t);
  target.finish();
}

// ---------------------------------------------------------------------------
// exact

struct ExactConfig {
  std::string what;
  std::size_t n = 0;
  std::string model = "yule";
  std::string output;
};

void cmd_exact(const ExactConfig& cfg, Streams io) {
  json doc = envelope("treeshape.exact/1");
  doc["what"] = cfg.what;
  doc["n"] = cfg.n;
  const std::size_t n = cfg.n;
  if (cfg.what == "mean-sackin" || cfg.what == "mean-colless") {
    if (n < 1) throw usage_error("--n must be >= 1");
    if (n > kExactMeanCap) throw cap_exceeded("exact mean: n = " + std::to_string(n), kExactMeanCap);
    doc["model"] = "yule";
    doc["value"] = to_string(cfg.what == "mean-sackin" ? mean_sackin_yule(n) : mean_colless_yule(n));
  } else if (cfg.what == "joint-pmf" || cfg.what == "moments") {
    const ModelKind model = tree_model(cfg.model);
    const JointPMF pmf = joint_pmf(n, model, exact_cap_from_env());
    doc["model"] = std::string(to_string(model));
    if (cfg.what == "joint-pmf") {
      json rows = json::array();
      for (const auto& [key, p] : pmf.mass)
        rows.push_back({{"s", key.first}, {"c", key.second}, {"p", to_string(p)}});
      doc["value"] = std::move(rows);
    } else {
      const ExactMoments m = exact_moments(pmf);
      doc["value"] = {{"mean_s", to_string(m.mean_s)}, {"mean_c", to_string(m.mean_c)},
                      {"var_s", to_string(m.var_s)},   {"var_c", to_string(m.var_c)},
                      {"cov_sc", to_string(m.cov_sc)}};
    }
  } else if (cfg.what == "k-pmf" || cfg.what == "khat-pmf") {
    if (n > kSubtreePmfCap) throw cap_exceeded("subtree pmf: n = " + std::to_string(n), kSubtreePmfCap);
    doc["value"] = pmf_json(cfg.what == "k-pmf" ? k_pmf(n) : khat_pmf(n));
  } else if (cfg.what == "root-min") {
    if (n > kRootMinCap) throw cap_exceeded("root-min: n = " + std::to_string(n), kRootMinCap);
    doc["value"] = to_string(expected_root_min_catalan(n));
    doc["approx"] = expected_root_min_catalan_value(n);
  } else {
    throw usage_error("unknown --what: " + cfg.what);
  }
  OutputTarget target(cfg.output, io.out);
  target.get() << doc.dump() << '\n';
  target.finish();
}

// ---------------------------------------------------------------------------
// mc

struct McConfig {
  std::string model;
  std::size_t n = 0;
  std::vector<std::size_t> n_list;
  std::size_t reps = 1000;
  SeedOption seed;
  unsigned workers = 1;
  std::string format = "json";
  std::string output;
};

json report_json(const ConvergenceRow& row) {
  const auto& r = row.report;
  return json{{"n", r.n},
              {"mean_s", number_or_null(r.mean_s)},
              {"mean_c", number_or_null(r.mean_c)},
              {"var_s", number_or_null(r.var_s)},
              {"var_c", number_or_null(r.var_c)},
              {"cov", number_or_null(r.cov)},
              {"cor", number_or_null(r.cor)},
              {"se_mean_s", number_or_null(r.se_mean_s)},
              {"se_mean_c", number_or_null(r.se_mean_c)},
              {"se_var_s", number_or_null(r.se_var_s)},
              {"se_var_c", number_or_null(r.se_var_c)},
              {"se_cov", number_or_null(r.se_cov)},
              {"se_cor", number_or_null(r.se_cor)},
              {"mean_gap", number_or_null(r.mean_gap)},
              {"se_mean_gap", number_or_null(r.se_mean_gap)},
              {"trees_checked", r.trees_checked},
              {"limit",
               {{"mean_s", row.limit.mean_s},
                {"var_s", row.limit.var_s},
                {"var_c", row.limit.var_c},
                {"cov", row.limit.cov},
                {"cor", row.limit.cor}}}};
}

void cmd_mc(const McConfig& cfg, Streams io) {
  const ModelKind model = tree_model(cfg.model);
  const std::uint64_t seed = cfg.seed.resolve(io.err);
  std::vector<std::size_t> ns = cfg.n_list;
  if (ns.empty()) ns.push_back(cfg.n);
  for (auto v : ns)
    if (v < 2) throw usage_error("every n must be >= 2");
  if (cfg.reps < 2) throw usage_error("--reps must be >= 2");
  const auto rows = convergence_table(model, ns, cfg.reps, seed, cfg.workers, [&](std::size_t n) {
    io.err << "mc: running n=" << n << " reps=" << cfg.reps << '\n';
  });

  OutputTarget target(cfg.output, io.out);
  std::ostream& os = target.get();
  if (cfg.format == "csv") {
    os << "model,n,reps,seed,mean_s,mean_c,var_s,var_c,cov,cor,se_mean_s,se_mean_c,se_var_s,"
          "se_var_c,se_cov,se_cor,mean_gap,se_mean_gap,limit_mean_s,limit_var_s,limit_var_c,"
          "limit_cov,limit_cor\n";
    for (const auto& row : rows) {
      const auto& r = row.report;
      os << to_string(model) << ',' << r.n << ',' << r.reps << ',' << seed;
      for (double v : {r.mean_s, r.mean_c, r.var_s, r.var_c, r.cov, r.cor, r.se_mean_s,
                       r.se_mean_c, r.se_var_s, r.se_var_c, r.se_cov, r.se_cor, r.mean_gap,
                       r.se_mean_gap, row.limit.mean_s, row.limit.var_s, row.limit.var_c,
                       row.limit.cov, row.limit.cor})
        os << ',' << fixed(v);
      os << '\n';
    }
  } else {
    json doc = envelope("treeshape.mc/1");
    doc["model"] = std::string(to_string(model));
    doc["seed"] = seed;
    doc["reps"] = cfg.reps;
    doc["workers"] = cfg.workers;
    doc["normalization"] = model == ModelKind::Yule ? "(X - E[X]) / n" : "X / n^1.5";
    json arr = json::array();
    for (const auto& row : rows) arr.push_back(report_json(row));
    doc["rows"] = std::move(arr);
    os << doc.dump() << '\n';
  }
  target.finish();
}

// ---------------------------------------------------------------------------
// limit

struct LimitConfig {
  std::string what = "moments";
  int depth = -1;
  std::size_t via_n = 0;
  std::size_t steps = 1024;
  std::size_t count = 1;
  bool no_grid_correction = false;
  SeedOption seed;
  std::string format = "json";
  std::string output;
};

void cmd_limit(const LimitConfig& cfg, Streams io) {
  OutputTarget target(cfg.output, io.out);
  std::ostream& os = target.get();
  if (cfg.what == "moments") {
    const auto lm = limit_moments_yule();
    json doc = envelope("treeshape.limit/1");
    doc["what"] = "moments";
    doc["yule"] = {{"var_s", lm.var_s}, {"var_c", lm.var_c}, {"cov_sc", lm.cov_sc},
                   {"cor_sc", lm.cor_sc}};
    doc["airy"] = {{"mean", airy_moment(1)}, {"second_moment", airy_moment(2)},
                   {"variance", airy_variance()}};
    if (cfg.format == "csv") {
      os << "constant,value\n"
         << "yule_var_s," << fixed(lm.var_s, 15) << '\n'
         << "yule_var_c," << fixed(lm.var_c, 15) << '\n'
         << "yule_cov_sc," << fixed(lm.cov_sc, 15) << '\n'
         << "yule_cor_sc," << fixed(lm.cor_sc, 15) << '\n'
         << "airy_mean," << fixed(airy_moment(1), 15) << '\n'
         << "airy_variance," << fixed(airy_variance(), 15) << '\n';
    } else {
      os << doc.dump() << '\n';
    }
    target.finish();
    return;
  }

  const std::uint64_t seed = cfg.seed.resolve(io.err);
  json doc = envelope("treeshape.limit/1");
  doc["what"] = cfg.what;
  doc["seed"] = seed;
  doc["count"] = cfg.count;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> names;

  if (cfg.what == "pair") {
    if ((cfg.depth >= 0) == (cfg.via_n > 0)) throw usage_error("pair needs exactly one of --depth or --via-n");
    names = {"s", "c"};
    columns.assign(2, {});
    std::optional<ViaNSampler> via;
    if (cfg.via_n > 0) {
      via.emplace(cfg.via_n);
      doc["via_n"] = cfg.via_n;
    } else {
      doc["depth"] = cfg.depth;
    }
    for (std::size_t i = 0; i < cfg.count; ++i) {
      RngStream rng = replication_stream(seed, StreamTag::Limit,
                                         via ? cfg.via_n : static_cast<std::size_t>(cfg.depth), i);
      const LimitPair p = via ? (*via)(rng) : sample_limit_pair(cfg.depth, rng);
      columns[0].push_back(p.s);
      columns[1].push_back(p.c);
    }
  } else if (cfg.what == "excursion" || cfg.what == "dyck") {
    names = {"airy"};
    columns.assign(1, {});
    doc["steps"] = cfg.steps;
    if (cfg.what == "excursion") doc["grid_correction"] = !cfg.no_grid_correction;
    for (std::size_t i = 0; i < cfg.count; ++i) {
      RngStream rng = replication_stream(seed, StreamTag::Airy, cfg.steps, i);
      columns[0].push_back(cfg.what == "excursion"
                               ? sample_airy_excursion(cfg.steps, rng, !cfg.no_grid_correction)
                               : sample_airy_dyck(cfg.steps, rng));
    }
  } else {
    throw usage_error("unknown --what: " + cfg.what);
  }

  if (cfg.format == "csv") {
    os << "index";
    for (const auto& nm : names) os << ',' << nm;
    os << '\n';
    for (std::size_t i = 0; i < cfg.count; ++i) {
      os << i;
      for (const auto& col : columns) os << ',' << fixed(col[i], 12);
      os << '\n';
    }
  } else {
    json samples = json::object();
    for (std::size_t c = 0; c < names.size(); ++c) samples[names[c]] = columns[c];
    doc["samples"] = std::move(samples);
    os << doc.dump() << '\n';
  }
  target.finish();
}

// ---------------------------------------------------------------------------
// test

struct TestConfig {
  std::string null_model = "yule";
  std::size_t reps = 1000;
  SeedOption seed;
  unsigned workers = 1;
  std::string input;
  std::string format = "json";
  std::string output;
};

void cmd_test(const TestConfig& cfg, Streams io) {
  const ModelKind null_model = tree_model(cfg.null_model);
  const std::uint64_t seed = cfg.seed.resolve(io.err);
  const std::string text = read_all(cfg.input, io.in);
  PhyloTree tree;
  try {
    tree = parse_newick(text);
  } catch (const std::invalid_argument& e) {
    throw io_failure(std::string("input tree: ") + e.what());
  }
  const TestReport rep = np_test(tree, null_model, cfg.reps, seed, cfg.workers);
  OutputTarget target(cfg.output, io.out);
  std::ostream& os = target.get();
  const char* tail = rep.tail == Tail::Upper ? "upper" : "lower";
  if (cfg.format == "csv") {
    os << "n,fstat,null,tail,reps,seed,extreme,p_value\n"
       << rep.n << ',' << fixed(rep.observed) << ',' << to_string(null_model) << ',' << tail
       << ',' << rep.reps << ',' << seed << ',' << rep.extreme_count << ','
       << fixed(rep.p_value) << '\n';
  } else {
    json doc = envelope("treeshape.test/1");
    doc["n"] = rep.n;
    doc["fstat"] = rep.observed;
    doc["null"] = std::string(to_string(null_model));
    doc["tail"] = tail;
    doc["reps"] = rep.reps;
    doc["seed"] = seed;
    doc["extreme"] = rep.extreme_count;
    doc["p_value"] = rep.p_value;
    os << doc.dump() << '\n';
  }
  target.finish();
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Random phylogenetic tree shapes: generation, balance statistics, exact laws, "
               "Monte Carlo moments, limit laws."};
  app.name("treeshape");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  const auto models = CLI::IsMember({"yule", "uniform"});

  GenConfig gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate random trees (Newick one per line, or a JSON array)");
  gen_cmd->add_option("--model", gen.model, "yule | uniform")->required()->check(models);
  gen_cmd->add_option("--n", gen.n, "Number of leaves (>= 1)")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--count", gen.count, "Number of trees")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed.text, "Unsigned 64-bit seed or 'random'");
  gen_cmd->add_option("--format", gen.format, "newick | json")->check(CLI::IsMember({"newick", "json"}));
  gen_cmd->add_option("--output,-o", gen.output, "Output path (default stdout)");

  StatsConfig stats;
  auto* stats_cmd = app.add_subcommand(
      "stats", "Per-tree statistics as CSV: n,sackin,colless,minsum,fstat (fstat = sum ln(N_j - 1), "
               "natural log, 10 decimals)");
  stats_cmd->add_option("--input,-i", stats.input, "Input path (default stdin); Newick one tree per line");
  stats_cmd->add_option("--format", stats.format, "Input format: newick | json")
      ->check(CLI::IsMember({"newick", "json"}));
  stats_cmd->add_option("--output,-o", stats.output, "Output path (default stdout)");

  ExactConfig exact;
  auto* exact_cmd = app.add_subcommand(
      "exact", "Exact rational quantities as JSON (rationals rendered \"p/q\"). joint-pmf cap is "
               "read from TREESHAPE_EXACT_CAP (default 18)");
  exact_cmd->add_option("--what", exact.what, "mean-sackin | mean-colless | joint-pmf | moments | k-pmf | khat-pmf | root-min")
      ->required()
      ->check(CLI::IsMember({"mean-sackin", "mean-colless", "joint-pmf", "moments", "k-pmf", "khat-pmf", "root-min"}));
  exact_cmd->add_option("--n", exact.n, "Leaf count (vertex count for khat-pmf and root-min)")->required();
  exact_cmd->add_option("--model", exact.model, "yule | uniform (joint-pmf, moments)")->check(models);
  exact_cmd->add_option("--output,-o", exact.output, "Output path (default stdout)");

  McConfig mc;
  auto* mc_cmd = app.add_subcommand(
      "mc", "Monte Carlo moments of normalized (S_n, C_n). Yule: (X - E[X])/n; uniform: X/n^1.5. "
            "CSV columns: model,n,reps,seed, estimates, standard errors, limit constants (10 decimals)");
  mc_cmd->add_option("--model", mc.model, "yule | uniform")->required()->check(models);
  auto* mc_n = mc_cmd->add_option("--n", mc.n, "Number of leaves (>= 2)");
  auto* mc_list = mc_cmd->add_option("--n-list", mc.n_list, "Ascending list of n for a convergence table")
                      ->delimiter(',');
  mc_n->excludes(mc_list);
  mc_list->excludes(mc_n);
  mc_cmd->add_option("--reps", mc.reps, "Replications per n (>= 2)");
  mc_cmd->add_option("--seed", mc.seed.text, "Unsigned 64-bit seed or 'random'");
  mc_cmd->add_option("--workers", mc.workers, "Worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);
  mc_cmd->add_option("--format", mc.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  mc_cmd->add_option("--output,-o", mc.output, "Output path (default stdout)");

  LimitConfig lim;
  auto* lim_cmd = app.add_subcommand("limit", "Limit laws: Yule fixed point and Airy samplers");
  lim_cmd->add_option("--what", lim.what, "moments | pair | excursion | dyck")
      ->check(CLI::IsMember({"moments", "pair", "excursion", "dyck"}));
  auto* lim_depth = lim_cmd->add_option("--depth", lim.depth, "pair: exact unrolling depth (0..22)")
                        ->check(CLI::Range(0, kMaxUnrollDepth));
  auto* lim_via = lim_cmd->add_option("--via-n", lim.via_n, "pair: sample centered Yule trees with N leaves")
                      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  lim_depth->excludes(lim_via);
  lim_via->excludes(lim_depth);
  lim_cmd->add_option("--steps", lim.steps, "excursion: grid steps (even); dyck: half-length")
      ->check(CLI::PositiveNumber);
  lim_cmd->add_option("--count", lim.count, "Number of samples")->check(CLI::PositiveNumber);
  lim_cmd->add_flag("--no-grid-correction", lim.no_grid_correction,
                    "excursion: report the raw trapezoid area");
  lim_cmd->add_option("--seed", lim.seed.text, "Unsigned 64-bit seed or 'random'");
  lim_cmd->add_option("--format", lim.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  lim_cmd->add_option("--output,-o", lim.output, "Output path (default stdout)");

  TestConfig test;
  auto* test_cmd = app.add_subcommand(
      "test", "F_n balance test of one Newick tree against a null model (Monte Carlo p-value)");
  test_cmd->add_option("--null", test.null_model, "yule | uniform")->check(models);
  test_cmd->add_option("--reps", test.reps, "Null simulations")->check(CLI::PositiveNumber);
  test_cmd->add_option("--seed", test.seed.text, "Unsigned 64-bit seed or 'random'");
  test_cmd->add_option("--workers", test.workers, "Worker threads")->check(CLI::PositiveNumber);
  test_cmd->add_option("--input,-i", test.input, "Input path (default stdin)");
  test_cmd->add_option("--format", test.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  test_cmd->add_option("--output,-o", test.output, "Output path (default stdout)");

  std::vector<std::string> argv_storage{"treeshape"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const Streams io{in, out, err};
  try {
    if (*gen_cmd) cmd_gen(gen, io);
    else if (*stats_cmd) cmd_stats(stats, io);
    else if (*exact_cmd) cmd_exact(exact, io);
    else if (*mc_cmd) cmd_mc(mc, io);
    else if (*lim_cmd) cmd_limit(lim, io);
    else if (*test_cmd) cmd_test(test, io);
  } catch (const cap_exceeded& e) {
    err << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const io_failure& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace treeshape::cli
