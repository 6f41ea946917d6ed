#include "mal/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mal/audit.hpp"
#include "mal/error.hpp"
#include "mal/fairness.hpp"
#include "mal/ingest.hpp"
#include "mal/io.hpp"
#include "mal/mcsim.hpp"
#include "mal/orderprob.hpp"

namespace mal::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  // distribution
  double mu = 1.973;
  double sigma2 = 0.585;
  std::string dist_file;
  // grid
  int n = 0;
  std::vector<int> n_list;
  std::vector<int> m;
  std::vector<int> cumulative;
  std::vector<double> omega;
  std::string prior = "uniform:-600:600";
  std::vector<double> tau_c;
  std::uint64_t trials = 1'000'000;
  std::optional<std::uint64_t> seed;
  // data
  std::string logs;
  std::size_t pairs = 100'000;
  std::string subset = "all";
  std::string blocks;
  std::string mempools;
  std::int64_t capacity = 4'000'000;
  std::size_t window = 6;
  std::vector<double> gamma;
  int bins = 16;
  // simulation
  std::size_t txs = 1000;
  double rate = 1.0;
  std::string attack = "none";
  double drop = 0.0;
  double block_interval = 600.0;
  double lag = 0.0;
  int miner_paths = 1;
  // output
  std::string format = "csv";
  std::string out;
};

PropagationDistribution make_dist(const Options& o) {
  if (!o.dist_file.empty()) return load_empirical_csv(o.dist_file);
  return lognormal(o.mu, o.sigma2);
}

std::uint64_t resolve_seed(const Options& o, std::ostream& err) {
  std::uint64_t seed = 1;
  if (o.seed) {
    seed = *o.seed;
  } else if (const char* env = std::getenv("MAL_SEED"); env && *env) {
    const std::string_view s(env);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc{} || p != s.data() + s.size()) throw UsageError("MAL_SEED must be an unsigned 64-bit integer");
  }
  err << "seed=" << seed << '\n';
  return seed;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError(std::string("bad number in ") + what + ": '" + s + "'");
  }
  if (used != s.size()) throw UsageError(std::string("bad number in ") + what + ": '" + s + "'");
  return v;
}

std::size_t to_index(const std::string& s, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw UsageError(std::string("bad index in ") + what + ": '" + s + "'");
  return v;
}

OmegaPrior parse_prior(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 3 && parts[0] == "uniform")
    return UniformPrior{to_double(parts[1], "--prior"), to_double(parts[2], "--prior")};
  if (parts.size() == 3 && parts[0] == "dexp")
    return TruncatedDoubleExponential{to_double(parts[1], "--prior"), to_double(parts[2], "--prior")};
  throw UsageError("--prior must be uniform:<lo>:<hi> or dexp:<scale>:<range>");
}

std::vector<std::size_t> parse_indices(const std::string& list) {
  std::vector<std::size_t> out;
  for (const auto& p : split(list, ',')) out.push_back(to_index(p, "--attack"));
  return out;
}

AttackSpec parse_attack(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (spec == "none") return NoAttack{};
  if (parts.size() == 3 && parts[0] == "swap")
    return SwapPair{to_index(parts[1], "--attack"), to_double(parts[2], "--attack")};
  if (parts.size() == 2 && parts[0] == "censor") return Censor{parse_indices(parts[1])};
  if (parts.size() == 3 && parts[0] == "delay") {
    const auto blocks = to_index(parts[1], "--attack");
    if (blocks > 1'000'000) throw UsageError("--attack: blocks_delayed too large");
    return CrossBlockDelay{parse_indices(parts[2]), static_cast<int>(blocks)};
  }
  throw UsageError("--attack must be none, swap:<victim>:<gap_s>, censor:<i,j,..> or delay:<blocks>:<i,j,..>");
}

PairSubset parse_subset(const std::string& s) {
  return s == "fully-received" ? PairSubset::FullyReceived : PairSubset::AllTxs;
}

// Writes to --out when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("cannot write " + path);
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

bool json_format(const Options& o) { return o.format == "json"; }

void check_ms(int n, const std::vector<int>& ms, const char* flag) {
  for (int m : ms)
    if (m < 0 || m > n) throw DomainError(std::string(flag) + " values must lie in [0, n]");
}

std::string m_key(int m) { return "m=" + std::to_string(m); }
std::string ge_key(int m) { return "m>=" + std::to_string(m); }

void table_header(std::ostream& s, const Options& o) {
  s << "omega";
  for (int m : o.m) s << ',' << m_key(m);
  for (int m : o.cumulative) s << ',' << ge_key(m);
  s << '\n';
}

// ---- prob ----

void cmd_prob_table(const Options& o, std::ostream& out) {
  if (o.n < 1) throw DomainError("--n must be >= 1");
  check_ms(o.n, o.m, "--m");
  check_ms(o.n, o.cumulative, "--cumulative");
  const auto dist = make_dist(o);
  ojson rows = ojson::array();
  std::ostringstream csv;
  table_header(csv, o);
  for (double w : o.omega) {
    const auto q = agreement_distribution(dist, o.n, w);
    ojson row;
    row["omega"] = w;
    row["q"] = ojson::object();
    csv << format_double(w);
    for (int m : o.m) {
      row["q"][m_key(m)] = q[m];
      csv << ',' << format_percent(q[m]);
    }
    for (int m : o.cumulative) {
      double s = 0;
      for (int k = o.n; k >= m; --k) s += q[k];
      s = std::min(s, 1.0);
      row["q"][ge_key(m)] = s;
      csv << ',' << format_percent(s);
    }
    csv << '\n';
    rows.push_back(row);
  }
  if (json_format(o)) {
    ojson j;
    j["n"] = o.n;
    j["rows"] = rows;
    out << j.dump(2) << '\n';
  } else {
    out << csv.str();
  }
}

void cmd_prob_posterior(const Options& o, std::ostream& out) {
  if (o.n < 1) throw DomainError("--n must be >= 1");
  check_ms(o.n, o.m, "--m");
  const auto dist = make_dist(o);
  const auto prior = parse_prior(o.prior);
  const auto post = posterior_by_m(dist, o.n, prior);
  std::vector<int> ms = o.m;
  if (ms.empty())
    for (int k = 0; k <= o.n; ++k) ms.push_back(k);
  if (json_format(o)) {
    ojson j;
    j["n"] = o.n;
    j["prior"] = o.prior;
    j["rows"] = ojson::array();
    for (int m : ms) j["rows"].push_back({{"m", m}, {"p_sent_before", post[m]}});
    out << j.dump(2) << '\n';
  } else {
    out << "m,p_sent_before\n";
    for (int m : ms) out << m << ',' << format_percent(post[m]) << '\n';
  }
}

void cmd_prob_crossblock(const Options& o, std::ostream& out) {
  const auto dist = make_dist(o);
  std::vector<int> ns = o.n_list;
  if (ns.empty()) throw UsageError("--n is required");
  if (o.tau_c.empty()) throw UsageError("--tau-c is required");
  ojson rows = ojson::array();
  std::ostringstream csv;
  csv << "n,tau_c,prob\n";
  for (int n : ns)
    for (double tau : o.tau_c) {
      const double p = cross_block_prob(dist, n, tau);
      rows.push_back({{"n", n}, {"tau_c", tau}, {"prob", p}});
      csv << n << ',' << format_double(tau) << ',' << format_double(p) << '\n';
    }
  if (json_format(o)) {
    out << ojson{{"rows", rows}}.dump(2) << '\n';
  } else {
    out << csv.str();
  }
}

// ---- sim ----

void cmd_sim_pairs(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.n < 1) throw DomainError("--n must be >= 1");
  if (o.trials < 1000) throw DomainError("--trials must be >= 1000");
  check_ms(o.n, o.m, "--m");
  check_ms(o.n, o.cumulative, "--cumulative");
  const auto dist = make_dist(o);
  const auto seed = resolve_seed(o, err);
  ojson rows = ojson::array();
  std::ostringstream csv;
  table_header(csv, o);
  for (double w : o.omega) {
    const auto counts = agreement_counts(dist, o.n, w, o.trials, seed);
    ojson row;
    row["omega"] = w;
    row["trials"] = o.trials;
    row["estimate"] = ojson::object();
    row["std_err"] = ojson::object();
    csv << format_double(w);
    auto put = [&](const std::string& key, const AgreementEstimate& e) {
      row["estimate"][key] = e.estimate;
      row["std_err"][key] = e.std_err;
      csv << ',' << format_percent(e.estimate);
    };
    for (int m : o.m) put(m_key(m), estimate_from_counts(counts, m, AgreementMode::Exactly));
    for (int m : o.cumulative) put(ge_key(m), estimate_from_counts(counts, m, AgreementMode::AtLeast));
    csv << '\n';
    rows.push_back(row);
  }
  if (json_format(o)) {
    ojson j;
    j["n"] = o.n;
    j["seed"] = seed;
    j["rows"] = rows;
    out << j.dump(2) << '\n';
  } else {
    out << csv.str();
  }
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  body(f);
  if (!f) throw Error("write failed: " + path.string());
}

void cmd_sim_network(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw UsageError("sim network needs --out <dir>");
  SimConfig cfg;
  cfg.dist = make_dist(o);
  cfg.n_observers = o.n == 0 ? 16 : o.n;
  cfg.seed = resolve_seed(o, err);
  cfg.tx_count = o.txs;
  if (o.omega.size() > 1) throw UsageError("sim network takes a single --omega");
  if (o.omega.size() == 1) cfg.send_process = FixedGap{o.omega[0]};
  else cfg.send_process = PoissonArrivals{o.rate};
  cfg.block_capacity = o.capacity;
  cfg.drop_prob = o.drop;
  cfg.block_interval_s = o.block_interval;
  cfg.template_lag_s = o.lag;
  cfg.miner_paths = o.miner_paths;
  const auto attack = parse_attack(o.attack);
  const auto sim = simulate_network(cfg, attack);

  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir / "logs");
  std::filesystem::create_directories(dir / "mempools");
  std::size_t events = 0;
  for (std::size_t i = 0; i < sim.n(); ++i) {
    const auto log = observer_log(sim, i);
    events += log.size();
    write_file(dir / "logs" / (sim.observers[i] + ".jsonl"), [&](std::ostream& f) { write_observer_log(f, log); });
    const auto mp = observer_mempool(sim, i);
    write_file(dir / "mempools" / (sim.observers[i] + ".jsonl"), [&](std::ostream& f) { write_mempool(f, mp.txs); });
  }
  write_file(dir / "blocks.jsonl", [&](std::ostream& f) { write_blocks(f, sim.blocks); });
  write_file(dir / "truth.json", [&](std::ostream& f) { f << ground_truth_json(sim, attack).dump(2) << '\n'; });

  if (json_format(o)) {
    ojson j;
    j["observers"] = sim.n();
    j["txs"] = sim.truth.txs.size();
    j["blocks"] = sim.blocks.size();
    j["events"] = events;
    j["seed"] = cfg.seed;
    out << j.dump(2) << '\n';
  } else {
    out << "observers,txs,blocks,events\n"
        << sim.n() << ',' << sim.truth.txs.size() << ',' << sim.blocks.size() << ',' << events << '\n';
  }
}

// ---- ingest / fairness ----

struct Analysis {
  std::vector<ParsedLog> logs;
  ReceptionLedger ledger;
  COrderReport c_order;
};

Analysis analyze_logs(const Options& o, std::uint64_t seed, std::ostream& err) {
  if (o.logs.empty()) throw UsageError("--logs <dir> is required");
  auto logs = load_observer_logs(o.logs);
  std::size_t dups = 0;
  for (const auto& l : logs) dups += l.duplicates;
  if (dups > 0) err << "warning: " << dups << " duplicate receptions folded into the earliest\n";
  auto ledger = merge(std::span<const ParsedLog>(logs));
  const auto sample = sample_pairs(ledger, o.pairs, seed, parse_subset(o.subset));
  if (sample.with_replacement) err << "warning: subset too small, pairs drawn with replacement\n";
  auto report = c_order(ledger, sample);
  return {std::move(logs), std::move(ledger), std::move(report)};
}

void cmd_ingest_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  const auto seed = resolve_seed(o, err);
  const auto a = analyze_logs(o, seed, err);
  const auto cov = coverage(a.ledger);
  MutualInformation mi;
  mi.bins = o.bins;
  if (a.ledger.observer_count() >= 2) mi = pairwise_mutual_information(a.ledger, o.bins);
  if (json_format(o)) {
    ojson j;
    j["observers"] = a.ledger.observers();
    j["coverage"] = to_json(cov);
    j["c_order"] = to_json(a.c_order);
    j["mutual_information"] = to_json(mi, a.ledger.observers());
    out << j.dump(2) << '\n';
  } else {
    write_coverage_csv(out, cov);
    out << '\n';
    write_c_order_csv(out, a.c_order);
    out << '\n';
    write_mi_csv(out, mi, a.ledger.observers());
  }
}

void cmd_fairness_bound(const Options& o, std::ostream& out) {
  if (o.n < 1) throw DomainError("--n must be >= 1");
  if (o.gamma.empty()) throw UsageError("--gamma is required");
  ojson rows = ojson::array();
  std::ostringstream csv;
  csv << "gamma,n,f_frac,f_max,traditional_f_max\n";
  const int trad = traditional_bound(o.n);
  for (double g : o.gamma) {
    const auto b = themis_fault_bound(o.n, g);
    rows.push_back({{"gamma", g}, {"n", o.n}, {"f_frac", b.f_frac}, {"f_max", b.f_max}, {"traditional_f_max", trad}});
    csv << format_double(g) << ',' << o.n << ',' << format_double(b.f_frac) << ',' << b.f_max << ',' << trad << '\n';
  }
  if (json_format(o)) {
    out << ojson{{"rows", rows}}.dump(2) << '\n';
  } else {
    out << csv.str();
  }
}

void cmd_fairness_coverage(const Options& o, std::ostream& out, std::ostream& err) {
  const auto seed = resolve_seed(o, err);
  const auto a = analyze_logs(o, seed, err);
  std::vector<double> gammas = o.gamma;
  if (gammas.empty())
    for (int k = 11; k <= 20; ++k) gammas.push_back(k / 20.0);
  std::vector<FairnessAssessment> rows;
  for (double g : gammas) rows.push_back(assess_fairness(a.c_order, g));
  if (json_format(o)) {
    ojson j;
    j["n"] = a.c_order.n();
    j["pairs_sampled"] = a.c_order.pairs_sampled;
    j["seed"] = seed;
    j["rows"] = ojson::array();
    for (const auto& r : rows) j["rows"].push_back(to_json(r));
    out << j.dump(2) << '\n';
  } else {
    write_fairness_csv(out, rows);
  }
}

// ---- audit ----

void cmd_audit_run(const Options& o, std::ostream& out) {
  if (o.blocks.empty()) throw UsageError("--blocks <file> is required");
  if (o.mempools.empty()) throw UsageError("--mempools <dir> is required");
  const auto blocks = parse_blocks(std::filesystem::path(o.blocks));
  const auto mempools = load_mempools(o.mempools);
  ChainAuditConfig cfg;
  cfg.capacity = o.capacity;
  cfg.window = o.window;
  cfg.dist = make_dist(o);
  const auto reports = audit_chain(mempools, blocks, cfg);
  if (json_format(o)) {
    ojson j = ojson::array();
    for (const auto& r : reports) j.push_back(to_json(r));
    out << j.dump(2) << '\n';
  } else {
    write_audit_csv(out, reports);
  }
}

void add_dist(CLI::App* sub, Options& o) {
  auto* mu = sub->add_option("--mu", o.mu, "log-normal mu (log-space mean)")->capture_default_str();
  auto* s2 = sub->add_option("--sigma2", o.sigma2, "log-normal sigma^2 (log-space variance)")->capture_default_str();
  sub->add_option("--dist-file", o.dist_file, "empirical CDF CSV (time_s,cum_prob)")->excludes(mu)->excludes(s2);
}

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--out", o.out, "write output to this file instead of stdout");
}

void add_seed(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "64-bit seed (default: $MAL_SEED, else 1)");
}

void add_log_analysis(CLI::App* sub, Options& o) {
  sub->add_option("--logs", o.logs, "directory of per-observer JSONL logs")->required();
  sub->add_option("--pairs", o.pairs, "number of transaction pairs to sample")->capture_default_str();
  sub->add_option("--subset", o.subset, "pair population")
      ->check(CLI::IsMember({"all", "fully-received"}))
      ->capture_default_str();
  add_seed(sub, o);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Mempool order-agreement and block-audit toolkit", "mal"};
  app.require_subcommand(1);

  auto* prob = app.add_subcommand("prob", "closed-form order probabilities")->require_subcommand(1);
  auto* table = prob->add_subcommand("table", "agreement probabilities over an omega grid");
  table->add_option("--n", o.n, "observers")->required();
  table->add_option("--m", o.m, "exact-count columns")->delimiter(',')->required();
  table->add_option("--cumulative", o.cumulative, "at-least columns")->delimiter(',');
  table->add_option("--omega", o.omega, "send gaps in seconds")->delimiter(',')->required();
  add_dist(table, o);
  add_format(table, o);

  auto* posterior = prob->add_subcommand("posterior", "confidence that t1 was sent first given m of n");
  posterior->add_option("--n", o.n, "observers")->required();
  posterior->add_option("--m", o.m, "rows (default 0..n)")->delimiter(',');
  posterior->add_option("--prior", o.prior, "uniform:<lo>:<hi> or dexp:<scale>:<range>")->capture_default_str();
  add_dist(posterior, o);
  add_format(posterior, o);

  auto* cross = prob->add_subcommand("crossblock", "probability every observer misses the fill time");
  cross->add_option("--n", o.n_list, "observers")->delimiter(',')->required();
  cross->add_option("--tau-c", o.tau_c, "fill-time margins in seconds")->delimiter(',')->required();
  add_dist(cross, o);
  add_format(cross, o);

  auto* sim = app.add_subcommand("sim", "Monte Carlo simulation")->require_subcommand(1);
  auto* pairs = sim->add_subcommand("pairs", "simulated agreement frequencies");
  pairs->add_option("--n", o.n, "observers")->required();
  pairs->add_option("--m", o.m, "exact-count columns")->delimiter(',')->required();
  pairs->add_option("--cumulative", o.cumulative, "at-least columns")->delimiter(',');
  pairs->add_option("--omega", o.omega, "send gaps in seconds")->delimiter(',')->required();
  pairs->add_option("--trials", o.trials, "trials per omega")->capture_default_str();
  add_seed(pairs, o);
  add_dist(pairs, o);
  add_format(pairs, o);

  auto* network = sim->add_subcommand("network", "synthetic observer logs, mempools and blocks");
  network->add_option("--n", o.n, "observers (default 16)");
  network->add_option("--txs", o.txs, "transactions")->capture_default_str();
  auto* omega = network->add_option("--omega", o.omega, "fixed send gap in seconds");
  network->add_option("--rate", o.rate, "Poisson send rate per second")->excludes(omega)->capture_default_str();
  network->add_option("--capacity", o.capacity, "block capacity in weight units")->capture_default_str();
  network->add_option("--attack", o.attack, "none | swap:<victim>:<gap_s> | censor:<i,..> | delay:<blocks>:<i,..>")
      ->capture_default_str();
  network->add_option("--drop", o.drop, "per-observer drop probability")->capture_default_str();
  network->add_option("--block-interval", o.block_interval, "seconds between blocks")->capture_default_str();
  network->add_option("--lag", o.lag, "observer audit lag after block build, seconds")->capture_default_str();
  network->add_option("--miner-paths", o.miner_paths, "relay paths into the miner")->capture_default_str();
  add_seed(network, o);
  add_dist(network, o);
  network->add_option("--format", o.format, "summary format")->check(CLI::IsMember({"csv", "json"}));
  network->add_option("--out", o.out, "output directory")->required();

  auto* ingest = app.add_subcommand("ingest", "observer log analysis")->require_subcommand(1);
  auto* analyze = ingest->add_subcommand("analyze", "coverage, C_order and mutual information");
  add_log_analysis(analyze, o);
  analyze->add_option("--bins", o.bins, "equal-frequency bins for mutual information")->capture_default_str();
  add_format(analyze, o);

  auto* audit = app.add_subcommand("audit", "block audit")->require_subcommand(1);
  auto* audit_run = audit->add_subcommand("run", "diff blocks against observer templates");
  audit_run->add_option("--blocks", o.blocks, "blocks file (JSON array or JSONL)")->required();
  audit_run->add_option("--mempools", o.mempools, "directory of per-observer mempool JSONL")->required();
  audit_run->add_option("--capacity", o.capacity, "block capacity in weight units")->capture_default_str();
  audit_run->add_option("--window", o.window, "later blocks scanned for displaced txs")->capture_default_str();
  add_dist(audit_run, o);
  add_format(audit_run, o);

  auto* fairness = app.add_subcommand("fairness", "batch-order fairness")->require_subcommand(1);
  auto* bound = fairness->add_subcommand("bound", "fault-tolerance bounds");
  bound->add_option("--gamma", o.gamma, "gamma values in (0.5, 1]")->delimiter(',')->required();
  bound->add_option("--n", o.n, "nodes")->required();
  add_format(bound, o);
  auto* fcov = fairness->add_subcommand("coverage", "pair coverage at each gamma");
  add_log_analysis(fcov, o);
  fcov->add_option("--gamma", o.gamma, "gamma values (default 0.55..1.0)")->delimiter(',');
  add_format(fcov, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*network) {
      cmd_sim_network(o, out, err);
      return kOk;
    }
    Sink sink(o.out, out);
    if (*table) cmd_prob_table(o, *sink);
    else if (*posterior) cmd_prob_posterior(o, *sink);
    else if (*cross) cmd_prob_crossblock(o, *sink);
    else if (*pairs) cmd_sim_pairs(o, *sink, err);
    else if (*analyze) cmd_ingest_analyze(o, *sink, err);
    else if (*audit_run) cmd_audit_run(o, *sink);
    else if (*bound) cmd_fairness_bound(o, *sink);
    else if (*fcov) cmd_fairness_coverage(o, *sink, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kOk;
}

}  // namespace mal::cli
