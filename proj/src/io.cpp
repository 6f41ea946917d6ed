#include "mal/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mal/error.hpp"

namespace mal {
namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::int64_t int_field(const nlohmann::json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) throw ParseError(std::string(key) + " must be an integer", line);
  if (it->is_number_unsigned() && it->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw ParseError(std::string(key) + " out of range", line);
  return it->get<std::int64_t>();
}

TxId txid_field(const nlohmann::json& j, std::size_t line) {
  if (!j.is_string()) throw ParseError("txid must be a string", line);
  auto id = TxId::from_hex(j.get<std::string>());
  if (!id) throw ParseError("txid must be 64 lowercase hex characters", line);
  return *id;
}

nlohmann::json parse_line(const std::string& text, std::size_t line) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

Block block_from_json(const nlohmann::json& j, std::size_t line) {
  if (!j.is_object()) throw ParseError("block must be a JSON object", line);
  Block b;
  b.height = int_field(j, "height", line);
  if (j.contains("time_ns") && !j["time_ns"].is_null()) b.time_ns = int_field(j, "time_ns", line);
  auto txs = j.find("txids");
  if (txs == j.end() || !txs->is_array()) throw ParseError("block needs a \"txids\" array", line);
  for (const auto& t : *txs) b.txids.push_back(txid_field(t, line));
  return b;
}

const char* subset_name(PairSubset s) { return s == PairSubset::AllTxs ? "all" : "fully-received"; }

std::string attack_name(const AttackSpec& a) {
  return std::visit(
      [](const auto& x) -> std::string {
        using A = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<A, NoAttack>) return "none";
        else if constexpr (std::is_same_v<A, SwapPair>) return "swap";
        else if constexpr (std::is_same_v<A, Censor>) return "censor";
        else return "delay";
      },
      a);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string format_percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * x);
  return buf;
}

void write_observer_log(std::ostream& out, std::span<const ReceptionEvent> events) {
  for (const auto& e : events) {
    ojson j;
    j["observer"] = e.observer;
    j["txid"] = e.txid.hex();
    j["recv_ns"] = e.recv_ns;
    out << j.dump() << '\n';
  }
}

std::vector<MempoolTx> parse_mempool(std::istream& in) {
  std::vector<MempoolTx> out;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    if (blank(text)) continue;
    const auto j = parse_line(text, line);
    if (!j.is_object()) throw ParseError("expected a JSON object", line);
    if (!j.contains("txid")) throw ParseError("missing \"txid\"", line);
    MempoolTx tx;
    tx.txid = txid_field(j["txid"], line);
    tx.arrival_ns = int_field(j, "arrival_ns", line);
    tx.fee = int_field(j, "fee", line);
    tx.weight = int_field(j, "weight", line);
    if (tx.arrival_ns <= 0) throw ParseError("arrival_ns must be > 0", line);
    if (tx.fee < 0) throw ParseError("fee must be >= 0", line);
    if (tx.weight <= 0) throw ParseError("weight must be > 0", line);
    out.push_back(tx);
  }
  return out;
}

std::vector<MempoolTx> parse_mempool(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return parse_mempool(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_mempool(std::ostream& out, std::span<const MempoolTx> txs) {
  for (const auto& t : txs) {
    ojson j;
    j["txid"] = t.txid.hex();
    j["arrival_ns"] = t.arrival_ns;
    j["fee"] = t.fee;
    j["weight"] = t.weight;
    out << j.dump() << '\n';
  }
}

std::vector<ObserverMempool> load_mempools(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  if (files.empty()) throw ParseError("no *.jsonl mempool snapshots in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<ObserverMempool> out;
  for (const auto& f : files) out.push_back({f.stem().string(), parse_mempool(f)});
  return out;
}

std::vector<Block> parse_blocks(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string all = buf.str();
  const auto first = all.find_first_not_of(" \t\r\n");
  std::vector<Block> out;
  if (first == std::string::npos) return out;
  if (all[first] == '[') {
    const auto j = parse_line(all, 1);
    for (const auto& b : j) out.push_back(block_from_json(b, 0));
    return out;
  }
  std::istringstream lines(all);
  std::string text;
  for (std::size_t line = 1; std::getline(lines, text); ++line) {
    if (blank(text)) continue;
    out.push_back(block_from_json(parse_line(text, line), line));
  }
  return out;
}

std::vector<Block> parse_blocks(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_blocks(in);
}

void write_blocks(std::ostream& out, std::span<const Block> blocks) {
  for (const auto& b : blocks) {
    ojson j;
    j["height"] = b.height;
    if (b.time_ns) j["time_ns"] = *b.time_ns;
    j["txids"] = ojson::array();
    for (const auto& t : b.txids) j["txids"].push_back(t.hex());
    out << j.dump() << '\n';
  }
}

ojson to_json(const AuditReport& r) {
  ojson j;
  j["height"] = r.height;
  j["health"] = r.health ? ojson(*r.health) : ojson(nullptr);
  j["missing"] = ojson::array();
  for (const auto& m : r.missing) {
    ojson e;
    e["txid"] = m.txid.hex();
    e["displaced_to"] = m.displaced_to ? ojson(*m.displaced_to) : ojson(nullptr);
    e["false_accusation_prob"] = m.false_accusation_prob ? ojson(*m.false_accusation_prob) : ojson(nullptr);
    j["missing"].push_back(e);
  }
  j["partial"] = ojson::array();
  for (const auto& t : r.partial) j["partial"].push_back(t.hex());
  j["added"] = ojson::array();
  for (const auto& t : r.added) j["added"].push_back(t.hex());
  j["reordered_pairs"] = r.reordered_pairs;
  j["reordered"] = ojson::array();
  for (const auto& [a, b] : r.reordered) j["reordered"].push_back(ojson::array({a.hex(), b.hex()}));
  return j;
}

ojson to_json(const CoverageReport& r) {
  ojson j;
  j["total_txs"] = r.total_txs;
  j["per_m"] = ojson::array();
  for (const auto& row : r.per_m) {
    ojson e;
    e["m"] = row.m;
    e["exactly"] = row.exactly;
    e["at_least"] = row.at_least;
    e["at_least_frac"] = row.at_least_frac;
    j["per_m"].push_back(e);
  }
  return j;
}

ojson to_json(const COrderReport& r) {
  ojson j;
  j["pairs_sampled"] = r.pairs_sampled;
  j["seed"] = r.seed;
  j["subset"] = subset_name(r.subset);
  j["with_replacement"] = r.with_replacement;
  j["undecidable"] = r.undecidable;
  j["per_m"] = ojson::array();
  for (std::size_t i = 0; i < r.frac_x_ge_m.size(); ++i) {
    ojson e;
    e["m"] = i + 1;
    e["frac"] = r.frac_x_ge_m[i];
    j["per_m"].push_back(e);
  }
  j["histogram"] = r.histogram;
  return j;
}

ojson to_json(const MutualInformation& mi, const std::vector<std::string>& observers) {
  ojson j;
  j["bins"] = mi.bins;
  j["average"] = mi.average ? ojson(*mi.average) : ojson(nullptr);
  j["pairs"] = ojson::array();
  for (std::size_t a = 0; a < mi.n; ++a)
    for (std::size_t b = a; b < mi.n; ++b)
      if (auto v = mi.at(a, b)) {
        ojson e;
        e["observer_a"] = observers.at(a);
        e["observer_b"] = observers.at(b);
        e["mi_nats"] = *v;
        j["pairs"].push_back(e);
      }
  return j;
}

ojson to_json(const FairnessAssessment& a) {
  ojson j;
  j["gamma"] = a.gamma;
  j["f_frac"] = a.f_frac;
  j["f_max"] = a.f_max;
  j["coverage"] = a.coverage;
  return j;
}

ojson ground_truth_json(const NetworkSimulation& sim, const AttackSpec& attack) {
  ojson j;
  j["seed"] = sim.truth.seed;
  j["observers"] = sim.observers;
  ojson atk;
  atk["kind"] = attack_name(attack);
  std::visit(
      [&](const auto& x) {
        using A = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<A, SwapPair>) {
          atk["victim_index"] = x.victim_index;
          atk["attacker_gap_s"] = x.attacker_gap_s;
        } else if constexpr (std::is_same_v<A, Censor>) {
          atk["tx_indices"] = x.tx_indices;
        } else if constexpr (std::is_same_v<A, CrossBlockDelay>) {
          atk["tx_indices"] = x.tx_indices;
          atk["blocks_delayed"] = x.blocks_delayed;
        }
      },
      attack);
  j["attack"] = atk;
  j["blocks"] = ojson::array();
  for (std::size_t b = 0; b < sim.blocks.size(); ++b) {
    ojson e;
    e["height"] = sim.blocks[b].height;
    e["build_ns"] = sim.truth.build_ns[b];
    j["blocks"].push_back(e);
  }
  j["txs"] = ojson::array();
  for (const auto& t : sim.truth.txs) {
    ojson e;
    e["txid"] = t.txid.hex();
    e["send_ns"] = t.send_ns;
    e["fee"] = t.fee;
    e["weight"] = t.weight;
    e["fee_rate"] = t.fee_rate;
    e["miner_recv_ns"] = t.miner_recv_ns;
    e["attack"] = role_name(t.role);
    j["txs"].push_back(e);
  }
  return j;
}

void write_coverage_csv(std::ostream& out, const CoverageReport& r) {
  out << "m,exactly,at_least,at_least_frac\n";
  for (const auto& row : r.per_m)
    out << row.m << ',' << row.exactly << ',' << row.at_least << ',' << format_double(row.at_least_frac) << '\n';
}

void write_c_order_csv(std::ostream& out, const COrderReport& r) {
  out << "m,frac\n";
  for (std::size_t i = 0; i < r.frac_x_ge_m.size(); ++i) out << i + 1 << ',' << format_double(r.frac_x_ge_m[i]) << '\n';
}

void write_mi_csv(std::ostream& out, const MutualInformation& mi, const std::vector<std::string>& observers) {
  out << "observer_a,observer_b,mi_nats\n";
  for (std::size_t a = 0; a < mi.n; ++a)
    for (std::size_t b = a; b < mi.n; ++b)
      if (auto v = mi.at(a, b)) out << observers.at(a) << ',' << observers.at(b) << ',' << format_double(*v) << '\n';
}

void write_fairness_csv(std::ostream& out, std::span<const FairnessAssessment> rows) {
  out << "gamma,f_frac,f_max,coverage\n";
  for (const auto& a : rows)
    out << format_double(a.gamma) << ',' << format_double(a.f_frac) << ',' << a.f_max << ','
        << format_double(a.coverage) << '\n';
}

void write_audit_csv(std::ostream& out, std::span<const AuditReport> reports) {
  out << "height,kind,txid,other_txid,displaced_to,false_accusation_prob,health\n";
  for (const auto& r : reports) {
    out << r.height << ",health,,,,," << (r.health ? format_double(*r.health) : "") << '\n';
    for (const auto& m : r.missing) {
      out << r.height << ",missing," << m.txid.hex() << ",," << (m.displaced_to ? std::to_string(*m.displaced_to) : "")
          << ',' << (m.false_accusation_prob ? format_double(*m.false_accusation_prob) : "") << ",\n";
    }
    for (const auto& t : r.partial) out << r.height << ",partial," << t.hex() << ",,,,\n";
    for (const auto& t : r.added) out << r.height << ",added," << t.hex() << ",,,,\n";
    for (const auto& [a, b] : r.reordered) out << r.height << ",reordered," << a.hex() << ',' << b.hex() << ",,,\n";
  }
}

}  // namespace mal
