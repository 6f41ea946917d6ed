#include "mal/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "json.hpp"
#include "mal/error.hpp"
#include "mal/rng.hpp"

namespace mal {
namespace {

ReceptionEvent parse_event(const std::string& line, std::size_t lineno) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
  }
  if (!j.is_object()) throw ParseError("expected a JSON object", lineno);
  auto obs = j.find("observer");
  if (obs == j.end() || !obs->is_string() || obs->get<std::string>().empty())
    throw ParseError("missing or empty \"observer\"", lineno);
  auto tx = j.find("txid");
  if (tx == j.end() || !tx->is_string()) throw ParseError("missing \"txid\"", lineno);
  auto id = TxId::from_hex(tx->get<std::string>());
  if (!id) throw ParseError("txid must be 64 lowercase hex characters", lineno);
  auto recv = j.find("recv_ns");
  if (recv == j.end() || !(recv->is_number_integer())) throw ParseError("recv_ns must be an integer", lineno);
  const auto ns = recv->get<std::int64_t>();
  if (recv->is_number_unsigned() && recv->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw ParseError("recv_ns out of range", lineno);
  if (ns <= 0) throw ParseError("recv_ns must be > 0", lineno);
  return {obs->get<std::string>(), *id, ns};
}

double median_of(std::vector<std::int64_t>& v) {
  const std::size_t k = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  const double upper = static_cast<double>(v[k]);
  if (v.size() % 2 == 1) return upper;
  const double lower = static_cast<double>(*std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k)));
  return 0.5 * (lower + upper);
}

// Equal-frequency bin per element: rank by (value, position), bin = rank*bins/N.
std::vector<int> equal_frequency_bins(const std::vector<double>& x, int bins) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<int> out(x.size());
  const std::size_t n = x.size();
  for (std::size_t r = 0; r < n; ++r) out[order[r]] = static_cast<int>(r * static_cast<std::size_t>(bins) / n);
  return out;
}

double plug_in_mi(const std::vector<int>& a, const std::vector<int>& b, int bins) {
  const auto nb = static_cast<std::size_t>(bins);
  std::vector<double> joint(nb * nb, 0.0), pa(nb, 0.0), pb(nb, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    joint[static_cast<std::size_t>(a[k]) * nb + static_cast<std::size_t>(b[k])] += 1.0;
    pa[static_cast<std::size_t>(a[k])] += 1.0;
    pb[static_cast<std::size_t>(b[k])] += 1.0;
  }
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double c = joint[i * nb + j];
      if (c > 0.0) mi += c / n * std::log(c * n / (pa[i] * pb[j]));
    }
  }
  return std::max(mi, 0.0);
}

}  // namespace

ParsedLog parse_observer_log(std::istream& in) {
  ParsedLog out;
  std::map<std::pair<std::string, TxId>, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ReceptionEvent ev = parse_event(line, lineno);
    auto [it, inserted] = seen.try_emplace({ev.observer, ev.txid}, out.events.size());
    if (inserted) {
      out.events.push_back(std::move(ev));
    } else {
      ++out.duplicates;
      auto& kept = out.events[it->second];
      kept.recv_ns = std::min(kept.recv_ns, ev.recv_ns);
    }
  }
  return out;
}

ParsedLog parse_observer_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return parse_observer_log(in);
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.what());
  }
}

std::vector<ParsedLog> load_observer_logs(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ParseError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ParseError("no *.jsonl observer logs in " + dir.string());
  std::vector<ParsedLog> logs;
  for (const auto& f : files) {
    ParsedLog log = parse_observer_log(f);
    const std::string stem = f.stem().string();
    for (const auto& ev : log.events) {
      if (ev.observer != stem) throw ParseError(f.filename().string() + ": event for observer '" + ev.observer + "'");
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

ReceptionLedger::ReceptionLedger(std::vector<std::string> observers, std::vector<TxId> txids,
                                 std::vector<std::int64_t> recv)
    : observers_(std::move(observers)), txids_(std::move(txids)), recv_(std::move(recv)) {
  if (observers_.empty()) throw DomainError("ledger: need at least one observer");
  if (recv_.size() != observers_.size() * txids_.size()) throw DomainError("ledger: reception matrix size mismatch");
}

std::size_t ReceptionLedger::present_count(std::size_t tx) const {
  const auto r = row(tx);
  return static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](std::int64_t v) { return v != 0; }));
}

std::optional<std::size_t> ReceptionLedger::find(const TxId& id) const {
  auto it = std::lower_bound(txids_.begin(), txids_.end(), id);
  if (it == txids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - txids_.begin());
}

ReceptionLedger merge(std::span<const std::vector<ReceptionEvent>> logs) {
  if (logs.empty()) throw DomainError("merge: need at least one log");
  std::vector<std::string> observers;
  for (const auto& log : logs) {
    for (const auto& ev : log) observers.push_back(ev.observer);
  }
  std::sort(observers.begin(), observers.end());
  observers.erase(std::unique(observers.begin(), observers.end()), observers.end());
  if (observers.empty()) throw DomainError("merge: logs contain no events");

  struct Entry {
    TxId txid;
    std::uint32_t observer;
    std::int64_t recv;
  };
  std::vector<Entry> entries;
  for (const auto& log : logs) {
    for (const auto& ev : log) {
      const auto o = std::lower_bound(observers.begin(), observers.end(), ev.observer) - observers.begin();
      entries.push_back({ev.txid, static_cast<std::uint32_t>(o), ev.recv_ns});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.txid < b.txid; });

  const std::size_t n = observers.size();
  std::vector<TxId> txids;
  std::vector<std::int64_t> recv;
  for (const auto& e : entries) {
    if (txids.empty() || txids.back() != e.txid) {
      txids.push_back(e.txid);
      recv.resize(recv.size() + n, 0);
    }
    auto& slot = recv[(txids.size() - 1) * n + e.observer];
    slot = (slot == 0) ? e.recv : std::min(slot, e.recv);
  }
  return ReceptionLedger(std::move(observers), std::move(txids), std::move(recv));
}

ReceptionLedger merge(std::span<const ParsedLog> logs) {
  std::vector<std::vector<ReceptionEvent>> events;
  for (const auto& l : logs) events.push_back(l.events);
  return merge(std::span<const std::vector<ReceptionEvent>>(events));
}

CoverageReport coverage(const ReceptionLedger& ledger) {
  const std::size_t n = ledger.observer_count();
  CoverageReport out;
  out.total_txs = ledger.tx_count();
  std::vector<std::size_t> exactly(n + 1, 0);
  for (std::size_t t = 0; t < ledger.tx_count(); ++t) ++exactly[ledger.present_count(t)];
  std::size_t cumulative = 0;
  out.per_m.resize(n);
  for (std::size_t m = n; m >= 1; --m) {
    cumulative += exactly[m];
    out.per_m[m - 1] = {static_cast<int>(m), exactly[m], cumulative,
                        out.total_txs == 0 ? 0.0 : static_cast<double>(cumulative) / static_cast<double>(out.total_txs)};
  }
  return out;
}

PairSample sample_pairs(const ReceptionLedger& ledger, std::size_t count, std::uint64_t seed, PairSubset subset) {
  std::vector<std::size_t> pool;
  for (std::size_t t = 0; t < ledger.tx_count(); ++t) {
    if (subset == PairSubset::AllTxs || ledger.present_count(t) == ledger.observer_count()) pool.push_back(t);
  }
  if (pool.size() < 2) throw DomainError("sample_pairs: subset holds fewer than 2 transactions");

  PairSample out;
  out.seed = seed;
  out.subset = subset;
  RngStream rng(seed, substream(StreamPurpose::PairSampling, 0, 0));
  if (pool.size() >= 2 * count) {
    for (std::size_t i = 0; i < 2 * count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    for (std::size_t k = 0; k < count; ++k) out.pairs.emplace_back(pool[2 * k], pool[2 * k + 1]);
  } else {
    out.with_replacement = true;
    for (std::size_t k = 0; k < count; ++k) {
      const auto a = static_cast<std::size_t>(rng.below(pool.size()));
      auto b = static_cast<std::size_t>(rng.below(pool.size() - 1));
      if (b >= a) ++b;
      out.pairs.emplace_back(pool[a], pool[b]);
    }
  }
  return out;
}

COrderReport c_order(const ReceptionLedger& ledger, const PairSample& sample) {
  const std::size_t n = ledger.observer_count();
  COrderReport out;
  out.pairs_sampled = sample.pairs.size();
  out.seed = sample.seed;
  out.subset = sample.subset;
  out.with_replacement = sample.with_replacement;
  out.histogram.assign(n + 1, 0);
  for (const auto& [a, b] : sample.pairs) {
    if (a >= ledger.tx_count() || b >= ledger.tx_count()) throw DomainError("c_order: pair index outside the ledger");
    const auto ra = ledger.row(a);
    const auto rb = ledger.row(b);
    const bool a_wins_ties = ledger.txids()[a] < ledger.txids()[b];
    std::size_t a_first = 0, b_first = 0;
    for (std::size_t o = 0; o < n; ++o) {
      if (ra[o] == 0 || rb[o] == 0) continue;
      if (ra[o] < rb[o] || (ra[o] == rb[o] && a_wins_ties)) {
        ++a_first;
      } else {
        ++b_first;
      }
    }
    if (a_first + b_first == 0) {
      ++out.undecidable;
      continue;
    }
    ++out.histogram[std::max(a_first, b_first)];
  }
  const std::size_t decidable = out.pairs_sampled - out.undecidable;
  out.frac_x_ge_m.assign(n, 0.0);
  std::size_t cumulative = 0;
  for (std::size_t m = n; m >= 1; --m) {
    cumulative += out.histogram[m];
    out.frac_x_ge_m[m - 1] = decidable == 0 ? 0.0 : static_cast<double>(cumulative) / static_cast<double>(decidable);
  }
  return out;
}

MutualInformation pairwise_mutual_information(const ReceptionLedger& ledger, int bins, std::size_t min_shared) {
  const std::size_t n = ledger.observer_count();
  if (n < 2) throw DomainError("mutual information: need at least 2 observers");
  if (bins < 2) throw DomainError("mutual information: need at least 2 bins");

  // delay relative to the transaction's median reception, seconds; NaN = absent
  const std::size_t txs = ledger.tx_count();
  std::vector<double> rel(txs * n, std::nan(""));
  std::vector<std::int64_t> scratch;
  for (std::size_t t = 0; t < txs; ++t) {
    const auto r = ledger.row(t);
    scratch.clear();
    for (auto v : r) {
      if (v != 0) scratch.push_back(v);
    }
    const double med = median_of(scratch);
    for (std::size_t o = 0; o < n; ++o) {
      if (r[o] != 0) rel[t * n + o] = (static_cast<double>(r[o]) - med) * 1e-9;
    }
  }

  MutualInformation out;
  out.bins = bins;
  out.n = n;
  out.matrix.assign(n * n, std::nullopt);
  double sum = 0.0;
  std::size_t present = 0;
  std::vector<double> xa, xb;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      xa.clear();
      xb.clear();
      for (std::size_t t = 0; t < txs; ++t) {
        const double a = rel[t * n + i];
        const double b = rel[t * n + j];
        if (std::isnan(a) || std::isnan(b)) continue;
        xa.push_back(a);
        xb.push_back(b);
      }
      if (xa.size() < min_shared) continue;
      const auto ba = equal_frequency_bins(xa, bins);
      const double mi = (i == j) ? plug_in_mi(ba, ba, bins) : plug_in_mi(ba, equal_frequency_bins(xb, bins), bins);
      out.matrix[i * n + j] = mi;
      out.matrix[j * n + i] = mi;
      if (i != j) {
        sum += mi;
        ++present;
      }
    }
  }
  if (present > 0) out.average = sum / static_cast<double>(present);
  return out;
}

}  // namespace mal
