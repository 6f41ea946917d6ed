#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mal/txid.hpp"

namespace mal {

struct ReceptionEvent {
  std::string observer;
  TxId txid;
  std::int64_t recv_ns = 0;

  friend bool operator==(const ReceptionEvent&, const ReceptionEvent&) = default;
};

struct ParsedLog {
  std::vector<ReceptionEvent> events;
  /// Repeated (observer, txid) lines folded into the earliest reception.
  std::size_t duplicates = 0;
};

/// JSON Lines, one `{"observer":..,"txid":..,"recv_ns":..}` per line. Blank
/// lines are skipped; any malformed line throws ParseError with its number.
ParsedLog parse_observer_log(std::istream& in);
ParsedLog parse_observer_log(const std::filesystem::path& path);

/// Reads every `*.jsonl` file of a directory (sorted by name). The file stem
/// is the observer id; lines naming another observer are rejected.
std::vector<ParsedLog> load_observer_logs(const std::filesystem::path& dir);

/// Merged multi-observer receptions. Observers are sorted by id, transactions
/// by txid; every stored transaction was received by at least one observer.
class ReceptionLedger {
 public:
  ReceptionLedger(std::vector<std::string> observers, std::vector<TxId> txids, std::vector<std::int64_t> recv);

  std::size_t observer_count() const { return observers_.size(); }
  std::size_t tx_count() const { return txids_.size(); }
  const std::vector<std::string>& observers() const { return observers_; }
  const std::vector<TxId>& txids() const { return txids_; }

  /// recv_ns per observer for transaction `tx`; 0 marks an absent reception.
  std::span<const std::int64_t> row(std::size_t tx) const {
    return {recv_.data() + tx * observers_.size(), observers_.size()};
  }
  std::optional<std::int64_t> recv(std::size_t tx, std::size_t observer) const {
    const auto v = row(tx)[observer];
    return v == 0 ? std::nullopt : std::optional<std::int64_t>(v);
  }
  std::size_t present_count(std::size_t tx) const;
  std::optional<std::size_t> find(const TxId& id) const;

  friend bool operator==(const ReceptionLedger&, const ReceptionLedger&) = default;

 private:
  std::vector<std::string> observers_;
  std::vector<TxId> txids_;
  std::vector<std::int64_t> recv_;
};

/// Union of the logs; repeated receptions keep the earliest timestamp.
ReceptionLedger merge(std::span<const std::vector<ReceptionEvent>> logs);
ReceptionLedger merge(std::span<const ParsedLog> logs);

struct CoverageRow {
  int m = 0;
  std::size_t exactly = 0;
  std::size_t at_least = 0;
  double at_least_frac = 0.0;
};

struct CoverageReport {
  std::size_t total_txs = 0;
  std::vector<CoverageRow> per_m;  // m = 1..n
};

CoverageReport coverage(const ReceptionLedger& ledger);

enum class PairSubset { AllTxs, FullyReceived };

struct PairSample {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // ledger tx indices
  std::uint64_t seed = 0;
  PairSubset subset = PairSubset::AllTxs;
  /// Set when the subset held fewer than 2*count transactions.
  bool with_replacement = false;
};

/// Draws 2*count distinct transactions without replacement and pairs them
/// in draw order; falls back to independent distinct pairs for small subsets.
PairSample sample_pairs(const ReceptionLedger& ledger, std::size_t count, std::uint64_t seed, PairSubset subset);

struct COrderReport {
  std::size_t pairs_sampled = 0;
  std::uint64_t seed = 0;
  PairSubset subset = PairSubset::AllTxs;
  bool with_replacement = false;
  /// Pairs no observer received both halves of; excluded from the fractions.
  std::size_t undecidable = 0;
  std::vector<double> frac_x_ge_m;     // index m-1, m = 1..n
  std::vector<std::size_t> histogram;  // index X = 0..n, decidable pairs only
  int n() const { return static_cast<int>(frac_x_ge_m.size()); }
};

/// For each pair, X = number of observers (among those holding both) that saw
/// the more common reception order. Equal timestamps are ordered by txid.
COrderReport c_order(const ReceptionLedger& ledger, const PairSample& pairs);

struct MutualInformation {
  int bins = 16;
  std::size_t n = 0;
  /// Row-major n×n, nats; absent when a pair shares fewer than min_shared txs.
  std::vector<std::optional<double>> matrix;
  /// Mean over present off-diagonal entries (i < j).
  std::optional<double> average;

  std::optional<double> at(std::size_t i, std::size_t j) const { return matrix[i * n + j]; }
};

/// Plug-in MI between observers' delays relative to each transaction's median
/// reception time, using equal-frequency bins per series.
MutualInformation pairwise_mutual_information(const ReceptionLedger& ledger, int bins = 16,
                                              std::size_t min_shared = 100);

}  // namespace mal
