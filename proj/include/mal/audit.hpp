#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mal/dist.hpp"
#include "mal/txid.hpp"

namespace mal {

struct MempoolTx {
  TxId txid;
  std::int64_t arrival_ns = 0;
  std::int64_t fee = 0;
  std::int64_t weight = 1;
};

/// Expected block for one observer's mempool. `arrival_ns` runs parallel to
/// `txids`; tau_c_ns is the latest arrival among the included transactions.
struct BlockTemplate {
  std::int64_t height = 0;
  std::vector<TxId> txids;
  std::vector<std::int64_t> arrival_ns;
  std::int64_t total_weight = 0;
  std::int64_t tau_c_ns = 0;
};

/// A mined block. time_ns is when observers cut their mempools to audit it.
struct Block {
  std::int64_t height = 0;
  std::optional<std::int64_t> time_ns;
  std::vector<TxId> txids;
};

struct MissingTx {
  TxId txid;
  /// Height of the later block that carried it (displaced across blocks), if any.
  std::optional<std::int64_t> displaced_to;
  /// Probability an honest miner still lacked it at fill time; filled by
  /// attach_false_accusation.
  std::optional<double> false_accusation_prob;
};

struct AuditReport {
  std::int64_t height = 0;
  std::vector<MissingTx> missing;
  std::vector<TxId> added;
  std::vector<TxId> partial;
  /// (earlier, later) in the actual block where the observers' majority expects the reverse.
  std::vector<std::pair<TxId, TxId>> reordered;
  std::size_t reordered_pairs = 0;
  std::optional<double> health;
};

/// True when a ranks strictly ahead of b: fee rate descending, then arrival
/// ascending, then txid ascending. Fee rates are compared exactly.
bool schedules_before(const MempoolTx& a, const MempoolTx& b);

/// Greedy fee-rate block construction: walk the mempool in schedule order and
/// take every transaction that still fits (skip-and-continue).
BlockTemplate expected_block(std::span<const MempoolTx> mempool, std::int64_t capacity, std::int64_t height);

/// Diff one actual block against every observer's template. later_blocks are
/// the blocks following `actual`, in order, scanned for displaced transactions.
AuditReport compare(std::span<const BlockTemplate> expected_per_observer, std::span<const TxId> actual,
                    std::span<const std::vector<TxId>> later_blocks);

/// Chance that all n observers received a transaction after the fill time
/// despite it being sent `margin` earlier: (1 - F(margin))^n.
double false_accusation(const PropagationDistribution& dist, int n, double tau_c_margin_s);

/// Fills false_accusation_prob for every missing entry using the smallest
/// per-observer margin τ_C,o - arrival_o(t), n = number of templates.
void attach_false_accusation(AuditReport& report, std::span<const BlockTemplate> expected_per_observer,
                             const PropagationDistribution& dist);

struct ObserverMempool {
  std::string observer;
  std::vector<MempoolTx> txs;
};

struct ChainAuditConfig {
  std::int64_t capacity = 4'000'000;
  std::size_t window = 6;
  std::optional<PropagationDistribution> dist;
};

/// Audits a sequence of blocks (ascending height, each with time_ns) against
/// per-observer mempool snapshots. For every block each observer's mempool
/// holds the snapshot entries that arrived by the block's time_ns and are not
/// confirmed in an earlier block of the sequence.
std::vector<AuditReport> audit_chain(std::span<const ObserverMempool> mempools, std::span<const Block> blocks,
                                     const ChainAuditConfig& cfg);

/// Builds the templates audit_chain compares block `index` against.
std::vector<BlockTemplate> observer_templates(std::span<const ObserverMempool> mempools,
                                              std::span<const Block> blocks, std::size_t index,
                                              std::int64_t capacity);

}  // namespace mal
