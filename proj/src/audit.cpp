#include "mal/audit.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "mal/error.hpp"
#include "mal/orderprob.hpp"

namespace mal {

bool schedules_before(const MempoolTx& a, const MempoolTx& b) {
  const auto lhs = static_cast<__int128>(a.fee) * b.weight;
  const auto rhs = static_cast<__int128>(b.fee) * a.weight;
  if (lhs != rhs) return lhs > rhs;
  if (a.arrival_ns != b.arrival_ns) return a.arrival_ns < b.arrival_ns;
  return a.txid < b.txid;
}

BlockTemplate expected_block(std::span<const MempoolTx> mempool, std::int64_t capacity, std::int64_t height) {
  if (capacity <= 0) throw DomainError("expected_block: capacity must be > 0");
  std::vector<const MempoolTx*> order;
  order.reserve(mempool.size());
  for (const auto& tx : mempool) {
    if (tx.weight <= 0 || tx.fee < 0) throw DomainError("expected_block: weight must be > 0 and fee >= 0");
    order.push_back(&tx);
  }
  std::sort(order.begin(), order.end(), [](const MempoolTx* a, const MempoolTx* b) { return schedules_before(*a, *b); });

  BlockTemplate out;
  out.height = height;
  for (const MempoolTx* tx : order) {
    if (out.total_weight + tx->weight > capacity) continue;
    out.txids.push_back(tx->txid);
    out.arrival_ns.push_back(tx->arrival_ns);
    out.total_weight += tx->weight;
    out.tau_c_ns = std::max(out.tau_c_ns, tx->arrival_ns);
  }
  return out;
}

AuditReport compare(std::span<const BlockTemplate> templates, std::span<const TxId> actual,
                    std::span<const std::vector<TxId>> later_blocks) {
  if (templates.empty()) throw DomainError("compare: need at least one expected template");
  AuditReport report;
  report.height = templates.front().height;

  // how many templates expect each tx
  std::unordered_map<TxId, std::size_t, TxIdHash> expected_count;
  std::vector<TxId> first_seen;  // deterministic iteration order
  for (const auto& t : templates) {
    for (const auto& id : t.txids) {
      if (expected_count[id]++ == 0) first_seen.push_back(id);
    }
  }
  const std::unordered_set<TxId, TxIdHash> in_block(actual.begin(), actual.end());

  std::sort(first_seen.begin(), first_seen.end());
  for (const auto& id : first_seen) {
    if (in_block.contains(id)) continue;
    if (expected_count[id] == templates.size()) {
      MissingTx miss{id, std::nullopt, std::nullopt};
      for (std::size_t k = 0; k < later_blocks.size(); ++k) {
        if (std::find(later_blocks[k].begin(), later_blocks[k].end(), id) != later_blocks[k].end()) {
          miss.displaced_to = report.height + static_cast<std::int64_t>(k) + 1;
          break;
        }
      }
      report.missing.push_back(miss);
    } else {
      report.partial.push_back(id);
    }
  }

  std::size_t expected_in_block = 0;
  for (const auto& id : actual) {
    if (expected_count.contains(id)) {
      ++expected_in_block;
    } else {
      report.added.push_back(id);
    }
  }
  if (!actual.empty()) {
    report.health = static_cast<double>(expected_in_block) / static_cast<double>(actual.size());
  }

  // Pairwise order vote among templates holding both transactions.
  std::vector<std::unordered_map<TxId, std::size_t, TxIdHash>> position(templates.size());
  for (std::size_t o = 0; o < templates.size(); ++o) {
    for (std::size_t i = 0; i < templates[o].txids.size(); ++i) position[o].emplace(templates[o].txids[i], i);
  }
  std::vector<TxId> voted;
  for (const auto& id : actual) {
    if (expected_count.contains(id)) voted.push_back(id);
  }
  for (std::size_t i = 0; i < voted.size(); ++i) {
    for (std::size_t j = i + 1; j < voted.size(); ++j) {
      std::size_t agree = 0, disagree = 0;
      for (const auto& pos : position) {
        auto a = pos.find(voted[i]);
        if (a == pos.end()) continue;
        auto b = pos.find(voted[j]);
        if (b == pos.end()) continue;
        (a->second < b->second ? agree : disagree) += 1;
      }
      if (disagree > agree) report.reordered.emplace_back(voted[i], voted[j]);
    }
  }
  report.reordered_pairs = report.reordered.size();
  return report;
}

double false_accusation(const PropagationDistribution& dist, int n, double tau_c_margin_s) {
  return cross_block_prob(dist, n, tau_c_margin_s);
}

void attach_false_accusation(AuditReport& report, std::span<const BlockTemplate> templates,
                             const PropagationDistribution& dist) {
  for (auto& miss : report.missing) {
    std::int64_t margin_ns = std::numeric_limits<std::int64_t>::max();
    for (const auto& t : templates) {
      auto it = std::find(t.txids.begin(), t.txids.end(), miss.txid);
      if (it == t.txids.end()) continue;
      const auto arrival = t.arrival_ns[static_cast<std::size_t>(it - t.txids.begin())];
      margin_ns = std::min(margin_ns, t.tau_c_ns - arrival);
    }
    const double margin_s = static_cast<double>(std::max<std::int64_t>(margin_ns, 0)) * 1e-9;
    miss.false_accusation_prob = false_accusation(dist, static_cast<int>(templates.size()), margin_s);
  }
}

std::vector<BlockTemplate> observer_templates(std::span<const ObserverMempool> mempools,
                                              std::span<const Block> blocks, std::size_t index,
                                              std::int64_t capacity) {
  const Block& block = blocks[index];
  if (!block.time_ns) throw DomainError("audit: block " + std::to_string(block.height) + " has no time_ns");
  std::unordered_set<TxId, TxIdHash> confirmed;
  for (std::size_t b = 0; b < index; ++b) confirmed.insert(blocks[b].txids.begin(), blocks[b].txids.end());
  std::vector<BlockTemplate> out;
  for (const auto& mp : mempools) {
    std::vector<MempoolTx> pool;
    for (const auto& tx : mp.txs) {
      if (tx.arrival_ns <= *block.time_ns && !confirmed.contains(tx.txid)) pool.push_back(tx);
    }
    out.push_back(expected_block(pool, capacity, block.height));
  }
  return out;
}

std::vector<AuditReport> audit_chain(std::span<const ObserverMempool> mempools, std::span<const Block> blocks,
                                     const ChainAuditConfig& cfg) {
  if (mempools.empty()) throw DomainError("audit: no observer mempools");
  for (std::size_t b = 1; b < blocks.size(); ++b) {
    if (blocks[b].height <= blocks[b - 1].height) throw DomainError("audit: blocks must have ascending heights");
  }
  for (const auto& b : blocks) {
    if (!b.time_ns) throw DomainError("audit: block " + std::to_string(b.height) + " has no time_ns");
  }

  // Incremental per-observer pools: entries sorted by arrival, admitted as the
  // block clock advances, removed once confirmed.
  struct Cursor {
    std::vector<MempoolTx> by_arrival;
    std::size_t next = 0;
    std::vector<MempoolTx> pool;
  };
  std::vector<Cursor> cursors(mempools.size());
  for (std::size_t o = 0; o < mempools.size(); ++o) {
    cursors[o].by_arrival = mempools[o].txs;
    std::stable_sort(cursors[o].by_arrival.begin(), cursors[o].by_arrival.end(),
                     [](const MempoolTx& a, const MempoolTx& b) { return a.arrival_ns < b.arrival_ns; });
  }
  std::unordered_set<TxId, TxIdHash> confirmed;

  std::vector<AuditReport> reports;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Block& block = blocks[b];
    std::vector<BlockTemplate> templates;
    for (auto& c : cursors) {
      while (c.next < c.by_arrival.size() && c.by_arrival[c.next].arrival_ns <= *block.time_ns) {
        if (!confirmed.contains(c.by_arrival[c.next].txid)) c.pool.push_back(c.by_arrival[c.next]);
        ++c.next;
      }
      templates.push_back(expected_block(c.pool, cfg.capacity, block.height));
    }
    std::vector<std::vector<TxId>> later;
    for (std::size_t k = b + 1; k < blocks.size() && k <= b + cfg.window; ++k) later.push_back(blocks[k].txids);
    AuditReport report = compare(templates, block.txids, later);
    for (auto& miss : report.missing) {
      if (!miss.displaced_to) continue;
      const auto offset = static_cast<std::size_t>(*miss.displaced_to - report.height - 1);
      miss.displaced_to = blocks[b + 1 + offset].height;
    }
    if (cfg.dist) attach_false_accusation(report, templates, *cfg.dist);
    reports.push_back(std::move(report));

    confirmed.insert(block.txids.begin(), block.txids.end());
    for (auto& c : cursors) {
      std::erase_if(c.pool, [&](const MempoolTx& tx) { return confirmed.contains(tx.txid); });
    }
  }
  return reports;
}

}  // namespace mal
