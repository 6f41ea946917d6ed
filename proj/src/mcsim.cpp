#include "mal/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>
#include <unordered_map>

#include "mal/error.hpp"
#include "mal/rng.hpp"

namespace mal {
namespace {

constexpr std::uint64_t kBatch = 8192;

// Runs body(batch) for every batch on a small worker pool.
template <class Body>
void for_each_batch(std::uint64_t batches, Body&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(std::min<std::uint64_t>(batches, 64))));
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b; (b = next.fetch_add(1)) < batches;) body(b);
  };
  if (workers == 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
}

std::int64_t to_ns(double s) {
  const double ns = std::round(s * 1e9);
  if (!(ns < 9.0e18)) return std::numeric_limits<std::int64_t>::max() / 2;
  return static_cast<std::int64_t>(ns);
}

TxId random_txid(std::uint64_t seed, std::size_t index) {
  RngStream rng(seed, substream(StreamPurpose::TxAttributes, 1, index));
  std::array<std::uint8_t, 32> bytes{};
  for (int w = 0; w < 4; ++w) {
    const std::uint64_t x = rng();
    for (int k = 0; k < 8; ++k) bytes[w * 8 + k] = static_cast<std::uint8_t>(x >> (56 - 8 * k));
  }
  return TxId(bytes);
}

}  // namespace

std::vector<std::uint64_t> agreement_counts(const PropagationDistribution& dist, int n, double omega_s,
                                            std::uint64_t trials, std::uint64_t seed) {
  if (n < 1) throw DomainError("agreement_counts: n must be >= 1");
  if (!std::isfinite(omega_s)) throw DomainError("agreement_counts: omega must be finite");
  const std::uint64_t batches = (trials + kBatch - 1) / kBatch;
  std::vector<std::vector<std::uint64_t>> partial(batches, std::vector<std::uint64_t>(n + 1, 0));
  for_each_batch(batches, [&](std::uint64_t b) {
    RngStream rng(seed, substream(StreamPurpose::AgreementTrials, 0, b));
    const std::uint64_t count = std::min(kBatch, trials - b * kBatch);
    auto& hist = partial[b];
    for (std::uint64_t t = 0; t < count; ++t) {
      int k = 0;
      for (int o = 0; o < n; ++o) {
        const double d1 = sample(dist, rng);
        const double d2 = sample(dist, rng);
        if (d1 < omega_s + d2) ++k;
      }
      ++hist[k];
    }
  });
  std::vector<std::uint64_t> total(n + 1, 0);
  for (const auto& h : partial)
    for (int k = 0; k <= n; ++k) total[k] += h[k];
  return total;
}

AgreementEstimate estimate_from_counts(const std::vector<std::uint64_t>& counts, int m, AgreementMode mode) {
  const int n = static_cast<int>(counts.size()) - 1;
  if (n < 1 || m < 0 || m > n) throw DomainError("estimate_from_counts: need 0 <= m <= n");
  std::uint64_t trials = 0, hits = 0;
  for (int k = 0; k <= n; ++k) {
    trials += counts[k];
    if (k == m || (mode == AgreementMode::AtLeast && k >= m)) hits += counts[k];
  }
  if (trials == 0) throw DomainError("estimate_from_counts: no trials");
  AgreementEstimate e;
  e.n = n;
  e.m = m;
  e.mode = mode;
  e.trials = trials;
  e.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  e.std_err = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(trials));
  return e;
}

AgreementEstimate estimate_q(const PropagationDistribution& dist, int n, int m, AgreementMode mode, double omega_s,
                             std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1000) throw DomainError("estimate_q: trials must be >= 1000");
  if (m < 0 || m > n) throw DomainError("estimate_q: need 0 <= m <= n");
  return estimate_from_counts(agreement_counts(dist, n, omega_s, trials, seed), m, mode);
}

FrequencyEstimate estimate_all_miss(const PropagationDistribution& dist, int n, double tau_c_s, std::uint64_t trials,
                                    std::uint64_t seed) {
  if (n < 1) throw DomainError("estimate_all_miss: n must be >= 1");
  if (!(tau_c_s >= 0.0)) throw DomainError("estimate_all_miss: tau must be >= 0");
  if (trials == 0) throw DomainError("estimate_all_miss: trials must be > 0");
  const std::uint64_t batches = (trials + kBatch - 1) / kBatch;
  std::vector<std::uint64_t> hits(batches, 0);
  for_each_batch(batches, [&](std::uint64_t b) {
    RngStream rng(seed, substream(StreamPurpose::CrossBlockTrials, 0, b));
    const std::uint64_t count = std::min(kBatch, trials - b * kBatch);
    for (std::uint64_t t = 0; t < count; ++t) {
      bool all_late = true;
      // draw every delay so the stream position stays a function of t alone
      for (int o = 0; o < n; ++o) all_late &= sample(dist, rng) > tau_c_s;
      hits[b] += all_late;
    }
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  FrequencyEstimate e;
  e.trials = trials;
  e.estimate = static_cast<double>(total) / static_cast<double>(trials);
  e.std_err = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(trials));
  return e;
}

void SimConfig::validate() const {
  if (n_observers < 1 || n_observers > 0xffffff) throw DomainError("simulation: n_observers must be >= 1");
  if (tx_count == 0) throw DomainError("simulation: tx_count must be >= 1");
  if (block_capacity <= 0) throw DomainError("simulation: block capacity must be > 0");
  if (weight_lo < 1 || weight_hi < weight_lo) throw DomainError("simulation: need 1 <= weight_lo <= weight_hi");
  if (!(fee_model.lo >= 0.0) || !(fee_model.hi >= fee_model.lo)) throw DomainError("simulation: need 0 <= fee lo <= fee hi");
  if (!(drop_prob >= 0.0 && drop_prob < 1.0)) throw DomainError("simulation: drop probability must be in [0, 1)");
  if (!(block_interval_s > 0.0)) throw DomainError("simulation: block interval must be > 0");
  if (!(template_lag_s >= 0.0)) throw DomainError("simulation: template lag must be >= 0");
  if (miner_paths < 1) throw DomainError("simulation: miner_paths must be >= 1");
  if (start_ns <= 0) throw DomainError("simulation: start_ns must be > 0");
  std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FixedGap>) {
          if (!(p.omega_s >= 0.0 && std::isfinite(p.omega_s))) throw DomainError("simulation: omega must be >= 0");
        } else {
          if (!(p.rate_per_s > 0.0 && std::isfinite(p.rate_per_s))) throw DomainError("simulation: rate must be > 0");
        }
      },
      send_process);
}

const char* role_name(TxRole role) {
  switch (role) {
    case TxRole::Honest: return "honest";
    case TxRole::Censored: return "censored";
    case TxRole::Delayed: return "delayed";
    case TxRole::SwapVictim: return "swap_victim";
    case TxRole::SwapAttacker: return "swap_attacker";
  }
  return "honest";
}

NetworkSimulation simulate_network(const SimConfig& cfg, const AttackSpec& attack) {
  cfg.validate();
  const std::size_t base = cfg.tx_count;
  const auto n = static_cast<std::size_t>(cfg.n_observers);

  std::optional<SwapPair> swap;
  std::vector<std::size_t> held_blocks(base, 0);  // CrossBlockDelay
  std::vector<bool> censored(base, false);
  std::visit(
      [&](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, SwapPair>) {
          if (a.victim_index >= base) throw DomainError("simulation: swap victim index out of range");
          if (!(a.attacker_gap_s > 0.0 && std::isfinite(a.attacker_gap_s)))
            throw DomainError("simulation: attacker gap must be > 0");
          swap = a;
        } else if constexpr (std::is_same_v<A, Censor>) {
          for (auto i : a.tx_indices) {
            if (i >= base) throw DomainError("simulation: censored index out of range");
            censored[i] = true;
          }
        } else if constexpr (std::is_same_v<A, CrossBlockDelay>) {
          if (a.blocks_delayed < 1) throw DomainError("simulation: blocks_delayed must be >= 1");
          for (auto i : a.tx_indices) {
            if (i >= base) throw DomainError("simulation: delayed index out of range");
            held_blocks[i] = static_cast<std::size_t>(a.blocks_delayed);
          }
        }
      },
      attack);

  NetworkSimulation sim;
  for (std::size_t o = 0; o < n; ++o) {
    char name[32];
    std::snprintf(name, sizeof name, "o%02zu", o);
    sim.observers.emplace_back(name);
  }
  auto& truth = sim.truth;
  truth.seed = cfg.seed;
  const std::size_t total = base + (swap ? 1 : 0);
  truth.txs.resize(total);

  // send times
  {
    RngStream arrivals(cfg.seed, substream(StreamPurpose::SendProcess, 0, 0));
    double t = 0.0;
    for (std::size_t i = 0; i < base; ++i) {
      if (const auto* g = std::get_if<FixedGap>(&cfg.send_process)) {
        t = g->omega_s * static_cast<double>(i);
      } else if (i > 0) {
        t += -std::log(arrivals.uniform()) / std::get<PoissonArrivals>(cfg.send_process).rate_per_s;
      }
      truth.txs[i].send_ns = cfg.start_ns + to_ns(t);
    }
  }
  for (std::size_t i = 0; i < base; ++i) {
    auto& tx = truth.txs[i];
    tx.txid = random_txid(cfg.seed, i);
    RngStream attr(cfg.seed, substream(StreamPurpose::TxAttributes, 0, i));
    tx.weight = cfg.weight_lo + static_cast<std::int64_t>(attr.below(static_cast<std::uint64_t>(cfg.weight_hi - cfg.weight_lo + 1)));
    const double rate = cfg.fee_model.lo + (cfg.fee_model.hi - cfg.fee_model.lo) * attr.uniform();
    tx.fee = std::llround(rate * static_cast<double>(tx.weight));
    tx.fee_rate = static_cast<double>(tx.fee) / static_cast<double>(tx.weight);
    if (censored[i]) tx.role = TxRole::Censored;
    if (held_blocks[i] > 0) tx.role = TxRole::Delayed;
  }
  if (swap) {
    auto& victim = truth.txs[swap->victim_index];
    victim.role = TxRole::SwapVictim;
    auto& a = truth.txs[base];
    a.txid = random_txid(cfg.seed, base);
    a.send_ns = victim.send_ns + to_ns(swap->attacker_gap_s);
    a.fee = victim.fee;
    a.weight = victim.weight;
    a.fee_rate = victim.fee_rate;
    a.role = TxRole::SwapAttacker;
  }

  // observer receptions
  sim.recv_ns.assign(total * n, 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t o = 0; o < n; ++o) {
      if (cfg.drop_prob > 0.0) {
        RngStream drop(cfg.seed, substream(StreamPurpose::Drops, o, i));
        if (drop.uniform() < cfg.drop_prob) continue;
      }
      RngStream delay(cfg.seed, substream(StreamPurpose::ReceptionDelay, o, i));
      sim.recv_ns[i * n + o] = truth.txs[i].send_ns + std::max<std::int64_t>(1, to_ns(sample(cfg.dist, delay)));
    }
  }

  // miner receptions: fastest of miner_paths independent paths
  for (std::size_t i = 0; i < total; ++i) {
    auto& tx = truth.txs[i];
    if (tx.role == TxRole::SwapAttacker) {
      tx.miner_recv_ns = tx.send_ns;
      continue;
    }
    RngStream rng(cfg.seed, substream(StreamPurpose::MinerDelay, 0, i));
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.miner_paths; ++k) best = std::min(best, sample(cfg.dist, rng));
    tx.miner_recv_ns = tx.send_ns + to_ns(best);
  }

  // when the miner may first include each tx
  std::vector<std::int64_t> available(total);
  for (std::size_t i = 0; i < total; ++i) available[i] = truth.txs[i].miner_recv_ns;
  if (swap) {
    auto& v = available[swap->victim_index];
    v = std::max(v, available[base]);
  }

  const auto interval_ns = to_ns(cfg.block_interval_s);
  std::size_t blocks = cfg.block_count;
  if (blocks == 0) {
    std::int64_t last = 0;
    for (const auto& tx : truth.txs) last = std::max(last, tx.send_ns - cfg.start_ns);
    std::size_t extra = 0;
    for (auto h : held_blocks) extra = std::max(extra, h);
    blocks = static_cast<std::size_t>(last / interval_ns) + 1 + extra;
  }

  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return available[a] < available[b]; });
  std::unordered_map<TxId, std::size_t, TxIdHash> index_of;
  for (std::size_t i = 0; i < total; ++i) index_of.emplace(truth.txs[i].txid, i);

  std::set<std::size_t> pending;
  std::vector<std::size_t> first_block(total, SIZE_MAX);
  std::size_t cursor = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::int64_t build = cfg.start_ns + static_cast<std::int64_t>(b + 1) * interval_ns;
    truth.build_ns.push_back(build);
    for (; cursor < total && available[order[cursor]] <= build; ++cursor) {
      const auto i = order[cursor];
      first_block[i] = b;
      if (truth.txs[i].role != TxRole::Censored) pending.insert(i);
    }
    std::vector<MempoolTx> pool;
    pool.reserve(pending.size());
    for (auto i : pending) {
      if (i < base && held_blocks[i] > 0 && b < first_block[i] + held_blocks[i]) continue;
      const auto& tx = truth.txs[i];
      pool.push_back({tx.txid, available[i], tx.fee, tx.weight});
    }
    const auto tmpl = expected_block(pool, cfg.block_capacity,
                                     cfg.first_height + static_cast<std::int64_t>(b));
    std::vector<TxId> ids = tmpl.txids;
    if (swap) {
      const TxId& victim = truth.txs[swap->victim_index].txid;
      const TxId& attacker = truth.txs[base].txid;
      auto vit = std::find(ids.begin(), ids.end(), victim);
      auto ait = std::find(ids.begin(), ids.end(), attacker);
      if (vit != ids.end() && ait != ids.end()) {
        ids.erase(ait);
        vit = std::find(ids.begin(), ids.end(), victim);
        ids.insert(vit, attacker);
      } else if (vit != ids.end()) {
        ids.erase(vit);
      } else if (ait != ids.end()) {
        ids.erase(ait);
      }
    }
    for (const auto& id : ids) pending.erase(index_of.at(id));
    Block blk;
    blk.height = tmpl.height;
    blk.time_ns = build + to_ns(cfg.template_lag_s);
    blk.txids = std::move(ids);
    sim.blocks.push_back(std::move(blk));
  }
  return sim;
}

std::vector<ReceptionEvent> observer_log(const NetworkSimulation& sim, std::size_t o) {
  const std::size_t n = sim.n();
  if (o >= n) throw DomainError("observer_log: observer index out of range");
  std::vector<ReceptionEvent> out;
  for (std::size_t i = 0; i < sim.truth.txs.size(); ++i) {
    const auto r = sim.recv_ns[i * n + o];
    if (r != 0) out.push_back({sim.observers[o], sim.truth.txs[i].txid, r});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.recv_ns != b.recv_ns ? a.recv_ns < b.recv_ns : a.txid < b.txid;
  });
  return out;
}

std::vector<std::vector<ReceptionEvent>> observer_logs(const NetworkSimulation& sim) {
  std::vector<std::vector<ReceptionEvent>> out;
  for (std::size_t o = 0; o < sim.n(); ++o) out.push_back(observer_log(sim, o));
  return out;
}

ObserverMempool observer_mempool(const NetworkSimulation& sim, std::size_t o) {
  const std::size_t n = sim.n();
  if (o >= n) throw DomainError("observer_mempool: observer index out of range");
  ObserverMempool mp;
  mp.observer = sim.observers[o];
  for (std::size_t i = 0; i < sim.truth.txs.size(); ++i) {
    const auto r = sim.recv_ns[i * n + o];
    const auto& tx = sim.truth.txs[i];
    if (r != 0) mp.txs.push_back({tx.txid, r, tx.fee, tx.weight});
  }
  std::sort(mp.txs.begin(), mp.txs.end(), [](const auto& a, const auto& b) {
    return a.arrival_ns != b.arrival_ns ? a.arrival_ns < b.arrival_ns : a.txid < b.txid;
  });
  return mp;
}

std::vector<ObserverMempool> observer_mempools(const NetworkSimulation& sim) {
  std::vector<ObserverMempool> out;
  for (std::size_t o = 0; o < sim.n(); ++o) out.push_back(observer_mempool(sim, o));
  return out;
}

PairSample sent_pairs(const NetworkSimulation& sim, const ReceptionLedger& ledger, std::size_t max_pairs) {
  PairSample out;
  out.seed = sim.truth.seed;
  for (std::size_t i = 0; i + 1 < sim.truth.txs.size() && out.pairs.size() < max_pairs; i += 2) {
    const auto a = ledger.find(sim.truth.txs[i].txid);
    const auto b = ledger.find(sim.truth.txs[i + 1].txid);
    if (a && b) out.pairs.emplace_back(*a, *b);
  }
  return out;
}

}  // namespace mal
