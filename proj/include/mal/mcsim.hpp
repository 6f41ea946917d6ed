#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mal/audit.hpp"
#include "mal/dist.hpp"
#include "mal/ingest.hpp"

namespace mal {

// ---------------------------------------------------------------------------
// Order-agreement Monte Carlo

enum class AgreementMode { Exactly, AtLeast };

struct AgreementEstimate {
  int n = 0;
  int m = 0;
  AgreementMode mode = AgreementMode::Exactly;
  double estimate = 0.0;
  double std_err = 0.0;  // sqrt(estimate (1 - estimate) / trials)
  std::uint64_t trials = 0;
};

/// Histogram over K = 0..n of the number of observers receiving t1 first,
/// where per trial and observer t1's delay is compared with ω + t2's delay.
/// Trials run in fixed-size batches, one random stream per batch, so the
/// result does not depend on the worker count.
std::vector<std::uint64_t> agreement_counts(const PropagationDistribution& dist, int n, double omega_s,
                                            std::uint64_t trials, std::uint64_t seed);

AgreementEstimate estimate_from_counts(const std::vector<std::uint64_t>& counts, int m, AgreementMode mode);

/// Requires trials >= 1000.
AgreementEstimate estimate_q(const PropagationDistribution& dist, int n, int m, AgreementMode mode, double omega_s,
                             std::uint64_t trials, std::uint64_t seed);

struct FrequencyEstimate {
  double estimate = 0.0;
  double std_err = 0.0;
  std::uint64_t trials = 0;
};

/// Fraction of trials in which all n observers receive a transaction later
/// than tau_c_s (the simulated counterpart of cross_block_prob).
FrequencyEstimate estimate_all_miss(const PropagationDistribution& dist, int n, double tau_c_s, std::uint64_t trials,
                                    std::uint64_t seed);

// ---------------------------------------------------------------------------
// Synthetic network

struct FixedGap {
  double omega_s;
};
struct PoissonArrivals {
  double rate_per_s;
};
using SendProcess = std::variant<FixedGap, PoissonArrivals>;

/// Fee per weight unit.
struct UniformFeeRate {
  double lo;
  double hi;
};

struct SimConfig {
  PropagationDistribution dist = kit_lognormal();
  int n_observers = 16;
  std::uint64_t seed = 1;
  std::size_t tx_count = 1000;
  SendProcess send_process = PoissonArrivals{1.0};
  UniformFeeRate fee_model{1.0, 100.0};
  std::int64_t block_capacity = 4'000'000;

  std::int64_t weight_lo = 400;
  std::int64_t weight_hi = 4000;
  /// Independent per (observer, tx) probability that the observer never logs it.
  double drop_prob = 0.0;
  double block_interval_s = 600.0;
  /// Observers audit block b at its build time plus this lag.
  double template_lag_s = 0.0;
  /// 0: enough blocks to span the send window.
  std::size_t block_count = 0;
  /// The miner receives each transaction via the fastest of this many
  /// independent propagation paths.
  int miner_paths = 1;
  std::int64_t first_height = 1;
  std::int64_t start_ns = 1'700'000'000'000'000'000;

  void validate() const;
};

struct NoAttack {};
/// The miner front-runs the victim: an attacker transaction with the victim's
/// fee and weight, sent attacker_gap_s later, is placed right before it.
struct SwapPair {
  std::size_t victim_index;
  double attacker_gap_s;
};
struct Censor {
  std::vector<std::size_t> tx_indices;
};
/// Each listed transaction is held back blocks_delayed blocks past the block
/// in which the miner first had it.
struct CrossBlockDelay {
  std::vector<std::size_t> tx_indices;
  int blocks_delayed;
};
using AttackSpec = std::variant<NoAttack, SwapPair, Censor, CrossBlockDelay>;

enum class TxRole { Honest, Censored, Delayed, SwapVictim, SwapAttacker };
const char* role_name(TxRole role);

struct TxTruth {
  TxId txid;
  std::int64_t send_ns = 0;
  std::int64_t fee = 0;
  std::int64_t weight = 1;
  double fee_rate = 0.0;
  std::int64_t miner_recv_ns = 0;
  TxRole role = TxRole::Honest;
};

struct GroundTruth {
  std::uint64_t seed = 0;
  std::vector<TxTruth> txs;          // generation order; a swap attacker is appended last
  std::vector<std::int64_t> build_ns;  // per block: when the miner fixed its contents
};

struct NetworkSimulation {
  std::vector<std::string> observers;
  /// recv_ns[tx * n + o], 0 when observer o never logged tx; tx in truth order.
  std::vector<std::int64_t> recv_ns;
  std::vector<Block> blocks;
  GroundTruth truth;

  std::size_t n() const { return observers.size(); }
};

/// Deterministic for a fixed config (including seed).
NetworkSimulation simulate_network(const SimConfig& cfg, const AttackSpec& attack = NoAttack{});

/// Observer o's log in reception order (ties by txid).
std::vector<ReceptionEvent> observer_log(const NetworkSimulation& sim, std::size_t o);
std::vector<std::vector<ReceptionEvent>> observer_logs(const NetworkSimulation& sim);
/// Observer o's mempool snapshot: its receptions with public fee and weight.
ObserverMempool observer_mempool(const NetworkSimulation& sim, std::size_t o);
std::vector<ObserverMempool> observer_mempools(const NetworkSimulation& sim);

/// Ground-truth pairs (0,1), (2,3), ... of the generated transactions as
/// ledger indices, for closed-loop checks against a known send gap. At most
/// max_pairs; pairs with a member missing from the ledger are skipped.
PairSample sent_pairs(const NetworkSimulation& sim, const ReceptionLedger& ledger, std::size_t max_pairs);

}  // namespace mal
