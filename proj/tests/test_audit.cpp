#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mal/audit.hpp"
#include "mal/orderprob.hpp"
#include "mal/error.hpp"
#include "mal/mcsim.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mal;
using testutil::id_from;

namespace {

MempoolTx tx(int k, std::int64_t arrival, std::int64_t fee, std::int64_t weight = 1) {
  return {id_from(k), arrival, fee, weight};
}

BlockTemplate tmpl(std::int64_t height, std::vector<TxId> ids) {
  BlockTemplate t;
  t.height = height;
  t.txids = std::move(ids);
  t.arrival_ns.assign(t.txids.size(), 1);
  t.tau_c_ns = 1;
  return t;
}

}  // namespace

TEST_CASE("expected_block takes the highest fee rates first") {
  const std::vector<MempoolTx> pool{tx(1, 10, 1), tx(2, 20, 5), tx(3, 30, 3)};
  const auto t = expected_block(pool, 2, 7);
  CHECK(t.height == 7);
  CHECK(t.txids == std::vector<TxId>{id_from(2), id_from(3)});
  CHECK(t.total_weight == 2);
  CHECK(t.tau_c_ns == 30);
  CHECK(t.arrival_ns == std::vector<std::int64_t>{20, 30});
}

TEST_CASE("expected_block tie-breaks") {
  SUBCASE("equal rates: earlier arrival first") {
    const std::vector<MempoolTx> pool{tx(1, 20, 4, 2), tx(2, 10, 2, 1)};
    CHECK(expected_block(pool, 10, 1).txids == std::vector<TxId>{id_from(2), id_from(1)});
  }
  SUBCASE("equal rate and arrival: smaller txid first") {
    const std::vector<MempoolTx> pool{tx(9, 10, 3), tx(4, 10, 3)};
    CHECK(expected_block(pool, 10, 1).txids == std::vector<TxId>{id_from(4), id_from(9)});
  }
  SUBCASE("rates compared exactly") {
    // 1/3 vs 333333333/1e9: floating division would call these close
    const std::vector<MempoolTx> pool{tx(1, 10, 333333333, 1000000000), tx(2, 20, 1, 3)};
    CHECK(expected_block(pool, 2'000'000'000, 1).txids.front() == id_from(2));
  }
}

TEST_CASE("expected_block skips what does not fit and continues") {
  const std::vector<MempoolTx> pool{tx(1, 1, 100, 8), tx(2, 2, 90, 9), tx(3, 3, 10, 2)};
  const auto t = expected_block(pool, 10, 1);
  CHECK(t.txids == std::vector<TxId>{id_from(1), id_from(3)});
  CHECK(t.total_weight == 10);
}

TEST_CASE("expected_block edge cases") {
  const auto empty = expected_block({}, 100, 3);
  CHECK(empty.txids.empty());
  CHECK(empty.tau_c_ns == 0);
  CHECK_THROWS_AS(expected_block({}, 0, 3), DomainError);
  const std::vector<MempoolTx> bad{tx(1, 1, 1, 0)};
  CHECK_THROWS_AS(expected_block(bad, 10, 1), DomainError);
}

TEST_CASE("greedy stays within 90% of the knapsack optimum") {
  std::mt19937_64 gen(31337);
  for (int instance = 0; instance < 50; ++instance) {
    std::uniform_int_distribution<std::int64_t> w(1, 10), f(0, 100);
    std::vector<MempoolTx> pool;
    std::vector<std::int64_t> ws, fs;
    for (int i = 0; i < 50; ++i) {
      pool.push_back(tx(i, i + 1, f(gen), w(gen)));
      ws.push_back(pool.back().weight);
      fs.push_back(pool.back().fee);
    }
    const auto t = expected_block(pool, 30, 1);
    std::int64_t fee = 0;
    for (const auto& id : t.txids)
      fee += std::find_if(pool.begin(), pool.end(), [&](const MempoolTx& m) { return m.txid == id; })->fee;
    CHECK(static_cast<double>(fee) >= 0.9 * static_cast<double>(oracle::knapsack(ws, fs, 30)));
    CHECK(t.total_weight <= 30);
  }
}

TEST_CASE("expected_block is invariant to mempool order") {
  std::mt19937_64 gen(4);
  std::vector<MempoolTx> pool;
  for (int i = 0; i < 200; ++i) pool.push_back(tx(i, 1000 - i % 17, (i * 37) % 101, 1 + i % 9));
  const auto ref = expected_block(pool, 300, 5);
  for (int k = 0; k < 20; ++k) {
    std::shuffle(pool.begin(), pool.end(), gen);
    const auto t = expected_block(pool, 300, 5);
    CHECK(t.txids == ref.txids);
    CHECK(t.arrival_ns == ref.arrival_ns);
    CHECK(t.tau_c_ns == ref.tau_c_ns);
  }
}

TEST_CASE("compare: identity") {
  const std::vector<TxId> ids{id_from(1), id_from(2), id_from(3)};
  const std::vector<BlockTemplate> ts(16, tmpl(10, ids));
  const auto r = compare(ts, ids, {});
  CHECK(r.height == 10);
  CHECK(r.health == 1.0);
  CHECK(r.missing.empty());
  CHECK(r.added.empty());
  CHECK(r.partial.empty());
  CHECK(r.reordered_pairs == 0);
}

TEST_CASE("compare: displaced across blocks") {
  const std::vector<BlockTemplate> ts(16, tmpl(10, {id_from(1), id_from(2)}));
  const std::vector<TxId> actual{id_from(1)};
  const std::vector<std::vector<TxId>> later{{id_from(7)}, {id_from(2)}};
  const auto r = compare(ts, actual, later);
  REQUIRE(r.missing.size() == 1);
  CHECK(r.missing[0].txid == id_from(2));
  CHECK(r.missing[0].displaced_to == 12);

  const auto censored = compare(ts, actual, {});
  REQUIRE(censored.missing.size() == 1);
  CHECK_FALSE(censored.missing[0].displaced_to.has_value());
}

TEST_CASE("compare: categories are disjoint") {
  std::vector<BlockTemplate> ts;
  ts.push_back(tmpl(1, {id_from(1), id_from(2), id_from(3)}));
  ts.push_back(tmpl(1, {id_from(1), id_from(2)}));
  const std::vector<TxId> actual{id_from(1), id_from(9)};
  const auto r = compare(ts, actual, {});
  REQUIRE(r.missing.size() == 1);
  CHECK(r.missing[0].txid == id_from(2));
  CHECK(r.partial == std::vector<TxId>{id_from(3)});
  CHECK(r.added == std::vector<TxId>{id_from(9)});
  CHECK(*r.health == doctest::Approx(0.5));
}

TEST_CASE("compare: majority reorder vote") {
  std::vector<BlockTemplate> ts(3, tmpl(1, {id_from(1), id_from(2), id_from(3)}));
  ts[2] = tmpl(1, {id_from(2), id_from(1), id_from(3)});
  const std::vector<TxId> actual{id_from(2), id_from(1), id_from(3)};
  const auto r = compare(ts, actual, {});
  REQUIRE(r.reordered_pairs == 1);
  CHECK(r.reordered[0] == std::pair{id_from(2), id_from(1)});
  // a tie is not a reorder
  std::vector<BlockTemplate> split{tmpl(1, {id_from(1), id_from(2)}), tmpl(1, {id_from(2), id_from(1)})};
  CHECK(compare(split, std::vector<TxId>{id_from(2), id_from(1)}, {}).reordered_pairs == 0);
}

TEST_CASE("compare: empty actual block has no health") {
  const std::vector<BlockTemplate> ts(2, tmpl(1, {id_from(1)}));
  const auto r = compare(ts, std::vector<TxId>{}, {});
  CHECK_FALSE(r.health.has_value());
  CHECK(r.missing.size() == 1);
  CHECK_THROWS_AS(compare({}, std::vector<TxId>{}, {}), DomainError);
}

TEST_CASE("health drops as never-expected transactions replace expected ones") {
  std::vector<TxId> ids;
  for (int i = 0; i < 10; ++i) ids.push_back(id_from(i));
  const std::vector<BlockTemplate> ts(4, tmpl(1, ids));
  auto actual = ids;
  double prev = 1.0;
  for (int k = 0; k < 10; ++k) {
    actual[k] = id_from(1000 + k);
    const double h = *compare(ts, actual, {}).health;
    CHECK(h <= prev);
    CHECK(h == doctest::Approx((9.0 - k) / 10.0));
    prev = h;
  }
}

TEST_CASE("false accusation values") {
  const auto d = kit_lognormal();
  CHECK(false_accusation(d, 16, 0.0) == 1.0);
  CHECK(false_accusation(d, 4, 20.0) == doctest::Approx(6.9e-5).epsilon(0.02));
  CHECK(false_accusation(d, 16, 27.75) == doctest::Approx(std::pow(1 - oracle::lognormal_cdf(27.75, 1.973, 0.585), 16)));
}

TEST_CASE("attach_false_accusation uses the smallest per-observer margin") {
  const auto t1 = [] {
    BlockTemplate t;
    t.height = 1;
    t.txids = {id_from(1), id_from(2)};
    t.arrival_ns = {0, 30'000'000'000};
    t.tau_c_ns = 30'000'000'000;
    return t;
  }();
  auto t2 = t1;
  t2.arrival_ns = {10'000'000'000, 30'000'000'000};
  const std::vector<BlockTemplate> ts{t1, t2};
  auto r = compare(ts, std::vector<TxId>{id_from(2)}, {});
  attach_false_accusation(r, ts, kit_lognormal());
  REQUIRE(r.missing.size() == 1);
  CHECK(*r.missing[0].false_accusation_prob == doctest::Approx(cross_block_prob(kit_lognormal(), 2, 20.0)));
}

TEST_CASE("audit_chain validates its input") {
  const std::vector<ObserverMempool> mps{{"o1", {tx(1, 5, 1)}}};
  std::vector<Block> blocks{{2, 100, {}}, {1, 200, {}}};
  CHECK_THROWS_AS(audit_chain(mps, blocks, {}), DomainError);
  blocks = {{1, std::nullopt, {}}};
  CHECK_THROWS_AS(audit_chain(mps, blocks, {}), DomainError);
  CHECK_THROWS_AS(audit_chain({}, blocks, {}), DomainError);
}

TEST_CASE("audit_chain cuts mempools at block time and drops confirmed txs") {
  const std::vector<ObserverMempool> mps{{"a", {tx(1, 5, 10), tx(2, 50, 10), tx(3, 150, 10)}},
                                         {"b", {tx(1, 6, 10), tx(2, 40, 10), tx(3, 140, 10)}}};
  const std::vector<Block> blocks{{1, 100, {id_from(1)}}, {2, 200, {id_from(2), id_from(3)}}};
  ChainAuditConfig cfg;
  cfg.dist = kit_lognormal();
  const auto reps = audit_chain(mps, blocks, cfg);
  REQUIRE(reps.size() == 2);
  REQUIRE(reps[0].missing.size() == 1);
  CHECK(reps[0].missing[0].txid == id_from(2));
  CHECK(reps[0].missing[0].displaced_to == 2);
  CHECK(reps[0].missing[0].false_accusation_prob.has_value());
  CHECK(reps[1].missing.empty());
  CHECK(reps[1].added.empty());
  CHECK(reps[1].health == 1.0);
  // matches observer_templates + compare
  const auto ts = observer_templates(mps, blocks, 1, cfg.capacity);
  CHECK(ts[0].txids.size() == 2);
}

TEST_CASE("closed loop: censorship shows up as missing with no later hit") {
  SimConfig cfg;
  cfg.n_observers = 16;
  cfg.tx_count = 300;
  cfg.seed = 8;
  cfg.send_process = PoissonArrivals{0.2};
  cfg.template_lag_s = 30;
  const auto sim = simulate_network(cfg, Censor{{5}});
  const auto reps = audit_chain(observer_mempools(sim), sim.blocks, {});
  const auto& victim = sim.truth.txs[5].txid;
  std::size_t flagged = 0;
  for (const auto& r : reps)
    for (const auto& m : r.missing)
      if (m.txid == victim) {
        ++flagged;
        CHECK_FALSE(m.displaced_to.has_value());
      }
  CHECK(flagged >= 1);
}

TEST_CASE("closed loop: cross-block delay is reported as displaced") {
  SimConfig cfg;
  cfg.n_observers = 16;
  cfg.tx_count = 300;
  cfg.seed = 9;
  cfg.send_process = PoissonArrivals{0.2};
  cfg.template_lag_s = 30;
  const auto sim = simulate_network(cfg, CrossBlockDelay{{10}, 2});
  const auto reps = audit_chain(observer_mempools(sim), sim.blocks, {});
  const auto& victim = sim.truth.txs[10].txid;
  bool displaced = false;
  for (const auto& r : reps)
    for (const auto& m : r.missing)
      if (m.txid == victim && m.displaced_to) displaced = true;
  CHECK(displaced);
}

TEST_CASE("closed loop: zero-latency honest runs have nothing missing") {
  SimConfig cfg;
  cfg.dist = lognormal(-25.0, 0.01);  // ~1e-11 s delays
  cfg.n_observers = 8;
  cfg.tx_count = 2000;
  cfg.seed = 3;
  cfg.send_process = PoissonArrivals{1.0};
  cfg.block_capacity = 400'000;
  const auto sim = simulate_network(cfg);
  const auto reps = audit_chain(observer_mempools(sim), sim.blocks, {cfg.block_capacity, 6, std::nullopt});
  for (const auto& r : reps) {
    CHECK(r.missing.empty());
    CHECK(r.added.empty());
    CHECK(r.reordered_pairs == 0);
  }
}
