#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mal/audit.hpp"
#include "mal/fairness.hpp"
#include "mal/ingest.hpp"
#include "mal/mcsim.hpp"

namespace mal {

using ojson = nlohmann::ordered_json;

// ---- observer logs --------------------------------------------------------

void write_observer_log(std::ostream& out, std::span<const ReceptionEvent> events);

// ---- mempool snapshots ----------------------------------------------------

/// JSONL, one `{"txid","arrival_ns","fee","weight"}` object per line.
std::vector<MempoolTx> parse_mempool(std::istream& in);
std::vector<MempoolTx> parse_mempool(const std::filesystem::path& path);
void write_mempool(std::ostream& out, std::span<const MempoolTx> txs);

/// Every `*.jsonl` in dir, sorted by name; the file stem names the observer.
std::vector<ObserverMempool> load_mempools(const std::filesystem::path& dir);

// ---- blocks ---------------------------------------------------------------

/// Either a JSON array of blocks or JSON Lines with one block per line.
std::vector<Block> parse_blocks(std::istream& in);
std::vector<Block> parse_blocks(const std::filesystem::path& path);
/// JSON Lines.
void write_blocks(std::ostream& out, std::span<const Block> blocks);

// ---- reports --------------------------------------------------------------

ojson to_json(const AuditReport& r);
ojson to_json(const CoverageReport& r);
ojson to_json(const COrderReport& r);
ojson to_json(const MutualInformation& mi, const std::vector<std::string>& observers);
ojson to_json(const FairnessAssessment& a);
ojson ground_truth_json(const NetworkSimulation& sim, const AttackSpec& attack);

/// Header `m,exactly,at_least,at_least_frac`.
void write_coverage_csv(std::ostream& out, const CoverageReport& r);
/// Header `m,frac`.
void write_c_order_csv(std::ostream& out, const COrderReport& r);
/// Header `observer_a,observer_b,mi_nats`; absent entries are skipped.
void write_mi_csv(std::ostream& out, const MutualInformation& mi, const std::vector<std::string>& observers);
/// Header `gamma,f_frac,f_max,coverage`.
void write_fairness_csv(std::ostream& out, std::span<const FairnessAssessment> rows);
/// Header `height,kind,txid,other_txid,displaced_to,false_accusation_prob,health`.
void write_audit_csv(std::ostream& out, std::span<const AuditReport> reports);

/// Shortest round-trip decimal form.
std::string format_double(double x);
/// 100·x with one decimal.
std::string format_percent(double x);

}  // namespace mal
