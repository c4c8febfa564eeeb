#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "santa/congest/network.hpp"

namespace santa::congest {

inline constexpr int kStatsSchemaVersion = 1;

struct PhaseRecord {
  std::string phase;
  RoundStats stats;
};

// Ordered per-phase accounting of one run.
class StatsLog {
 public:
  void add(std::string phase, const RoundStats& stats);
  void append(const StatsLog& other, std::string_view prefix = {});
  const std::vector<PhaseRecord>& records() const { return records_; }
  RoundStats total() const;
  // One record per phase name, in order of first appearance; repeated
  // phases compose sequentially.
  StatsLog merged() const;

 private:
  std::vector<PhaseRecord> records_;
};

// Columns: run_id, phase, rounds, max_edge_bits, messages, violations.
// A final row with phase "total" sums the run.
void write_stats_csv(std::ostream& out, std::string_view run_id, const StatsLog& log,
                     bool header = true);

}  // namespace santa::congest
