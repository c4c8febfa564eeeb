#include "santa/congest/round_stats.hpp"

#include <algorithm>

namespace santa::congest {

void StatsLog::add(std::string phase, const RoundStats& stats) {
  records_.push_back({std::move(phase), stats});
}

void StatsLog::append(const StatsLog& other, std::string_view prefix) {
  for (const auto& r : other.records_) records_.push_back({std::string(prefix) + r.phase, r.stats});
}

StatsLog StatsLog::merged() const {
  StatsLog out;
  for (const auto& r : records_) {
    auto it = std::find_if(out.records_.begin(), out.records_.end(), [&](const PhaseRecord& p) { return p.phase == r.phase; });
    if (it == out.records_.end()) {
      out.records_.push_back(r);
    } else {
      it->stats += r.stats;
    }
  }
  return out;
}

RoundStats StatsLog::total() const {
  RoundStats sum;
  for (const auto& r : records_) sum += r.stats;
  return sum;
}

namespace {

void write_row(std::ostream& out, std::string_view run_id, std::string_view phase,
               const RoundStats& s) {
  out << run_id << ',' << phase << ',' << s.rounds_elapsed << ',' << s.max_bits_on_any_edge_per_round
      << ',' << s.total_messages << ',' << s.budget_violations << '\n';
}

}  // namespace

void write_stats_csv(std::ostream& out, std::string_view run_id, const StatsLog& log, bool header) {
  if (header) out << "run_id,phase,rounds,max_edge_bits,messages,violations\n";
  for (const auto& r : log.records()) write_row(out, run_id, r.phase, r.stats);
  write_row(out, run_id, "total", log.total());
}

}  // namespace santa::congest
