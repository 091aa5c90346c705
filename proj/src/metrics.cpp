#include "ccnsim/metrics.hpp"

#include <cstdio>
#include <stdexcept>

namespace ccnsim {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::optional<double> MetricsTable::get(const std::string& entity,
                                        const std::string& metric) const {
  for (const auto& row : rows_) {
    if (row.entity == entity && row.metric == metric) return row.value;
  }
  return std::nullopt;
}

double MetricsTable::at(const std::string& entity,
                        const std::string& metric) const {
  auto v = get(entity, metric);
  if (!v) throw std::out_of_range("no metric " + entity + "/" + metric);
  return *v;
}

void write_metrics_csv(std::ostream& out, const std::string& scenario_id,
                       std::uint64_t seed, const MetricsTable& table) {
  out << "scenario_id,seed,entity,metric,value\n";
  for (const auto& row : table.rows()) {
    out << scenario_id << ',' << seed << ',' << row.entity << ',' << row.metric
        << ',' << format_value(row.value) << '\n';
  }
}

void write_attack_csv(std::ostream& out, const std::string& scenario_id,
                      std::uint64_t seed, const std::vector<AttackRow>& rows) {
  out << "scenario_id,seed,attack_id,variant,param_hash,metric,value\n";
  for (const auto& row : rows) {
    out << scenario_id << ',' << seed << ',' << row.attack_id << ','
        << row.variant << ',' << row.param_hash << ',' << row.metric << ','
        << format_value(row.value) << '\n';
  }
}

}  // namespace ccnsim
