#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ccnsim {

struct MetricRow {
  std::string entity;
  std::string metric;
  double value = 0;
};

struct AttackRow {
  std::string attack_id;
  std::string variant;
  std::string param_hash;
  std::string metric;
  double value = 0;
};

/// Deterministic numeric formatting shared by every CSV and trace writer.
std::string format_value(double v);

class MetricsTable {
 public:
  void add(const std::string& entity, const std::string& metric, double value) {
    rows_.push_back(MetricRow{entity, metric, value});
  }

  const std::vector<MetricRow>& rows() const { return rows_; }

  std::optional<double> get(const std::string& entity,
                            const std::string& metric) const;

  /// Value that must exist; throws otherwise (test convenience).
  double at(const std::string& entity, const std::string& metric) const;

 private:
  std::vector<MetricRow> rows_;
};

void write_metrics_csv(std::ostream& out, const std::string& scenario_id,
                       std::uint64_t seed, const MetricsTable& table);

void write_attack_csv(std::ostream& out, const std::string& scenario_id,
                      std::uint64_t seed, const std::vector<AttackRow>& rows);

}  // namespace ccnsim
