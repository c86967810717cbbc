#pragma once

/// Result emission: CSV for fields and profiles, JSON for reports. Every
/// file embeds the fully resolved run configuration so outputs are
/// self-describing, and all numbers round-trip (17 significant digits).

#include <string>
#include <vector>

#include <json.hpp>

namespace heis {

/// One CSV line fragment: 17-significant-digit decimal, locale-free.
std::string format_double(double v);

/// Writes "# config: <one-line json>", a header row, then the data rows.
/// Every row must match the header width.
void write_csv(const std::string& path, const nlohmann::json& config,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

/// Writes the report with the resolved config attached under "config".
void write_report(const std::string& path, const nlohmann::json& config,
                  nlohmann::json report);

}  // namespace heis
