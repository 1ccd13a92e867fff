#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weakvel/campaign.hpp"
#include "weakvel/estimators.hpp"

namespace weakvel {

/// Column names of the result table for `mode`, in output order.
std::vector<std::string_view> campaign_columns(Mode mode);

/// Writes `# weakvel mode=<mode> config_hash=0x<16 hex> master_seed=<n>`,
/// the column header, and one line per row. Floating values use %.17e.
void write_campaign_csv(std::ostream& out, const CampaignConfig& config,
                        std::span<const CampaignRow> rows);

/// Reads a table written by write_campaign_csv. Columns not present in the
/// mode's table stay at their defaults. Throws ConfigError on malformed input.
std::vector<CampaignRow> read_campaign_csv(std::istream& in, Mode mode);

/// Columns estimator,n_used,delta_t_s,v_mps,f_d_hz,std_v_mps. A missing
/// standard error is written as "nan".
void write_estimates_csv(std::ostream& out, std::span<const VelocityEstimate> estimates);

}  // namespace weakvel
