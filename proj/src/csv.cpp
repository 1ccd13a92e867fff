#include "weakvel/csv.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <variant>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "weakvel/errors.hpp"

namespace weakvel {

namespace {

using Field = std::variant<double CampaignRow::*, std::uint64_t CampaignRow::*>;

struct Column {
  std::string_view name;
  Field field;
};

const Column kTauS{"tau_s", &CampaignRow::tau_s};
const Column kVppV{"v_pp_v", &CampaignRow::v_pp_v};
const Column kNInput{"n_input", &CampaignRow::n_input};
const Column kTauSqrtN{"tau_sqrt_n", &CampaignRow::tau_sqrt_n};
const Column kPhi{"phi_rad", &CampaignRow::phi_rad};
const Column kVTrue{"v_true_mps", &CampaignRow::v_true_mps};
const Column kVMean{"v_hat_mean_mps", &CampaignRow::v_hat_mean_mps};
const Column kVStd{"v_hat_std_mps", &CampaignRow::v_hat_std_mps};
const Column kFdMean{"f_d_mean_hz", &CampaignRow::f_d_mean_hz};
const Column kFdStd{"f_d_std_hz", &CampaignRow::f_d_std_hz};
const Column kCrb{"crb_v_mps", &CampaignRow::crb_v_mps};
const Column kEff{"efficiency_ratio", &CampaignRow::efficiency_ratio};
const Column kSnr{"snr_predicted", &CampaignRow::snr_predicted};
const Column kNDet{"n_detected_mean", &CampaignRow::n_detected_mean};
const Column kTrials{"trials_used", &CampaignRow::trials_used};
const Column kFailed{"failed_fits", &CampaignRow::failed_fits};

std::vector<Column> columns_for(Mode mode) {
  switch (mode) {
    case Mode::Sweep:
      return {kTauS, kVppV, kNInput, kVTrue, kVMean, kVStd, kCrb, kEff, kSnr, kNDet, kTrials};
    case Mode::Efficiency:
      return {kTauS, kVppV, kNInput, kTauSqrtN, kVTrue, kVMean, kVStd, kCrb, kEff, kSnr, kNDet, kTrials};
    case Mode::Truncated:
      return {kVppV, kTauS, kPhi, kNInput, kFdMean, kFdStd, kVTrue, kVMean,
              kVStd, kCrb,  kEff, kSnr,    kNDet,   kTrials, kFailed};
    case Mode::Single:
      return {kTauS, kNInput, kPhi, kVTrue, kVMean, kVStd, kFdMean, kCrb, kEff, kSnr, kNDet};
  }
  return {};
}

std::string format_field(const CampaignRow& row, const Field& f) {
  if (auto d = std::get_if<double CampaignRow::*>(&f)) return fmt::format("{:.17e}", row.**d);
  return fmt::format("{}", row.*std::get<std::uint64_t CampaignRow::*>(f));
}

void parse_field(CampaignRow& row, const Field& f, const std::string& text) {
  std::size_t used = 0;
  if (auto d = std::get_if<double CampaignRow::*>(&f)) {
    row.**d = std::stod(text, &used);
  } else {
    row.*std::get<std::uint64_t CampaignRow::*>(f) = std::stoull(text, &used);
  }
  if (used != text.size()) throw std::invalid_argument(text);
}

}  // namespace

std::vector<std::string_view> campaign_columns(Mode mode) {
  std::vector<std::string_view> names;
  for (const auto& c : columns_for(mode)) names.push_back(c.name);
  return names;
}

void write_campaign_csv(std::ostream& out, const CampaignConfig& config, std::span<const CampaignRow> rows) {
  fmt::print(out, "# weakvel mode={} config_hash=0x{:016x} master_seed={}\n", mode_name(config.mode),
             fnv1a64(describe(config)), config.master_seed);
  const auto cols = columns_for(config.mode);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out << ',';
    out << cols[i].name;
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out << ',';
      out << format_field(row, cols[i].field);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing campaign CSV");
}

std::vector<CampaignRow> read_campaign_csv(std::istream& in, Mode mode) {
  const auto cols = columns_for(mode);
  std::vector<CampaignRow> rows;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != cols.size()) {
      throw ConfigError(fmt::format("line {}: expected {} columns, got {}", line_no, cols.size(), cells.size()),
                        line_no);
    }
    if (!header_seen) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cells[i] != cols[i].name) {
          throw ConfigError(fmt::format("line {}: column {} is '{}', expected '{}'", line_no, i + 1, cells[i],
                                        cols[i].name),
                            line_no);
        }
      }
      header_seen = true;
      continue;
    }
    CampaignRow row;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      try {
        parse_field(row, cols[i].field, cells[i]);
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("line {}: bad value '{}' in column {}", line_no, cells[i], cols[i].name),
                          line_no, std::string(cols[i].name));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

void write_estimates_csv(std::ostream& out, std::span<const VelocityEstimate> estimates) {
  out << "estimator,n_used,delta_t_s,v_mps,f_d_hz,std_v_mps\n";
  for (const auto& e : estimates) {
    fmt::print(out, "{},{},{:.17e},{:.17e},{:.17e},", estimator_name(e.estimator), e.n_used, e.delta_t_hat,
               e.v_hat, e.f_d_hat);
    if (e.std_error) {
      fmt::print(out, "{:.17e}\n", *e.std_error);
    } else {
      out << "nan\n";
    }
  }
  if (!out) throw IoError("failed writing estimates CSV");
}

}  // namespace weakvel
