#pragma once
// Machine-readable reports: a JSON document with version stamp, the resolved
// configuration, command results with per-field source tags, diagnostics, and
// caveat notes.  Numbers are rounded to 15 significant digits before storage
// so identical runs produce byte-identical documents (minus the timestamp)
// across implementations.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <string>
#include <vector>

#include "hardygap/classifier.hpp"
#include "hardygap/config.hpp"
#include "hardygap/version.hpp"

namespace hardygap {

/// Numeric provenance tags used on every reported value.
enum class Source { Formula, Computed, Extrapolated };

inline std::string to_string(Source s) {
  switch (s) {
    case Source::Formula: return "formula";
    case Source::Computed: return "computed";
    case Source::Extrapolated: return "extrapolated";
  }
  return "?";
}

/// 15-significant-digit rendering (fixed across platforms for diffing).
inline std::string format_sig(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// Rounds a double through its 15-significant-digit decimal form so the JSON
/// document serializes identically everywhere.
inline double sig15(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_sig(v).c_str(), nullptr);
}

/// A value with its provenance tag.
inline ordered_json tagged(double value, Source src) {
  return ordered_json{{"value", sig15(value)}, {"source", to_string(src)}};
}

inline std::string format_domain(const DomainSpec& spec) {
  switch (spec.kind) {
    case DomainKind::Interval:
      return spec.half_line ? "half-line(" + format_sig(spec.r1) + ")"
                            : "interval(0," + format_sig(spec.r1) + ")";
    case DomainKind::Ball: return "ball(" + format_sig(spec.r1) + ")";
    case DomainKind::Annulus:
      return "annulus(" + format_sig(spec.r0) + "," + format_sig(spec.r1) + ")";
    case DomainKind::ExteriorBall:
      return "exterior-ball(" + format_sig(spec.r0) + ")";
  }
  return "?";
}

/// Upper-bound caveat attached to every solver-backed report.
inline constexpr const char* kRadialCaveat =
    "numeric Hardy bounds minimize over radial profiles: exact on these "
    "radially symmetric domains up to discretization, and an upper bound for "
    "the constant in general";

/// Named artifact emitted next to a report (plots).
struct Artifact {
  std::string filename;
  std::string media_type;
  std::string content;
};

struct ReportDocument {
  ordered_json body;
  std::vector<Artifact> artifacts;
};

/// Common envelope: tool/version stamps, command name, resolved config, and
/// a timestamp (the one non-deterministic field; set include_timestamp=false
/// for byte-stable output).
inline ReportDocument report_skeleton(const std::string& command,
                                      const RunConfig& cfg,
                                      bool include_timestamp = true) {
  ReportDocument doc;
  doc.body["tool"] = "hardygap";
  doc.body["version"] = kVersion;
  doc.body["schema_version"] = kSchemaVersion;
  doc.body["command"] = command;
  if (include_timestamp) {
    char buf[32] = {0};
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    doc.body["generated_at"] = buf;
  }
  doc.body["config"] = emit_config(cfg);
  doc.body["notes"] = ordered_json::array();
  return doc;
}

/// Serializes a gap verdict into the report body.
inline ordered_json gap_report_json(const GapReport& rep) {
  ordered_json j;
  j["regime"] = to_string(rep.regime);
  j["domain_class"] = rep.bounded ? "bounded" : "exterior";
  ordered_json h;
  h["kind"] = to_string(rep.h.kind);
  if (std::isfinite(rep.h.value))
    h["value"] = sig15(rep.h.value);
  j["H"] = h;
  j["lambda_inf"] =
      tagged(rep.lambda_inf, Source::Formula);
  j["gap"] = to_string(rep.gap);
  if (std::isfinite(rep.gap_estimate)) j["gap_estimate"] = sig15(rep.gap_estimate);
  j["minimizer_exists"] = to_string(rep.minimizer_exists);
  j["criticality"] = to_string(rep.criticality);
  if (!rep.criticality_weight.empty())
    j["criticality_weight"] = rep.criticality_weight;
  if (rep.nu_boundary) j["nu_boundary"] = sig15(*rep.nu_boundary);
  if (rep.nu_infinity) j["nu_infinity"] = sig15(*rep.nu_infinity);
  j["basis"] = rep.basis;
  j["open_notes"] = rep.open_notes;
  return j;
}

// ---------------------------------------------------------------------------
// Sweep CSV (fixed column order).
// ---------------------------------------------------------------------------

struct SweepRow {
  Params params;
  DomainSpec domain;
  double h_bound = 0.0;
  double lambda_inf = 0.0;
  double gap = 0.0;
  std::string regime;
  std::optional<double> nu;
  std::optional<double> nu_tilde;
  int iterations = 0;
  double error_estimate = 0.0;
};

inline std::string sweep_csv_header() {
  return "alpha,p,N,domain,H_bound,lambda_inf,gap,nu,nu_tilde,iterations,"
         "error_estimate";
}

inline std::string sweep_csv_line(const SweepRow& row) {
  std::string s;
  s += format_sig(row.params.alpha);
  s += ',';
  s += format_sig(row.params.p);
  s += ',';
  s += std::to_string(row.params.dim);
  s += ',';
  s += format_domain(row.domain);
  s += ',';
  s += format_sig(row.h_bound);
  s += ',';
  s += format_sig(row.lambda_inf);
  s += ',';
  s += format_sig(row.gap);
  s += ',';
  if (row.nu) s += format_sig(*row.nu);
  s += ',';
  if (row.nu_tilde) s += format_sig(*row.nu_tilde);
  s += ',';
  s += std::to_string(row.iterations);
  s += ',';
  s += format_sig(row.error_estimate);
  return s;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header();
  out += '\n';
  for (const auto& r : rows) {
    out += sweep_csv_line(r);
    out += '\n';
  }
  return out;
}

}  // namespace hardygap
