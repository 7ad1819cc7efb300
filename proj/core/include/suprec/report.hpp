#pragma once

#include <cstdint>
#include <string>

#include "suprec/experiments.hpp"

namespace suprec {

/// Shortest round-trip decimal form, '.' separator, locale-free.
std::string format_double(double x);

inline constexpr const char* kSweepCsvHeader =
    "m,n,rate_bits,c_w_bits,pe,ci_lo,ci_hi,trials,refusals,decoder,seed";

/// Deterministic CSV rendering ('\n' line endings). Identical inputs yield
/// byte-identical output on every platform.
std::string to_csv(const SweepResult& result);

/// Parses a sweep specification from JSON. Accepts either explicit
/// "points": [{"m":..,"n":..}, ...] or "m_values": [...] with "rate".
SweepSpec parse_sweep_spec(const std::string& json_text);

/// Fully resolved spec (explicit points, decoder params, seed) as JSON;
/// embedding this in a manifest is sufficient to reproduce the run.
std::string sweep_spec_json(const SweepSpec& spec);

/// Run manifest: command, version, seed and its provenance, timestamp, and
/// the resolved spec.
std::string make_manifest(const std::string& command, const SweepSpec& spec,
                          const std::string& seed_source, const std::string& timestamp);

/// Extracts the spec (with its seed) back out of a manifest produced by
/// make_manifest.
SweepSpec spec_from_manifest(const std::string& manifest_json);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace suprec
