#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nulllab/estimator.hpp"
#include "nulllab/harness.hpp"
#include "nulllab/mixture.hpp"

namespace nulllab::io {

// Lossless decimal formatting (17 significant digits).
std::string fmt17(double v);

// --- Sample files -------------------------------------------------------------
//
// Newline-delimited decimal reals. Blank lines and '#' comment lines are
// skipped. With a column selector the input is parsed as CSV whose first
// data line is a header row; the selector is either a header name or a
// 0-based column index. Parse errors name the offending line.

struct SampleReadOptions {
  std::optional<std::string> csv_column;
};

std::vector<double> parse_samples(std::istream& in, const SampleReadOptions& opt = {});
std::vector<double> read_sample_file(const std::string& path, const SampleReadOptions& opt = {});

// '#' header lines carry the generating model, block length, seed and null
// count; values follow one per line.
void write_sample_file(std::ostream& out, const mix::SampleSet& samples,
                       const mix::MixtureSpec& spec);

// --- Structured-text configuration ---------------------------------------------
//
// JSON documents, schema-validated fail-closed: unknown keys are rejected.

std::string model_to_json(const mix::MixtureSpec& spec);

// Accepts either a bare model object or a full run-config document with a
// "model" section.
mix::MixtureSpec model_from_json_text(const std::string& text);

struct OutputSpec {
  std::string format = "csv";  // csv | json
  std::string path;
};

struct RunConfig {
  std::optional<mix::MixtureSpec> model;
  std::optional<mc::Plan> plan;  // plan.spec populated from model
  est::Config estimator;
  std::optional<OutputSpec> output;
};

RunConfig parse_config_text(const std::string& text);

// --- Reports and results ---------------------------------------------------------

std::string report_to_json(const est::Report& report);
std::string report_to_csv(const est::Report& report);

// One row per (cell, pipeline, estimand):
// n,gamma,L,pipeline,estimator,mse,bias,sd,reps,eps
std::string result_to_csv(const mc::Result& result);
std::string result_to_json(const mc::Result& result);

}  // namespace nulllab::io
