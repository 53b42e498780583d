#pragma once

#include <string>

#include "lft/pipeline.h"

namespace lft {

enum class Format { csv, json };

// Writes every table the bundle holds into dir (created if missing); drive tables keep every `every`-th sample.
void export_bundle(const ResultBundle& b, const std::string& dir, Format fmt, int every = 1);

void write_kernel_csv(const TransportKernel& k, const std::string& path, const std::string& hash);
TransportKernel read_kernel_csv(const std::string& path);
void write_measure_csv(const SpectralMeasure& mu, const std::string& path, const std::string& hash);
SpectralMeasure read_measure_csv(const std::string& path);
void write_measure_json(const SpectralMeasure& mu, const std::string& path, const std::string& hash);
SpectralMeasure read_measure_json(const std::string& path);
void write_verify_json(const std::vector<VerifyItem>& v, const std::string& path, const std::string& hash);

}  // namespace lft
