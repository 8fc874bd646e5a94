#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "qmboot/analysis.hpp"
#include "qmboot/feasibility.hpp"
#include "qmboot/spectra.hpp"

namespace qmboot {

// 17 significant digits: enough to round-trip any double exactly.
std::string fmt17(double v);

std::string read_file(const std::string& path);

// Writes to <path>.tmp and renames, so readers never see a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

// Every tabular output starts with "# config=<hash> version=1"; the hash is
// the FNV-1a of the normalized run config, so a file identifies its run.
std::string spectrum_csv(const std::vector<SpectrumPoint>& pts, const std::string& config_hash);
std::string grid_csv(const FeasibilityGrid& grid, const std::string& config_hash);
std::string susceptibility_csv(const std::vector<SusceptibilityPoint>& pts,
                               const std::string& config_hash);
std::string oneloop_csv(const OneLoopCurve& curve, const std::string& config_hash);

std::string islands_json(const std::vector<Island>& islands);
std::string fit_json(const FitParams& fit, int n);

// Inverse of spectrum_csv, for the commands that post-process a sweep file.
GapCurve read_spectrum_csv(const std::string& text);

}  // namespace qmboot
