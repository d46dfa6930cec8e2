#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hardy/ensemble.hpp"
#include "hardy/fourier.hpp"
#include "hardy/green.hpp"
#include "hardy/hardy_weight.hpp"
#include "hardy/spectrum.hpp"

namespace hardy {

inline constexpr const char* kSchema = "hardy-report/1";
inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal form, used for every number written out.
std::string format_number(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

// CSV tables. Every writer emits a header line first.

/// x_1..x_d, G, shell (shell = nearest integer to |x|).
void write_green_csv(std::ostream& os, const GreenField& green);
/// radius, count, ratio_min, ratio_max
void write_aronson_csv(std::ostream& os, const AronsonReport& report);
/// x_1..x_d, w, w_lower, w_upper (interior sites only).
void write_weight_csv(std::ostream& os, const HardyWeightField& w);

struct RegionRow {
    std::string kind;
    double R = 0.0;
    double ell = 0.0;
    std::size_t count = 0;
    double normalized_sum = 0.0;  ///< R^{-d} sum w
    double scaled = 0.0;          ///< normalized_sum R^2 (annulus) or energy R^{2d-2} (sector)
};

void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows);

/// site, shell, p, moment, CI_lo, CI_hi rows, then per-site G rows (p = "G"),
/// then exponent fits (site = "fit").
void write_ensemble_csv(std::ostream& os, const EnsembleStats& stats);

/// T table: x_1..x_d, T.
void write_kernel_csv(std::ostream& os, const TransitionKernel& T);

// JSON documents.

std::string certificate_json(const HardyCertificate& cert, int radius, double weight_scale);
std::string model_json(const AsymptoticModel& model);
/// {"dim": d, "K0_hat": [[...], ...]}; unknown keys are errors.
AsymptoticModel parse_model_json(const std::string& text);
/// {"dim": d, "kernel": [{"x": [...], "j": 0, "k": 0, "value": v}, ...]}.
std::string kernel_json(int dim, const std::vector<KernelEntry>& kernel);
std::vector<KernelEntry> parse_kernel_json(const std::string& text, int* dim);

/// Ensemble spec as JSON (keys as in EnsembleSpec; dist by name). Unknown
/// keys are errors; missing keys keep their defaults.
std::string ensemble_spec_json(const EnsembleSpec& spec);
EnsembleSpec parse_ensemble_spec(const std::string& text);

struct StageRecord {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = true;
};

/// Emitted for every CLI run. `config_json` is the full resolved config.
struct RunManifest {
    std::string subcommand;
    std::string config_json;
    std::vector<std::uint64_t> seeds;
    double wall_seconds = 0.0;
    std::vector<StageRecord> stages;
    std::vector<std::string> outputs;
    std::vector<std::string> failures;

    std::uint64_t config_hash() const { return fnv1a(config_json); }
    std::string to_json() const;
};

}  // namespace hardy
