#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hardy/green.hpp"
#include "hardy/lattice.hpp"
#include "hardy/statistics.hpp"

namespace hardy {

/// An i.i.d. ensemble study. Realization i uses the field seed
/// derive_seed(master_seed, {i}).
struct EnsembleSpec {
    int dim = 3;
    int box_radius = 32;
    double delta = 0.2;
    Distribution dist = Distribution::rademacher;
    std::size_t realizations = 64;
    std::uint64_t master_seed = 1;
    std::vector<double> shells{6, 9, 12, 16};
    std::vector<double> moments{1, 2};
    double floor_constant = 0.1;       ///< c in P(w > c (1+|x|)^{-2})
    bool truncation_correction = true;  ///< multiply G by G_0(x) / G_0^{box}(x)
    SolverOptions solver{};
    unsigned threads = 1;

    void validate() const;
    /// Per shell r: r e_j for every axis j, then the diagonal round(r/sqrt d)(1,...,1).
    std::vector<Point> probe_sites() const;
    std::uint64_t realization_seed(std::size_t i) const;
};

struct MomentEstimate {
    double p = 0.0;
    double value = 0.0;
    Interval ci;
    double lower_value = 0.0;  ///< same moment of the sandwich lower bound
    double upper_value = 0.0;  ///< same moment of the sandwich upper bound
};

struct SiteStats {
    Point x;
    double shell = 0.0;
    double norm = 0.0;
    double correction = 1.0;
    std::vector<double> w;      ///< per realization
    std::vector<double> g;      ///< per realization (corrected)
    std::vector<double> lower;  ///< sandwich bounds, per realization
    std::vector<double> upper;
    double mean_g = 0.0;
    double var_g = 0.0;
    Interval g_ci;
    std::vector<MomentEstimate> moments;
    double prob_floor = 0.0;    ///< fraction with w > c (1+|x|)^{-2}
};

struct ExponentFit {
    std::string quantity;  ///< "w^p" or "G"
    double p = 0.0;
    double slope = 0.0;
    double stderr_ = 0.0;
    Interval ci;           ///< bootstrap over realizations
};

struct EnsembleStats {
    EnsembleSpec spec;
    std::vector<std::uint64_t> seeds;
    std::vector<SiteStats> sites;
    std::vector<ExponentFit> fits;
    std::vector<int> solver_iterations;
    double max_residual = 0.0;
    bool low_confidence = false;  ///< fewer than 16 realizations
};

/// Runs every realization (in parallel when spec.threads > 1) and merges in
/// realization order. A solver failure raises RealizationError.
EnsembleStats run_ensemble(const EnsembleSpec& spec);

struct PaleyZygmundRow {
    Point x;
    double shell = 0.0;
    double empirical = 0.0;  ///< fraction with w > mean(w)/2
    double floor = 0.0;      ///< mean(w)^2 / (4 mean(w^2))
    double binomial_stderr = 0.0;
    bool holds = false;      ///< empirical >= floor - 2 stderr
};

std::vector<PaleyZygmundRow> paley_zygmund_check(const EnsembleStats& stats);

struct EffectiveQ {
    double q = 0.0;
    double stderr_ = 0.0;
    Interval ci;  ///< bootstrap over realizations
    bool finite = true;
    std::vector<double> per_site;  ///< q_hat(x) = kappa |x|^{2-d} / (2 <G(x)>)
};

/// Weighted fit of a constant q to q_hat over probe sites; requires >= 3
/// shells with |x| >= 6.
EffectiveQ estimate_effective_q(const EnsembleStats& stats);

struct ConcentrationRow {
    double shell = 0.0;
    double norm = 0.0;
    double fluctuation = 0.0;  ///< shell mean of std(G(x)) (1+|x|)^{d-1}
};

struct ConcentrationReport {
    std::vector<ConcentrationRow> shells;
    double slope = 0.0;  ///< log fluctuation against log |x|
    double eps = 0.3;
    bool degenerate = false;  ///< all fluctuations zero
    bool holds = false;       ///< degenerate or slope <= eps
};

ConcentrationReport concentration_check(const EnsembleStats& stats, double eps = 0.3);

/// Relative disagreement of probe values between box_radius and a larger box
/// for the first `count` realizations.
struct TruncationSpotCheck {
    int radius = 0;
    int larger_radius = 0;
    std::size_t count = 0;
    double max_rel_raw = 0.0;        ///< uncorrected G
    double max_rel_corrected = 0.0;  ///< after the free-field correction
};

TruncationSpotCheck truncation_spot_check(const EnsembleSpec& spec, int larger_radius, std::size_t count = 4);

/// Small-box d >= 5 probe: min over interior sites of the sample mean of w_G.
struct GlobalLowerProbe {
    int dim = 0;
    int radius = 0;
    std::size_t realizations = 0;
    double min_mean_w = 0.0;
    Point argmin;
};

GlobalLowerProbe global_lower_probe(int dim, int radius, double delta, Distribution dist,
                                    std::size_t realizations, std::uint64_t master_seed);

}  // namespace hardy
