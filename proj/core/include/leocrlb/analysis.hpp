// Identifiability verdicts, Cramer-Rao bounds and seeded sweeps.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "leocrlb/fim_location.hpp"
#include "leocrlb/scenario.hpp"

namespace leocrlb {

/// Relative eigenvalue threshold applied after unit-diagonal scaling.
inline constexpr double kDefaultPdRelTol = 1e-12;

struct IdentifiabilityVerdict {
    bool is_pd{false};
    double min_eigenvalue{0.0};  // of the unit-diagonal scaled EFIM
    double max_eigenvalue{0.0};
    double condition_number{0.0};
    double rel_tol{kDefaultPdRelTol};
    std::string scaling{"jacobi"};

    double eigen_ratio() const { return max_eigenvalue > 0.0 ? min_eigenvalue / max_eigenvalue : 0.0; }
};

IdentifiabilityVerdict is_identifiable(const Efim& efim, double rel_tol = kDefaultPdRelTol);
IdentifiabilityVerdict is_identifiable(const Eigen::MatrixXd& efim, double rel_tol = kDefaultPdRelTol);

class IdentifiabilityError : public std::runtime_error {
public:
    explicit IdentifiabilityError(IdentifiabilityVerdict v);
    const IdentifiabilityVerdict& verdict() const { return verdict_; }

private:
    IdentifiabilityVerdict verdict_;
};

/// Root-trace bounds per block of the EFIM inverse.
struct CrlbReport {
    double position{0.0};     // m
    double velocity{0.0};     // m/s
    double orientation{0.0};  // rad
    std::vector<double> leo_position_offset;  // m, per LEO
    std::vector<double> leo_velocity_offset;  // m/s, per LEO
};

/// sqrt(trace) of each block of the inverse. Throws IdentifiabilityError when
/// the matrix fails the verdict.
std::vector<double> block_root_trace(const Eigen::MatrixXd& efim, std::span<const BlockRange> blocks,
                                     double rel_tol = kDefaultPdRelTol);

CrlbReport crlb(const Efim& efim, double rel_tol = kDefaultPdRelTol);

CrlbReport infinite_crlb(int n_leo);

// ---------------------------------------------------------------------------
// Sweeps

struct CellConfig {
    int n_leo{1};
    int n_bs{3};
    int n_slots{3};
    int n_ant{4};
};

struct SweepGrid {
    std::vector<int> n_leo;
    std::vector<int> n_bs;
    std::vector<int> n_slots;
    std::vector<int> n_ant;

    /// Cells in row-major order over (n_leo, n_bs, n_slots, n_ant).
    std::vector<CellConfig> cells() const;
};

struct SweepOptions {
    std::uint64_t seed{1};
    int n_trials{5};
    ParamCase param_case{ParamCase::WithBsObservations};
    double rel_tol{kDefaultPdRelTol};
    int threads{0};  // 0 = hardware concurrency
};

struct IdentifiabilityCell {
    CellConfig config;
    int n_trials{0};
    int pd_trials{0};
    bool is_pd{false};              // PD in every trial
    IdentifiabilityVerdict worst;   // smallest eigenvalue ratio over trials
};

std::vector<IdentifiabilityCell> identifiability_sweep(const SweepGrid& grid, const ScenarioTemplate& tpl,
                                                       const SweepOptions& opts);

enum class SweepAxis { NAnt, CarrierFreq, SlotSpacing, SnrDb };

const char* to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

/// Template with one axis set to `value`.
ScenarioTemplate apply_axis(ScenarioTemplate tpl, SweepAxis axis, double value);

struct SweepRecord {
    SweepAxis axis{SweepAxis::NAnt};
    double value{0.0};
    ScenarioTemplate tpl;
    int n_trials{0};
    int pd_trials{0};
    IdentifiabilityVerdict worst;
    CrlbReport mean;  // infinite when any trial is not identifiable
};

std::vector<SweepRecord> parameter_sweep(SweepAxis axis, std::span<const double> values,
                                         const ScenarioTemplate& tpl, const SweepOptions& opts);

/// One trial of the template: verdict and bound (infinite when not PD).
struct TrialResult {
    IdentifiabilityVerdict verdict;
    CrlbReport bound;
};

TrialResult evaluate_trial(const ScenarioTemplate& tpl, const SweepOptions& opts, int trial);

}  // namespace leocrlb
