#include "leocrlb/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "leocrlb/errors.hpp"
#include "leocrlb/linalg.hpp"
#include "leocrlb/signal.hpp"

namespace leocrlb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

IdentifiabilityVerdict make_verdict(double lo, double hi, double rel_tol) {
    IdentifiabilityVerdict v;
    v.min_eigenvalue = lo;
    v.max_eigenvalue = hi;
    v.rel_tol = rel_tol;
    v.condition_number = lo > 0.0 ? hi / lo : kInf;
    v.is_pd = hi > 0.0 && lo > rel_tol * hi;
    return v;
}

// Column scaling that gives R^T R a unit diagonal.
Eigen::VectorXd factor_scaling(const Eigen::MatrixXd& r) {
    Eigen::VectorXd d(r.cols());
    for (Eigen::Index i = 0; i < r.cols(); ++i) {
        const double n = r.col(i).norm();
        d(i) = n > 0.0 ? 1.0 / n : 1.0;
    }
    return d;
}

// Diagonal of the inverse.
Eigen::VectorXd inverse_diagonal(const Efim& e) {
    const Eigen::Index n = e.matrix.rows();
    if (e.has_factor()) {
        const Eigen::VectorXd d = factor_scaling(e.factor);
        const Eigen::MatrixXd rs = e.factor * d.asDiagonal();
        const Eigen::MatrixXd x =
            rs.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
        Eigen::VectorXd out(n);
        for (Eigen::Index i = 0; i < n; ++i) out(i) = d(i) * d(i) * x.row(i).squaredNorm();
        return out;
    }
    const Eigen::VectorXd d = jacobi_scaling(e.matrix);
    const Eigen::MatrixXd s = d.asDiagonal() * e.matrix * d.asDiagonal();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (s + s.transpose()));
    const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
    return d.cwiseProduct(d).cwiseProduct(inv.diagonal());
}

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(1, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int i = next++; i < n; i = next++) fn(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                    next = n;
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

IdentifiabilityVerdict is_identifiable(const Efim& efim, double rel_tol) {
    if (!efim.has_factor()) return is_identifiable(efim.matrix, rel_tol);
    if (efim.factor.cols() == 0) return make_verdict(0.0, 0.0, rel_tol);
    const Eigen::VectorXd d = factor_scaling(efim.factor);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(efim.factor * d.asDiagonal());
    const Eigen::VectorXd& sv = svd.singularValues();
    const double hi = sv(0) * sv(0);
    const double lo = sv(sv.size() - 1) * sv(sv.size() - 1);
    return make_verdict(lo, hi, rel_tol);
}

IdentifiabilityVerdict is_identifiable(const Eigen::MatrixXd& efim, double rel_tol) {
    if (efim.rows() == 0) return make_verdict(0.0, 0.0, rel_tol);
    const Eigen::VectorXd d = jacobi_scaling(efim);
    const EigenRange r = eigen_range(d.asDiagonal() * efim * d.asDiagonal());
    return make_verdict(r.min, r.max, rel_tol);
}

IdentifiabilityError::IdentifiabilityError(IdentifiabilityVerdict v)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "EFIM is not positive definite (scaled eigenvalues min " << v.min_eigenvalue << ", max "
             << v.max_eigenvalue << ", threshold " << v.rel_tol << " relative)";
          return os.str();
      }()),
      verdict_(std::move(v)) {}

std::vector<double> block_root_trace(const Eigen::MatrixXd& efim, std::span<const BlockRange> blocks,
                                     double rel_tol) {
    const IdentifiabilityVerdict v = is_identifiable(efim, rel_tol);
    if (!v.is_pd) throw IdentifiabilityError(v);
    Efim e;
    e.matrix = efim;
    const Eigen::VectorXd diag = inverse_diagonal(e);
    std::vector<double> out;
    for (const auto& b : blocks) out.push_back(std::sqrt(diag.segment(b.begin, b.size).sum()));
    return out;
}

CrlbReport crlb(const Efim& efim, double rel_tol) {
    const IdentifiabilityVerdict v = is_identifiable(efim, rel_tol);
    if (!v.is_pd) throw IdentifiabilityError(v);
    const Eigen::VectorXd diag = inverse_diagonal(efim);
    if (!diag.allFinite() || (diag.array() < 0.0).any()) throw NumericalError("EFIM inverse is not finite");
    const auto root_trace = [&](BlockRange b) { return std::sqrt(diag.segment(b.begin, b.size).sum()); };
    CrlbReport r;
    r.position = root_trace(LocationLayout::position());
    r.velocity = root_trace(LocationLayout::velocity());
    r.orientation = root_trace(LocationLayout::orientation());
    LocationLayout layout;
    layout.n_leo = efim.n_leo;
    for (int b = 0; b < efim.n_leo; ++b) {
        r.leo_position_offset.push_back(root_trace(layout.leo_position_offset(b)));
        r.leo_velocity_offset.push_back(root_trace(layout.leo_velocity_offset(b)));
    }
    return r;
}

CrlbReport infinite_crlb(int n_leo) {
    CrlbReport r{kInf, kInf, kInf, {}, {}};
    r.leo_position_offset.assign(static_cast<std::size_t>(n_leo), kInf);
    r.leo_velocity_offset.assign(static_cast<std::size_t>(n_leo), kInf);
    return r;
}

std::vector<CellConfig> SweepGrid::cells() const {
    std::vector<CellConfig> out;
    for (int b : n_leo)
        for (int q : n_bs)
            for (int k : n_slots)
                for (int u : n_ant) out.push_back({b, q, k, u});
    return out;
}

TrialResult evaluate_trial(const ScenarioTemplate& tpl, const SweepOptions& opts, int trial) {
    const Scenario s = generate_scenario(tpl, trial_seed(opts.seed, trial));
    const Efim e = compute_efim(s, opts.param_case);
    TrialResult r;
    r.verdict = is_identifiable(e, opts.rel_tol);
    r.bound = r.verdict.is_pd ? crlb(e, opts.rel_tol) : infinite_crlb(tpl.n_leo);
    return r;
}

std::vector<IdentifiabilityCell> identifiability_sweep(const SweepGrid& grid, const ScenarioTemplate& tpl,
                                                       const SweepOptions& opts) {
    const std::vector<CellConfig> cells = grid.cells();
    const int nt = std::max(1, opts.n_trials);
    const int n = static_cast<int>(cells.size()) * nt;
    std::vector<IdentifiabilityVerdict> verdicts(static_cast<std::size_t>(n));
    parallel_for(n, opts.threads, [&](int i) {
        const CellConfig& c = cells[static_cast<std::size_t>(i / nt)];
        ScenarioTemplate t = tpl;
        t.n_leo = c.n_leo;
        t.n_bs = c.n_bs;
        t.n_slots = c.n_slots;
        t.n_ant = c.n_ant;
        const Scenario s = generate_scenario(t, trial_seed(opts.seed, i % nt));
        verdicts[static_cast<std::size_t>(i)] = is_identifiable(compute_efim(s, opts.param_case), opts.rel_tol);
    });

    std::vector<IdentifiabilityCell> out;
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        IdentifiabilityCell cell;
        cell.config = cells[ci];
        cell.n_trials = nt;
        for (int t = 0; t < nt; ++t) {
            const auto& v = verdicts[ci * static_cast<std::size_t>(nt) + static_cast<std::size_t>(t)];
            if (v.is_pd) ++cell.pd_trials;
            if (t == 0 || v.eigen_ratio() < cell.worst.eigen_ratio()) cell.worst = v;
        }
        cell.is_pd = cell.pd_trials == nt;
        out.push_back(cell);
    }
    return out;
}

const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::NAnt: return "n_ant";
        case SweepAxis::CarrierFreq: return "carrier_freq_hz";
        case SweepAxis::SlotSpacing: return "slot_spacing_s";
        case SweepAxis::SnrDb: return "snr_db";
    }
    return "?";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    for (SweepAxis a : {SweepAxis::NAnt, SweepAxis::CarrierFreq, SweepAxis::SlotSpacing, SweepAxis::SnrDb}) {
        if (s == to_string(a)) return a;
    }
    throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

ScenarioTemplate apply_axis(ScenarioTemplate tpl, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::NAnt:
            if (value < 1.0 || value != std::floor(value)) throw std::invalid_argument("n_ant values must be integers >= 1");
            tpl.n_ant = static_cast<int>(value);
            break;
        case SweepAxis::CarrierFreq:
            tpl.carrier_freq = value;
            break;
        case SweepAxis::SlotSpacing:
            tpl.slot_spacing = value;
            break;
        case SweepAxis::SnrDb:
            tpl.snr_leo_rx = tpl.snr_bs_rx = tpl.snr_leo_bs = snr_from_db(value);
            break;
    }
    return tpl;
}

std::vector<SweepRecord> parameter_sweep(SweepAxis axis, std::span<const double> values,
                                         const ScenarioTemplate& tpl, const SweepOptions& opts) {
    const int nt = std::max(1, opts.n_trials);
    const int nv = static_cast<int>(values.size());
    std::vector<ScenarioTemplate> templates;
    for (double v : values) templates.push_back(apply_axis(tpl, axis, v));

    std::vector<TrialResult> results(static_cast<std::size_t>(nv * nt));
    parallel_for(nv * nt, opts.threads, [&](int i) {
        results[static_cast<std::size_t>(i)] = evaluate_trial(templates[static_cast<std::size_t>(i / nt)], opts, i % nt);
    });

    std::vector<SweepRecord> out;
    for (int vi = 0; vi < nv; ++vi) {
        SweepRecord rec;
        rec.axis = axis;
        rec.value = values[static_cast<std::size_t>(vi)];
        rec.tpl = templates[static_cast<std::size_t>(vi)];
        rec.n_trials = nt;
        CrlbReport sum = infinite_crlb(tpl.n_leo);
        sum.position = sum.velocity = sum.orientation = 0.0;
        std::fill(sum.leo_position_offset.begin(), sum.leo_position_offset.end(), 0.0);
        std::fill(sum.leo_velocity_offset.begin(), sum.leo_velocity_offset.end(), 0.0);
        for (int t = 0; t < nt; ++t) {
            const TrialResult& r = results[static_cast<std::size_t>(vi * nt + t)];
            if (r.verdict.is_pd) ++rec.pd_trials;
            if (t == 0 || r.verdict.eigen_ratio() < rec.worst.eigen_ratio()) rec.worst = r.verdict;
            sum.position += r.bound.position / nt;
            sum.velocity += r.bound.velocity / nt;
            sum.orientation += r.bound.orientation / nt;
            for (std::size_t b = 0; b < sum.leo_position_offset.size(); ++b) {
                sum.leo_position_offset[b] += r.bound.leo_position_offset[b] / nt;
                sum.leo_velocity_offset[b] += r.bound.leo_velocity_offset[b] / nt;
            }
        }
        rec.mean = rec.pd_trials == nt ? sum : infinite_crlb(tpl.n_leo);
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace leocrlb
