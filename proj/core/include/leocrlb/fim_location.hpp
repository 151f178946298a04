// Fisher information of the location parameters and its equivalent form after
// eliminating gains, time offsets and frequency offsets.
#pragma once

#include <Eigen/Core>

#include "leocrlb/scenario.hpp"
#include "leocrlb/transform.hpp"

namespace leocrlb {

enum class EfimRoute { Lemma, Schur, SquareRoot };

const char* to_string(EfimRoute r);

/// FIM of the interest parameters before nuisance elimination.
struct InterestFim {
    Eigen::MatrixXd matrix;
    int n_leo{0};
};

/// Information lost to the unknown time and frequency offsets.
struct LossMatrix {
    Eigen::MatrixXd matrix;
    int n_leo{0};
};

struct Efim {
    Eigen::MatrixXd matrix;
    int n_leo{0};
    EfimRoute route{EfimRoute::Schur};
    /// Upper-triangular R with R^T R = matrix. Empty unless the square-root
    /// route produced it.
    Eigen::MatrixXd factor;
    bool pseudo_inverse_used{false};
    double nuisance_condition{1.0};

    bool has_factor() const { return factor.size() > 0; }
    int dim() const { return static_cast<int>(matrix.rows()); }
};

InterestFim assemble_interest_fim(const Scenario& s, ParamCase param_case);
LossMatrix assemble_information_loss(const Scenario& s, ParamCase param_case);

/// Interest FIM minus loss, both from closed-form sums.
Efim efim_lemma_route(const Scenario& s, ParamCase param_case);

/// Schur complement of a full location FIM whose first n_interest coordinates
/// are the interest parameters. The nuisance block is split into its exactly
/// decoupled components; components with no coupling to the interest block
/// are skipped and the rest are inverted by a floored eigendecomposition.
Efim efim_schur_route(const Eigen::MatrixXd& j_kappa, int n_interest, int n_leo);
Efim efim_schur_route(const Eigen::MatrixXd& j_kappa, const LocationLayout& layout);

/// Sum over offset groups of centered weighted outer products, evaluated
/// through a square-root factor. Avoids the cancellation of the other routes.
Efim efim_square_root_route(const Scenario& s, ParamCase param_case);

/// Route used for verdicts and bounds.
inline Efim compute_efim(const Scenario& s, ParamCase param_case) {
    return efim_square_root_route(s, param_case);
}

}  // namespace leocrlb
