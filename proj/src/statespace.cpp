#include "gfpc/statespace.hpp"

#include "gfpc/errors.hpp"

#include <Eigen/SVD>

namespace gfpc {

PlantMatrices build_state_space(const SystemParams& params, const LinearizedGains& gains) {
    params.validate();
    PlantMatrices plant;
    plant.a(0, 2) = params.d_p * gains.k_pdelta;
    plant.a(1, 2) = params.d_q * gains.k_qdelta;
    plant.b << 1.0, params.d_p * gains.k_pv,
               0.0, 1.0 + params.d_q * gains.k_qv,
               params.omega_b, 0.0;
    return plant;
}

ControllabilityReport controllability(const PlantMatrices& plant, double rank_tol) {
    if (!(rank_tol > 0.0 && rank_tol < 1.0)) {
        throw ValidationError("rank_tol: must be in (0, 1)");
    }
    ControllabilityReport report;
    report.p_matrix.block<3, 2>(0, 0) = plant.b;
    report.p_matrix.block<3, 2>(0, 2) = plant.a * plant.b;
    report.p_matrix.block<3, 2>(0, 4) = plant.a * plant.a * plant.b;

    Eigen::JacobiSVD<Mat36> svd(report.p_matrix);
    report.singular_values = svd.singularValues();
    const double sigma_max = report.singular_values(0);
    report.rank = 0;
    for (int i = 0; i < 3; ++i) {
        if (report.singular_values(i) >= rank_tol * sigma_max && sigma_max > 0.0) {
            ++report.rank;
        }
    }
    report.controllable = (report.rank == 3);
    return report;
}

}  // namespace gfpc
