#pragma once

#include <functional>
#include <string>

#include "ips/model_zoo.hpp"

namespace ips {

/// A patch functional H. Translation covariance is supplied by the
/// recentering of the patch, so H sees only offsets.
struct LocalFunctional {
    std::string name;
    std::function<double(const Patch &)> eval;
};

/// A point relative to the evaluation point (the evaluation point sits at
/// the origin and is excluded).
struct RelPoint {
    std::array<double, kMaxDim> offset{0.0, 0.0, 0.0};
    double mark = 0.0;
};

/// A per-point functional phi(mark, neighbors within the R-ball).
struct PointFunctional {
    std::string name;
    double radius = 1.0;
    std::function<double(double mark, const std::vector<RelPoint> &)> eval;
};

/// The stationary additive set function S_H^A: sums H over the recentered
/// patches of the window's sites.
double eval_additive(const LocalFunctional &H, const Window &A, const Configuration &config,
                     const NeighborhoodTemplate &N);

/// Sums phi over the points of the cubes of A, reading neighbors from the
/// configuration's patches (halo must be materialized).
double eval_point_functional(const PointFunctional &phi, const Window &A,
                             const Configuration &config, const NeighborhoodTemplate &N);

/// Brute-force evaluation of S_phi over a global point set: points inside
/// the cubes of `region` contribute phi against all neighbors in X.
double eval_point_functional_global(const PointFunctional &phi, const SiteSet &region,
                                    const std::vector<GlobalPoint> &X, int dim);

/// The embedding of phi as a patch functional H_phi (cube-summed), so the
/// lattice limit theorems apply verbatim to continuum functionals.
LocalFunctional to_local_functional(const PointFunctional &phi, int dim);

struct EmbeddingCheck {
    double continuum_value = 0.0;
    double lattice_value = 0.0;
    bool equal = false;
};

/// Evaluates S_phi on the global set and S_{H_phi} on its cube embedding and
/// compares them (relative tolerance 1e-12).
EmbeddingCheck embedding_identity_check(const PointFunctional &phi, const Window &A,
                                        const std::vector<GlobalPoint> &X,
                                        const NeighborhoodTemplate &N, int dim);

// ---- the phi library ----

PointFunctional phi1();
/// Half the number of neighbors within r1 (pair count with boundary halves).
PointFunctional phi2(double r1, double radius);
/// Indicator of mark (height) at most r3.
PointFunctional phi3(double r3, double radius);
/// Half the number of touching neighbors (contact at distance exactly 1 in
/// d+1 dimensions, tolerance 1e-9).
PointFunctional phi4(double radius, int dim);
/// Height of the ball if it is exposed to incoming vertical arrivals, else 0.
/// d = 1 only.
PointFunctional phi5(double radius, int dim);

/// Exposure test behind phi5 (d = 1): true when some drop position makes
/// first contact with the ball of the given mark at the origin.
bool exposed_1d(double mark, const std::vector<RelPoint> &others);

/// H(patch) = (center height)^k for lattice models.
LocalFunctional height_moment(int k);
/// H == 1.
LocalFunctional one_functional();

}  // namespace ips
