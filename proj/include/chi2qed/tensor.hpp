#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "chi2qed/errors.hpp"

namespace chi2qed {

/// Rank-3 second-order susceptibility tensor chi_ijk, i,j,k in {x,y,z},
/// entries in m/V.
class Chi2Tensor {
public:
    Chi2Tensor() { entries_.fill(0.0); }

    double& operator()(int i, int j, int k) { return entries_[index(i, j, k)]; }
    double operator()(int i, int j, int k) const { return entries_[index(i, j, k)]; }

    /// Zincblende (GaAs-type, point group 4bar-3m) tensor: the six entries
    /// with all indices distinct equal chi_mag, everything else is zero.
    static Chi2Tensor zincblende(double chi_mag)
    {
        Chi2Tensor t;
        t(0, 1, 2) = chi_mag;
        t(0, 2, 1) = chi_mag;
        t(1, 0, 2) = chi_mag;
        t(1, 2, 0) = chi_mag;
        t(2, 0, 1) = chi_mag;
        t(2, 1, 0) = chi_mag;
        return t;
    }

private:
    static int index(int i, int j, int k) { return (i * 3 + j) * 3 + k; }
    std::array<double, 27> entries_;
};

namespace detail {

inline bool is_unit(const Eigen::Vector3d& v, double tol = 1e-9)
{
    return std::abs(v.norm() - 1.0) <= tol;
}

} // namespace detail

/// sum_ijk chi_ijk e1_i e2_j e3_k for unit polarization vectors.
/// For the zincblende tensor this peaks at 2/sqrt(3) ~ 1.1547 chi when all
/// three vectors point along a <111> direction.
inline double contract_polarizations(const Chi2Tensor& tensor, const Eigen::Vector3d& e1,
                                     const Eigen::Vector3d& e2, const Eigen::Vector3d& e3)
{
    detail::require(detail::is_unit(e1) && detail::is_unit(e2) && detail::is_unit(e3),
                    "contract_polarizations: polarization vectors must have unit norm");
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                sum += tensor(i, j, k) * e1[i] * e2[j] * e3[k];
    return sum;
}

/// chi'_ijk = R_il R_jm R_kn chi_lmn; R must be a proper rotation.
inline Chi2Tensor rotate_tensor(const Chi2Tensor& tensor, const Eigen::Matrix3d& rotation)
{
    const double ortho_err = (rotation.transpose() * rotation -
                              Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    detail::require(ortho_err <= 1e-9, "rotate_tensor: matrix is not orthogonal");
    detail::require(std::abs(rotation.determinant() - 1.0) <= 1e-9,
                    "rotate_tensor: matrix is not a proper rotation (det != +1)");

    Chi2Tensor out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double sum = 0.0;
                for (int l = 0; l < 3; ++l)
                    for (int m = 0; m < 3; ++m)
                        for (int n = 0; n < 3; ++n)
                            sum += rotation(i, l) * rotation(j, m) * rotation(k, n) *
                                   tensor(l, m, n);
                out(i, j, k) = sum;
            }
    return out;
}

/// Rotation about an arbitrary axis (Rodrigues form).
inline Eigen::Matrix3d rotation_about(const Eigen::Vector3d& axis, double angle)
{
    detail::require(axis.norm() > 0.0, "rotation_about: axis must be non-zero");
    return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

/// Minimal rotation taking `from` onto `to` (both normalized internally).
inline Eigen::Matrix3d rotation_aligning(const Eigen::Vector3d& from, const Eigen::Vector3d& to)
{
    detail::require(from.norm() > 0.0 && to.norm() > 0.0,
                    "rotation_aligning: vectors must be non-zero");
    return Eigen::Quaterniond::FromTwoVectors(from, to).toRotationMatrix();
}

} // namespace chi2qed
