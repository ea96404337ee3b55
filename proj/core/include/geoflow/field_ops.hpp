#pragma once

#include "geoflow/grid.hpp"

// Pointwise algebra on fields. Shapes must agree; mismatches throw
// std::invalid_argument.
namespace geoflow {

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

/// a + s * b
Field axpy(const Field& a, double s, const Field& b);

/// Scalar field times a field of any width.
Field multiply(const Field& scalar, const Field& f);

/// Pointwise a (x) b, entry (i, j) = a_i b_j at index i * lb + j.
Field tensor(const Field& a, const Field& b);

/// From a gradient stack (layout i*l + a, see spectral::gradient) build the
/// n x n field with entry (i, j) = d_i d . d_j d.
Field gradient_gram(const Field& grad, int components);

/// (u . grad) d, with grad in the spectral::gradient layout.
Field advect(const Field& u, const Field& grad_d);

/// Pointwise Euclidean norm squared (one component).
Field norm_squared(const Field& f);

SpaceTimeField operator+(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator*(double s, const SpaceTimeField& a);

}  // namespace geoflow
