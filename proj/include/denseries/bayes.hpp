#pragma once

#include "denseries/density.hpp"

namespace denseries {

//! Bayes-space addition: (f (+) g)(u) = f(u) g(u) / integral(f g).
GriddedDensity perturb(const GriddedDensity& f, const GriddedDensity& g);

//! Bayes-space scalar multiplication: (r (.) f)(u) = f(u)^r / integral(f^r).
//! Computed in log space so that any real r is safe.
GriddedDensity power(double r, const GriddedDensity& f);

//! f (-) g = f (+) (-1) (.) g.
GriddedDensity perturb_sub(const GriddedDensity& f, const GriddedDensity& g);

//! Centred log-ratio transform: clr(f)(u) = ln f(u) - mean of ln f over the
//! support, trapezoid-weighted. Maps densities into the zero-integral L2 space.
ClrFunction clr(const GriddedDensity& f);

//! Inverse clr: exp(g) renormalized to a density. The maximum of g is
//! subtracted before exponentiation to guard against overflow.
GriddedDensity clr_inv(const ClrFunction& g);

//! L2 inner product, norm and distance of clr images. By the isometry of the
//! clr transform these equal the Bayes-space inner product, norm, and the
//! distance ||f (-) g||_B.
double bayes_inner(const GriddedDensity& f, const GriddedDensity& g);
double bayes_norm(const GriddedDensity& f);
double bayes_dist(const GriddedDensity& f, const GriddedDensity& g);

//! L2 norm of a clr function under trapezoid quadrature.
double l2_norm(const ClrFunction& g);

} // namespace denseries
