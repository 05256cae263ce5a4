#pragma once

#include "ksg/kernel.hpp"

/// Exact BKW solution of the homogeneous 2-D Boltzmann equation for Maxwell molecules.
///
///   s(t)   = 1 - exp(-lambda t / 8) / 2
///   f(t,v) = exp(-|v|^2 / 2s) / (2 pi s^2) * [(2s - 1) + (1 - s) |v|^2 / (2s)]
///
/// lambda is the total collision frequency 2 pi b_ang b(z); it equals b(z) for the default
/// angular constant 1 / (2 pi).
namespace ksg::bkw {

double rate(const kernel::KernelModel& kernel, double z);

double sigma(double t, double rate);
double density(double t, double v_sq, double rate);
/// d f / d t from the closed form.
double time_derivative(double t, double v_sq, double rate);

}  // namespace ksg::bkw
