#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "geoflow/grid.hpp"

namespace geoflow::spectral {

using Complex = std::complex<double>;

/// Fourier coefficients of a real Field in the half-complex layout (last axis
/// holds k = 0..M/2), one block per component. Coefficients are normalized so
/// that f(x) = sum_k c_k exp(i xi_k . x).
class Spectrum {
public:
    Spectrum(const GridSpec& grid, int components);

    const GridSpec& grid() const { return grid_; }
    int components() const { return components_; }
    std::size_t modes() const { return modes_; }

    std::span<Complex> component(int a) { return {coeffs_.data() + a * modes_, modes_}; }
    std::span<const Complex> component(int a) const { return {coeffs_.data() + a * modes_, modes_}; }
    std::span<Complex> coefficients() { return coeffs_; }
    std::span<const Complex> coefficients() const { return coeffs_; }

private:
    GridSpec grid_;
    int components_;
    std::size_t modes_;
    std::vector<Complex> coeffs_;
};

/// Wavevectors of the half-complex layout.
class ModeTable {
public:
    explicit ModeTable(const GridSpec& grid);

    std::size_t size() const { return lap_.size(); }
    int dim() const { return dim_; }
    int integer_wavenumber(std::size_t mode, int axis) const { return k_[mode * 3 + axis]; }
    double wavenumber(std::size_t mode, int axis) const { return xi_[mode * 3 + axis]; }
    /// First-derivative symbol: xi along `axis`, zero on that axis' Nyquist plane.
    double derivative_symbol(std::size_t mode, int axis) const { return dxi_[mode * 3 + axis]; }
    /// |xi|^2, Nyquist modes included.
    double laplacian_symbol(std::size_t mode) const { return lap_[mode]; }
    /// |derivative symbol|^2.
    double derivative_norm_sq(std::size_t mode) const { return dlap_[mode]; }
    bool is_nyquist(std::size_t mode) const { return nyquist_[mode] != 0; }

private:
    int dim_;
    std::vector<int> k_;
    std::vector<double> xi_;
    std::vector<double> dxi_;
    std::vector<double> lap_;
    std::vector<double> dlap_;
    std::vector<char> nyquist_;
};

/// Cached per thread; the reference stays valid for the thread's lifetime.
const ModeTable& mode_table(const GridSpec& grid);

Spectrum forward(const Field& f);
Field inverse(const Spectrum& s);

Field laplacian(const Field& f);
/// Components l*n, entry (i, a) = d_i f_a stored at index i*l + a.
Field gradient(const Field& f);
/// Requires f.components() == grid dim.
Field divergence(const Field& f);

Spectrum laplacian(const Spectrum& s);
Spectrum gradient(const Spectrum& s);
Spectrum divergence(const Spectrum& s);
/// Row divergence of an n x n tensor (index i*n + j): out_i = sum_j d_j f_ij.
Spectrum tensor_divergence(const Spectrum& s);

/// Pointwise nonlinearity evaluated on the 3/2-padded grid. The kernel sees,
/// per fine site, the concatenated component values of all inputs and writes
/// `out_components` values; the result is truncated back to the coarse modes.
using PointKernel = std::function<void(std::span<const double> in, std::span<double> out)>;
Spectrum dealiased_apply(std::span<const Spectrum* const> inputs, int out_components,
                         const PointKernel& kernel);

/// Number of points per axis of the padded grid.
int padded_points(const GridSpec& grid);

}  // namespace geoflow::spectral
