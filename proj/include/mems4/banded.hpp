#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mems4/errors.hpp"
#include "mems4/grid.hpp"

namespace mems4 {

// Symmetric banded matrix, stored by bands: band(0) is the diagonal,
// band(k) the k-th superdiagonal (length n-k).  Bandwidth <= 2 throughout
// this project (pentadiagonal), but the code is generic in p.
class SymBandMatrix {
  public:
    SymBandMatrix() = default;
    SymBandMatrix(int n, int bandwidth)
        : n_(n), p_(bandwidth), bands_(bandwidth + 1) {
        for (int k = 0; k <= p_; ++k) bands_[k].assign(n_ - k, 0.0);
    }

    int size() const { return n_; }
    int bandwidth() const { return p_; }

    double& at(int i, int k) { return bands_[k][i]; }          // entry (i, i+k)
    double at(int i, int k) const { return bands_[k][i]; }

    double entry(int i, int j) const {
        int k = j - i;
        if (k < 0) { k = -k; i = j; }
        return k > p_ ? 0.0 : bands_[k][i];
    }

    std::vector<double>& band(int k) { return bands_[k]; }
    const std::vector<double>& band(int k) const { return bands_[k]; }

    Field multiply(const Field& x) const {
        if (static_cast<int>(x.size()) != n_)
            throw SizeMismatch("SymBandMatrix::multiply: size mismatch");
        Field y(n_, 0.0);
        for (int i = 0; i < n_; ++i) {
            double s = bands_[0][i] * x[i];
            for (int k = 1; k <= p_; ++k) {
                if (i + k < n_) s += bands_[k][i] * x[i + k];
                if (i - k >= 0) s += bands_[k][i - k] * x[i - k];
            }
            y[i] = s;
        }
        return y;
    }

    double quadratic_form(const Field& x) const {
        Field y = multiply(x);
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += x[i] * y[i];
        return s;
    }

    SymBandMatrix scaled(double c) const {
        SymBandMatrix r = *this;
        for (auto& band : r.bands_)
            for (double& v : band) v *= c;
        return r;
    }

    void add_to_diagonal(const Field& d) {
        if (static_cast<int>(d.size()) != n_)
            throw SizeMismatch("add_to_diagonal: size mismatch");
        for (int i = 0; i < n_; ++i) bands_[0][i] += d[i];
    }

    void shift_diagonal(double c) {
        for (int i = 0; i < n_; ++i) bands_[0][i] += c;
    }

    // Gershgorin lower bound on the spectrum.
    double gershgorin_min() const {
        double lo = bands_[0][0];
        for (int i = 0; i < n_; ++i) {
            double r = 0.0;
            for (int k = 1; k <= p_; ++k) {
                if (i + k < n_) r += std::abs(bands_[k][i]);
                if (i - k >= 0) r += std::abs(bands_[k][i - k]);
            }
            lo = std::min(lo, bands_[0][i] - r);
        }
        return lo;
    }

  private:
    int n_ = 0;
    int p_ = 0;
    std::vector<std::vector<double>> bands_;
};

// In-place LDL^T factorization of a symmetric band matrix (no pivoting).
// All system matrices here are SPD by construction, so a non-positive
// pivot signals an assembly bug or an indefinite linearization; the
// spd = false mode tolerates negative pivots for shifted eigen-solves.
class BandFactor {
  public:
    BandFactor() = default;

    static BandFactor factor_spd(const SymBandMatrix& a) {
        return BandFactor(a, /*require_positive=*/true);
    }
    static BandFactor factor_indefinite(const SymBandMatrix& a) {
        return BandFactor(a, /*require_positive=*/false);
    }

    int size() const { return l_.size(); }

    Field solve(const Field& rhs) const {
        const int n = l_.size();
        const int p = l_.bandwidth();
        if (static_cast<int>(rhs.size()) != n)
            throw SizeMismatch("BandFactor::solve: size mismatch");
        Field x = rhs;
        // L y = b
        for (int i = 0; i < n; ++i) {
            double s = x[i];
            for (int k = 1; k <= p && i - k >= 0; ++k)
                s -= l_.at(i - k, k) * x[i - k];
            x[i] = s;
        }
        // D z = y
        for (int i = 0; i < n; ++i) x[i] /= l_.at(i, 0);
        // L^T x = z
        for (int i = n - 1; i >= 0; --i) {
            double s = x[i];
            for (int k = 1; k <= p && i + k < n; ++k)
                s -= l_.at(i, k) * x[i + k];
            x[i] = s;
        }
        return x;
    }

    // Reflection-equivariant solve for persymmetric systems (J A J = A with
    // J the index reversal, as produced by symmetric stencils on uniform
    // grids).  The exact solution commutes with reflection but the
    // left-to-right elimination order does not, so a mirrored right-hand
    // side picks up different rounding; averaging the solve with its
    // mirrored counterpart makes the map exactly equivariant in floating
    // point, which keeps symmetric initial data symmetric over long
    // weakly-damped evolutions instead of letting rounding asymmetry
    // accumulate.  Both solves are backward stable, so accuracy is
    // unaffected.  Only valid when the factored matrix is persymmetric.
    Field solve_persymmetric(const Field& rhs) const {
        Field x = solve(rhs);
        Field rr(rhs.rbegin(), rhs.rend());
        Field y = solve(rr);
        const std::size_t n = x.size();
        for (std::size_t i = 0; i < n; ++i)
            x[i] = 0.5 * (x[i] + y[n - 1 - i]);
        return x;
    }

  private:
    BandFactor(const SymBandMatrix& a, bool require_positive) : l_(a) {
        const int n = l_.size();
        const int p = l_.bandwidth();
        // Column j of L is stored transposed in the superdiagonal bands:
        // L(i, j) lives at l_.at(j, i - j).
        double scale = 0.0;
        for (int i = 0; i < n; ++i)
            scale = std::max(scale, std::abs(l_.at(i, 0)));
        for (int j = 0; j < n; ++j) {
            double d = l_.at(j, 0);
            for (int k = 1; k <= p && j - k >= 0; ++k) {
                double lv = l_.at(j - k, k);
                d -= lv * lv * l_.at(j - k, 0);
            }
            if (require_positive ? (d <= 0.0)
                                 : (std::abs(d) <= 1e-300 * scale + 1e-300))
                throw NonPositivePivot(
                    "BandFactor: non-positive pivot at row " +
                    std::to_string(j));
            l_.at(j, 0) = d;
            for (int k = 1; k <= p && j + k < n; ++k) {
                const int i = j + k;
                double s = l_.at(j, k);
                // Columns c < j with both L(i,c) and L(j,c) inside the band.
                for (int c = std::max(0, i - p); c < j; ++c)
                    s -= l_.at(c, i - c) * l_.at(c, j - c) * l_.at(c, 0);
                l_.at(j, k) = s / d;
            }
        }
    }

    SymBandMatrix l_;
};

}  // namespace mems4
