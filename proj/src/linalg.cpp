#include "epimit/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace epimit {

std::vector<double> Matrix::multiply(std::span<const double> v) const
{
    if (static_cast<int>(v.size()) != cols_)
        throw std::invalid_argument("matrix-vector size mismatch");
    std::vector<double> out(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double acc = 0.0;
        const double* r = data_.data() + static_cast<std::size_t>(i) * cols_;
        for (int j = 0; j < cols_; ++j)
            acc += r[j] * v[j];
        out[i] = acc;
    }
    return out;
}

LuFactor lu_factor(Matrix a)
{
    const int n = a.rows();
    if (n != a.cols())
        throw std::invalid_argument("lu_factor requires a square matrix");
    LuFactor f;
    f.perm.resize(n);
    for (int i = 0; i < n; ++i)
        f.perm[i] = i;

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            f.lu = std::move(a);
            return f;
        }
        if (pivot != col) {
            for (int j = 0; j < n; ++j)
                std::swap(a(pivot, j), a(col, j));
            std::swap(f.perm[pivot], f.perm[col]);
        }
        const double d = a(col, col);
        for (int r = col + 1; r < n; ++r) {
            double m = a(r, col) / d;
            a(r, col) = m;
            if (m != 0.0)
                for (int j = col + 1; j < n; ++j)
                    a(r, j) -= m * a(col, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

std::vector<double> lu_solve(const LuFactor& f, std::span<const double> b)
{
    if (f.singular)
        throw std::runtime_error("lu_solve: singular matrix");
    const int n = f.lu.rows();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("lu_solve: rhs size mismatch");
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double acc = b[f.perm[i]];
        for (int j = 0; j < i; ++j)
            acc -= f.lu(i, j) * y[j];
        y[i] = acc;
    }
    for (int i = n - 1; i >= 0; --i) {
        double acc = y[i];
        for (int j = i + 1; j < n; ++j)
            acc -= f.lu(i, j) * y[j];
        y[i] = acc / f.lu(i, i);
    }
    return y;
}

Matrix lu_inverse(const LuFactor& f)
{
    const int n = f.lu.rows();
    Matrix inv(n, n);
    std::vector<double> e(n, 0.0);
    for (int col = 0; col < n; ++col) {
        e[col] = 1.0;
        std::vector<double> x = lu_solve(f, e);
        for (int i = 0; i < n; ++i)
            inv(i, col) = x[i];
        e[col] = 0.0;
    }
    return inv;
}

double spectral_norm(const Matrix& a, int iterations)
{
    const int n = a.cols();
    if (n == 0)
        return 0.0;
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double norm = 0.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> av = a.multiply(v);
        // w = A^T (A v)
        std::vector<double> w(n, 0.0);
        for (int i = 0; i < a.rows(); ++i) {
            const double s = av[i];
            if (s == 0.0)
                continue;
            for (int j = 0; j < n; ++j)
                w[j] += a(i, j) * s;
        }
        double len = 0.0;
        for (double x : w)
            len += x * x;
        len = std::sqrt(len);
        if (len == 0.0)
            return 0.0;
        for (int j = 0; j < n; ++j)
            v[j] = w[j] / len;
        norm = std::sqrt(len);
    }
    return norm;
}

} // namespace epimit
