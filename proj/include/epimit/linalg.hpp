#ifndef EPIMIT_LINALG_HPP
#define EPIMIT_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace epimit {

// Dense row-major matrix. Sizes stay in the low thousands here, so a plain
// LU factorization covers every solve the library needs.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill)
    {
    }

    static Matrix identity(int n)
    {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::span<const double> row(int i) const
    {
        return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
    }

    std::vector<double> multiply(std::span<const double> v) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

struct LuFactor {
    Matrix lu;
    std::vector<int> perm;
    bool singular = false;
};

LuFactor lu_factor(Matrix a);
std::vector<double> lu_solve(const LuFactor& f, std::span<const double> b);
Matrix lu_inverse(const LuFactor& f);

// Largest singular value by power iteration on A^T A.
double spectral_norm(const Matrix& a, int iterations = 200);

} // namespace epimit

#endif
