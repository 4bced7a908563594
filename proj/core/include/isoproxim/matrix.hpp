#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace isoproxim {

using Complex = std::complex<double>;

/// Dense complex matrix with row-major storage.
///
/// All library operations treat their inputs as read-only and return fresh
/// values, so matrices are safe to share across threads once constructed.
class Matrix {
public:
    Matrix() = default;

    /// Zero matrix of the given shape.
    Matrix(std::size_t rows, std::size_t cols);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    static Matrix from_real_rows(std::initializer_list<std::initializer_list<double>> rows);

    /// Builds a matrix from row-major data, rejecting non-finite entries.
    static Matrix from_data(std::size_t rows, std::size_t cols, std::vector<Complex> data);

    /// m x n matrix with `values` on the main diagonal, zero elsewhere.
    static Matrix diagonal(std::span<const double> values, std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * cols_ + j];
    }

    std::span<const Complex> data() const noexcept { return data_; }

    Matrix adjoint() const;

    Complex trace() const;
    double frobenius_norm() const;

    /// Largest entry modulus (the max norm).
    double max_abs() const;

    bool all_finite() const noexcept;
    bool same_shape(const Matrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(Complex scale);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Entrywise comparison in the max norm.
bool approx_equal(const Matrix& a, const Matrix& b, double tol);

/// Throws PreconditionError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

} // namespace isoproxim
