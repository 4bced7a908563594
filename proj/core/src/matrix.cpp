#include "isoproxim/matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "isoproxim/errors.hpp"
#include "isoproxim/tolerances.hpp"

namespace isoproxim {

namespace {

bool finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex{1.0, 0.0};
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw PreconditionError("matrix literal: ragged rows");
        std::size_t j = 0;
        for (Complex z : row) {
            if (!finite(z)) throw PreconditionError("matrix literal: non-finite entry");
            m(i, j++) = z;
        }
        ++i;
    }
    return m;
}

Matrix Matrix::from_real_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw PreconditionError("matrix literal: ragged rows");
        std::size_t j = 0;
        for (double x : row) {
            if (!std::isfinite(x)) throw PreconditionError("matrix literal: non-finite entry");
            m(i, j++) = Complex{x, 0.0};
        }
        ++i;
    }
    return m;
}

Matrix Matrix::from_data(std::size_t rows, std::size_t cols, std::vector<Complex> data) {
    if (data.size() != rows * cols)
        throw PreconditionError("matrix data: expected " + std::to_string(rows * cols) +
                                " entries, got " + std::to_string(data.size()));
    for (Complex z : data)
        if (!finite(z)) throw PreconditionError("matrix data: non-finite entry");
    Matrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.data_ = std::move(data);
    return m;
}

Matrix Matrix::diagonal(std::span<const double> values, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    const std::size_t q = std::min(rows, cols);
    for (std::size_t i = 0; i < q && i < values.size(); ++i) m(i, i) = Complex{values[i], 0.0};
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

Complex Matrix::trace() const {
    Complex acc{0.0, 0.0};
    const std::size_t q = std::min(rows_, cols_);
    for (std::size_t i = 0; i < q; ++i) acc += (*this)(i, i);
    return acc;
}

double Matrix::frobenius_norm() const {
    double acc = 0.0;
    for (Complex z : data_) acc += std::norm(z);
    return std::sqrt(acc);
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (Complex z : data_) best = std::max(best, std::abs(z));
    return best;
}

bool Matrix::all_finite() const noexcept {
    for (Complex z : data_)
        if (!finite(z)) return false;
    return true;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other, "matrix sum");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other, "matrix difference");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(Complex scale) {
    for (Complex& z : data_) z *= scale;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw PreconditionError("matrix product: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t t = 0; t < a.cols(); ++t) {
            const Complex ait = a(i, t);
            if (ait == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += ait * b(t, j);
        }
    }
    return out;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    if (!a.same_shape(b)) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j) - b(i, j)) > tol) return false;
    return true;
}

void require_finite(const Matrix& m, const char* what) {
    if (!m.all_finite())
        throw PreconditionError(std::string(what) + ": matrix has non-finite entries");
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (!a.same_shape(b)) throw PreconditionError(std::string(what) + ": shape mismatch");
}

void Tolerances::validate() const {
    auto check = [](double value, const char* name) {
        if (!(value > 0.0) || !(value < 1.0))
            throw PreconditionError(std::string("tolerances: ") + name +
                                    " must lie strictly between 0 and 1");
    };
    if (rank_rel > 0.0) check(rank_rel, "rank_rel");
    check(cluster_rel, "cluster_rel");
    check(iso, "iso");
    check(half, "half");
}

} // namespace isoproxim
