#ifndef SARTENSOR_TYPES_HPP
#define SARTENSOR_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sartensor {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double a) const { return {x * a, y * a, z * a}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline Vec3 operator*(double a, const Vec3& v) { return v * a; }

/// Dense complex matrix, row-major. Entries are validated to be finite when
/// constructed from external data; in-place mutation through operator() is
/// unchecked.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {
        check_shape();
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        check_shape();
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("ComplexMatrix: data size " + std::to_string(data_.size()) +
                                        " does not match " + shape_string());
        if (!all_finite())
            throw std::invalid_argument("ComplexMatrix: non-finite entry in " + shape_string());
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    bool all_finite() const {
        for (const cplx& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    bool same_shape(const ComplexMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    std::string shape_string() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

  private:
    void check_shape() const {
        if (rows_ < 1 || cols_ < 1)
            throw std::invalid_argument("ComplexMatrix: shape must be at least 1x1, got " +
                                        shape_string());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Third-order complex tensor stored as an ordered sequence of n3 matrix
/// panels of common shape n1 x n2.
class ComplexTensor3 {
  public:
    ComplexTensor3() = default;

    ComplexTensor3(std::size_t n1, std::size_t n2, std::size_t n3)
        : n1_(n1), n2_(n2), panels_(n3, ComplexMatrix(n1, n2)) {
        if (n3 < 1) throw std::invalid_argument("ComplexTensor3: n3 must be >= 1");
    }

    explicit ComplexTensor3(std::vector<ComplexMatrix> panels) : panels_(std::move(panels)) {
        if (panels_.empty()) throw std::invalid_argument("ComplexTensor3: need >= 1 panel");
        n1_ = panels_.front().rows();
        n2_ = panels_.front().cols();
        for (const auto& p : panels_)
            if (p.rows() != n1_ || p.cols() != n2_)
                throw std::invalid_argument("ComplexTensor3: panel shape mismatch (" +
                                            p.shape_string() + " vs " +
                                            panels_.front().shape_string() + ")");
    }

    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    std::size_t n3() const { return panels_.size(); }

    ComplexMatrix& panel(std::size_t l) { return panels_[l]; }
    const ComplexMatrix& panel(std::size_t l) const { return panels_[l]; }

    std::vector<ComplexMatrix>& panels() { return panels_; }
    const std::vector<ComplexMatrix>& panels() const { return panels_; }

  private:
    std::size_t n1_ = 0;
    std::size_t n2_ = 0;
    std::vector<ComplexMatrix> panels_;
};

} // namespace sartensor

#endif
