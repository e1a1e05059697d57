#pragma once

#include <vector>

#include "dlh/poly.hpp"

namespace dlh {

// Dense matrix with MultiPoly entries, all over one variable list.
class PolyMat {
public:
    PolyMat() = default;
    PolyMat(int rows, int cols, const std::vector<std::string>& vars);
    static PolyMat identity(int n, const std::vector<std::string>& vars);

    int rows() const { return r_; }
    int cols() const { return c_; }
    const std::vector<std::string>& vars() const { return vars_; }
    MultiPoly& at(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const MultiPoly& at(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    friend PolyMat operator*(const PolyMat& a, const PolyMat& b);
    friend PolyMat operator+(const PolyMat& a, const PolyMat& b);
    friend PolyMat operator-(const PolyMat& a, const PolyMat& b);
    friend bool operator==(const PolyMat& a, const PolyMat& b);
    friend bool operator!=(const PolyMat& a, const PolyMat& b) { return !(a == b); }
    PolyMat scaled(const Rational& c) const;
    PolyMat pow(int k) const;
    bool is_zero() const;

private:
    int r_ = 0, c_ = 0;
    std::vector<std::string> vars_;
    std::vector<MultiPoly> a_;
};

} // namespace dlh
