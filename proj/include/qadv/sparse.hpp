#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <vector>

namespace qadv {

/// Square real matrix in compressed-sparse-row form. Column indices are
/// strictly increasing within each row.
struct SparseOperator {
    int n = 0;
    std::vector<int> row_ptr;  // size n+1
    std::vector<int> col;
    std::vector<double> val;

    int nnz() const { return static_cast<int>(col.size()); }

    int max_row_nnz() const {
        int s = 0;
        for (int r = 0; r < n; ++r) s = std::max(s, row_ptr[r + 1] - row_ptr[r]);
        return s;
    }

    Eigen::MatrixXd to_dense() const {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
        for (int r = 0; r < n; ++r)
            for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) d(r, col[k]) = val[k];
        return d;
    }
};

/// Row-wise accumulator; duplicate entries merge by addition.
class SparseBuilder {
  public:
    explicit SparseBuilder(int n) : n_(n), rows_(n) {}

    void add(int r, int c, double v) {
        if (r < 0 || r >= n_ || c < 0 || c >= n_)
            throw std::invalid_argument("SparseBuilder: index out of range");
        rows_[r][c] += v;
    }

    SparseOperator build() const {
        SparseOperator op;
        op.n = n_;
        op.row_ptr.assign(n_ + 1, 0);
        for (int r = 0; r < n_; ++r) op.row_ptr[r + 1] = op.row_ptr[r] + static_cast<int>(rows_[r].size());
        op.col.reserve(op.row_ptr[n_]);
        op.val.reserve(op.row_ptr[n_]);
        for (int r = 0; r < n_; ++r)
            for (const auto& [c, v] : rows_[r]) {  // std::map iterates in ascending key order
                op.col.push_back(c);
                op.val.push_back(v);
            }
        return op;
    }

  private:
    int n_;
    std::vector<std::map<int, double>> rows_;
};

inline SparseOperator sparse_identity(int n) {
    SparseOperator op;
    op.n = n;
    op.row_ptr.resize(n + 1);
    op.col.resize(n);
    op.val.assign(n, 1.0);
    for (int r = 0; r <= n; ++r) op.row_ptr[r] = r;
    for (int r = 0; r < n; ++r) op.col[r] = r;
    return op;
}

inline void matvec(const SparseOperator& a, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    if (x.size() != a.n) throw std::invalid_argument("matvec: dimension mismatch");
    y.resize(a.n);
    for (int r = 0; r < a.n; ++r) {
        double s = 0.0;
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.val[k] * x[a.col[k]];
        y[r] = s;
    }
}

inline Eigen::VectorXd matvec(const SparseOperator& a, const Eigen::VectorXd& x) {
    Eigen::VectorXd y;
    matvec(a, x, y);
    return y;
}

inline SparseOperator transpose(const SparseOperator& a) {
    SparseOperator t;
    t.n = a.n;
    t.row_ptr.assign(a.n + 1, 0);
    for (int c : a.col) ++t.row_ptr[c + 1];
    for (int r = 0; r < a.n; ++r) t.row_ptr[r + 1] += t.row_ptr[r];
    t.col.resize(a.col.size());
    t.val.resize(a.val.size());
    std::vector<int> fill(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (int r = 0; r < a.n; ++r)
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
            const int pos = fill[a.col[k]]++;
            t.col[pos] = r;  // rows visited in order, so columns stay sorted
            t.val[pos] = a.val[k];
        }
    return t;
}

/// Extend with unit diagonal rows up to dimension m >= n.
inline SparseOperator pad_identity(const SparseOperator& a, int m) {
    if (m < a.n) throw std::invalid_argument("pad_identity: target smaller than source");
    if (m == a.n) return a;
    SparseOperator p = a;
    p.n = m;
    p.row_ptr.reserve(m + 1);
    for (int r = a.n; r < m; ++r) {
        p.col.push_back(r);
        p.val.push_back(1.0);
        p.row_ptr.push_back(p.row_ptr.back() + 1);
    }
    return p;
}

/// MatrixMarket coordinate format, 1-based indices.
inline void save_matrix_market(const SparseOperator& a, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.n << ' ' << a.n << ' ' << a.nnz() << '\n';
    out.precision(17);
    for (int r = 0; r < a.n; ++r)
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            out << r + 1 << ' ' << a.col[k] + 1 << ' ' << a.val[k] << '\n';
}

}  // namespace qadv
