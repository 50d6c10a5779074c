#include "mobius/mat.hpp"

#include <algorithm>
#include <cmath>

namespace mobius {

void check_same_shape(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError("shape mismatch: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

void check_same_field(const Mat& a, const Mat& b) {
    if (a.field() != b.field())
        throw TagMismatchError(std::string("matrix fields differ: ") + field_name(a.field()) + " vs " +
                               field_name(b.field()));
}

Mat& Mat::operator+=(const Mat& o) {
    check_same_shape(*this, o);
    check_same_field(*this, o);
    for (size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    check_same_shape(*this, o);
    check_same_field(*this, o);
    for (size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
}

Mat& Mat::operator*=(double s) {
    for (auto& q : e_) q = s * q;
    return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(double s, Mat a) { return a *= s; }

void matmul_into(Mat& dst, const Mat& a, const Mat& b) {
    check_same_field(a, b);
    if (a.cols() != b.rows())
        throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
    const int m = a.rows(), k = a.cols(), n = b.cols();
    const Quat* A = a.data();
    const Quat* B = b.data();
    Quat* C = dst.data();
    switch (a.field()) {
        case Field::R:
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < k; ++l) s += A[i * k + l].w * B[l * n + j].w;
                    C[i * n + j] = Quat(s);
                }
            break;
        case Field::C:
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    double sw = 0.0, sx = 0.0;
                    for (int l = 0; l < k; ++l) {
                        const Quat& p = A[i * k + l];
                        const Quat& q = B[l * n + j];
                        sw += p.w * q.w - p.x * q.x;
                        sx += p.w * q.x + p.x * q.w;
                    }
                    C[i * n + j] = Quat(sw, sx);
                }
            break;
        case Field::H:
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    Quat s;
                    for (int l = 0; l < k; ++l) s += qmul(A[i * k + l], B[l * n + j]);
                    C[i * n + j] = s;
                }
            break;
    }
}

Mat matmul(const Mat& a, const Mat& b) {
    Mat c(a.field(), a.rows(), b.cols());
    matmul_into(c, a, b);
    return c;
}

Mat conj_transpose(const Mat& a) {
    Mat r(a.field(), a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(j, i) = qconj(a.at(i, j));
    return r;
}

Mat transpose(const Mat& a) {
    Mat r(a.field(), a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(j, i) = a.at(i, j);
    return r;
}

Mat conj_entries(const Mat& a) {
    Mat r(a.field(), a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = qconj(a.at(i, j));
    return r;
}

Mat inverse(const Mat& a) {
    if (!a.square()) throw ShapeError("inverse: matrix not square");
    const int n = a.rows();
    Mat work = a;
    Mat inv = Mat::identity(a.field(), n);
    const double threshold = 1e-12 * std::max(max_abs(a), 1e-300);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = qnorm(work.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = qnorm(work.at(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < threshold) throw SingularMatrixError(best);
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(work.at(piv, j), work.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        // Left-divide the pivot row by the pivot.  Over H the side matters:
        // these row operations are left multiplications by elementary matrices.
        Quat pinvq = qinv(work.at(col, col));
        for (int j = 0; j < n; ++j) {
            work.at(col, j) = qmul(pinvq, work.at(col, j));
            inv.at(col, j) = qmul(pinvq, inv.at(col, j));
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Quat f = work.at(r, col);
            if (qnormsq(f) == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                work.at(r, j) -= qmul(f, work.at(col, j));
                inv.at(r, j) -= qmul(f, inv.at(col, j));
            }
        }
    }
    return inv;
}

Mat mexp(const Mat& a, double t) {
    if (!a.square()) throw ShapeError("mexp: matrix not square");
    const int n = a.rows();
    Mat b = a;
    b *= t;
    double norm = max_abs(b);
    int s = 0;
    while (norm > 0.5) {
        norm *= 0.5;
        ++s;
    }
    b *= std::pow(0.5, s);
    // Degree-12 Taylor via Horner: T = I + B(I + B/2 (I + B/3 (...)))
    Mat term = Mat::identity(a.field(), n);
    for (int k = 12; k >= 1; --k) {
        Mat tmp = matmul(b, term);
        tmp *= 1.0 / k;
        term = Mat::identity(a.field(), n) + tmp;
    }
    for (int k = 0; k < s; ++k) term = matmul(term, term);
    return term;
}

double frob_inner(const Mat& x, const Mat& y) {
    check_same_shape(x, y);
    check_same_field(x, y);
    const Quat* X = x.data();
    const Quat* Y = y.data();
    const size_t sz = static_cast<size_t>(x.rows()) * x.cols();
    double s = 0.0;
    switch (x.field()) {
        case Field::R:
            for (size_t i = 0; i < sz; ++i) s += X[i].w * Y[i].w;
            break;
        case Field::C:
            for (size_t i = 0; i < sz; ++i) s += X[i].w * Y[i].w + X[i].x * Y[i].x;
            break;
        case Field::H:
            for (size_t i = 0; i < sz; ++i)
                s += X[i].w * Y[i].w + X[i].x * Y[i].x + X[i].y * Y[i].y + X[i].z * Y[i].z;
            break;
    }
    return s;
}

double frob_norm(const Mat& x) { return std::sqrt(frob_inner(x, x)); }

double max_abs(const Mat& x) {
    double m = 0.0;
    const Quat* X = x.data();
    const size_t sz = static_cast<size_t>(x.rows()) * x.cols();
    for (size_t i = 0; i < sz; ++i) m = std::max(m, qmaxabs(X[i]));
    return m;
}

Mat block(const Mat& a, int r0, int c0, int rows, int cols) {
    if (r0 + rows > a.rows() || c0 + cols > a.cols()) throw ShapeError("block: out of range");
    Mat r(a.field(), rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.at(i, j) = a.at(r0 + i, c0 + j);
    return r;
}

void set_block(Mat& a, int r0, int c0, const Mat& b) {
    if (r0 + b.rows() > a.rows() || c0 + b.cols() > a.cols()) throw ShapeError("set_block: out of range");
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) a.at(r0 + i, c0 + j) = b.at(i, j);
}

Mat vstack(const Mat& top, const Mat& bottom) {
    if (top.cols() != bottom.cols()) throw ShapeError("vstack: column mismatch");
    check_same_field(top, bottom);
    Mat r(top.field(), top.rows() + bottom.rows(), top.cols());
    set_block(r, 0, 0, top);
    set_block(r, top.rows(), 0, bottom);
    return r;
}

Mat hstack(const Mat& left, const Mat& right) {
    if (left.rows() != right.rows()) throw ShapeError("hstack: row mismatch");
    check_same_field(left, right);
    Mat r(left.field(), left.rows(), left.cols() + right.cols());
    set_block(r, 0, 0, left);
    set_block(r, 0, left.cols(), right);
    return r;
}

Scalar det(const Mat& a) {
    if (!a.square()) throw ShapeError("det: matrix not square");
    if (a.field() == Field::H)
        throw TagMismatchError("det over H is not defined entrywise; complexify first");
    const int n = a.rows();
    Mat work = a;
    Quat d(1.0);
    const double threshold = 1e-14 * std::max(max_abs(a), 1e-300);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = qnorm(work.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = qnorm(work.at(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < threshold) return {a.field(), Quat(0.0)};
        if (piv != col) {
            for (int j = col; j < n; ++j) std::swap(work.at(piv, j), work.at(col, j));
            d = -d;
        }
        d = qmul(d, work.at(col, col));
        Quat pinvq = qinv(work.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            Quat f = qmul(work.at(r, col), pinvq);
            if (qnormsq(f) == 0.0) continue;
            for (int j = col; j < n; ++j) work.at(r, j) -= qmul(f, work.at(col, j));
        }
    }
    return {a.field(), d};
}

Mat complexify(const Mat& a) {
    // q = alpha + j beta with alpha, beta in C; the 2n x 2n complex image is
    // [[alpha, -conj(beta)], [beta, conj(alpha)]] per n x n block.
    const int m = a.rows(), n = a.cols();
    Mat r(Field::C, 2 * m, 2 * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const Quat& q = a.at(i, j);
            // q = (w + x i) + j (y - z i): beta = y - z i so that q = alpha + j*beta
            // with j*(y - z i) = y j + z k.
            Quat alpha(q.w, q.x), beta(q.y, -q.z);
            r.at(i, j) = alpha;
            r.at(i, n + j) = Quat(-beta.w, beta.x);
            r.at(m + i, j) = beta;
            r.at(m + i, n + j) = qconj(alpha);
        }
    return r;
}

Mat realify_complex(const Mat& a) {
    const int m = a.rows(), n = a.cols();
    Mat r(Field::R, 2 * m, 2 * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const Quat& q = a.at(i, j);
            r.at(2 * i, 2 * j) = Quat(q.w);
            r.at(2 * i, 2 * j + 1) = Quat(-q.x);
            r.at(2 * i + 1, 2 * j) = Quat(q.x);
            r.at(2 * i + 1, 2 * j + 1) = Quat(q.w);
        }
    return r;
}

Mat realify_quaternionic(const Mat& a) {
    const int m = a.rows(), n = a.cols();
    Mat r(Field::R, 4 * m, 4 * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const Quat& q = a.at(i, j);
            // Matrix of left multiplication by q on H = R^4 in basis {1,i,j,k}.
            const double L[4][4] = {{q.w, -q.x, -q.y, -q.z},
                                    {q.x, q.w, -q.z, q.y},
                                    {q.y, q.z, q.w, -q.x},
                                    {q.z, -q.y, q.x, q.w}};
            for (int u = 0; u < 4; ++u)
                for (int v = 0; v < 4; ++v) r.at(4 * i + u, 4 * j + v) = Quat(L[u][v]);
        }
    return r;
}

Mat retag(const Mat& a, Field to) {
    if (field_real_dim(to) < field_real_dim(a.field()))
        throw TagMismatchError("retag: cannot narrow the scalar field");
    Mat r(to, a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    return r;
}

}  // namespace mobius
