#include "mobius/groups.hpp"

#include <cmath>
#include <numbers>

#include "mobius/errors.hpp"

namespace mobius {

namespace {
constexpr double kPi = std::numbers::pi;

double vol_sphere(int m) {
    // Surface volume of the unit m-sphere: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
    return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}
}  // namespace

std::string group_name(const GroupId& id) {
    const std::string ns = std::to_string(id.n);
    if (id.kind == Kind::Compact) {
        switch (id.field) {
            case Field::R: return "SO" + ns;
            case Field::C: return "U" + ns;
            case Field::H: return "Sp" + ns;
        }
    }
    switch (id.field) {
        case Field::R: return "Oo(" + ns + "," + ns + ")";
        case Field::C: return (id.det_one ? "SU(" : "U(") + ns + "," + ns + ")";
        case Field::H: return "Sp(" + ns + "," + ns + ")";
    }
    return "?";
}

GroupId parse_group(const std::string& name) {
    auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
    auto tail_int = [&](size_t pos) { return std::stoi(name.substr(pos)); };
    try {
        if (starts("SO")) return compact_group(Field::R, tail_int(2));
        if (starts("Sp(") || starts("SU(") || starts("Oo(") || starts("U(") || starts("O(")) {
            size_t open = name.find('(');
            size_t comma = name.find(',', open);
            int n = std::stoi(name.substr(open + 1, comma - open - 1));
            if (starts("Oo(") || starts("O(")) return split_group(Field::R, n);
            if (starts("SU(")) return split_group(Field::C, n, true);
            if (starts("U(")) return split_group(Field::C, n, false);
            return split_group(Field::H, n);
        }
        if (starts("Sp")) return compact_group(Field::H, tail_int(2));
        if (starts("U")) return compact_group(Field::C, tail_int(1));
    } catch (const std::exception&) {
    }
    throw ConfigError("group", "unrecognized group name '" + name + "'");
}

int rank(const GroupId& id) {
    if (id.kind != Kind::Compact) throw ShapeError("rank: defined for compact groups");
    return id.field == Field::R ? id.n / 2 : id.n;
}

int lie_dim(const GroupId& id) {
    const int n = id.n;
    if (id.kind == Kind::Compact) {
        switch (id.field) {
            case Field::R: return n * (n - 1) / 2;
            case Field::C: return n * n;
            case Field::H: return n * (2 * n + 1);
        }
    }
    switch (id.field) {
        case Field::R: return n * (2 * n - 1);
        case Field::C: return id.det_one ? 4 * n * n - 1 : 4 * n * n;
        case Field::H: return 2 * n * (4 * n + 1);
    }
    return 0;
}

Mat form_delta(Field f, int n) { return FormDelta(f, n).delta; }

double is_member(const GroupId& id, const Mat& a) {
    const int sz = mat_size(id);
    if (a.rows() != sz || a.cols() != sz)
        throw ShapeError("is_member: expected " + std::to_string(sz) + "x" + std::to_string(sz));
    if (a.field() != id.field)
        throw TagMismatchError("is_member: matrix field does not match group field");
    double res = 0.0;
    if (id.kind == Kind::Compact) {
        Mat gram = matmul(conj_transpose(a), a);
        res = max_abs(gram - Mat::identity(id.field, sz));
        if (id.field == Field::R) {
            Scalar d = det(a);
            res = std::max(res, std::abs(d.v.w - 1.0));
        }
        return res;
    }
    Mat delta = form_delta(id.field, id.n);
    Mat gram = matmul(conj_transpose(a), matmul(delta, a));
    res = max_abs(gram - delta);
    if (id.field == Field::C && id.det_one) {
        Scalar d = det(a);
        res = std::max(res, qnorm(d.v - Quat(1.0)));
    }
    if (id.field == Field::R) {
        // Identity component of O(n,n): both diagonal n x n blocks have
        // positive determinant.
        double da = det(block(a, 0, 0, id.n, id.n)).v.w;
        double dd = det(block(a, id.n, id.n, id.n, id.n)).v.w;
        if (da <= 0.0 || dd <= 0.0) res = std::max(res, 1.0);
    }
    return res;
}

double lie_residual(const GroupId& id, const Mat& x) {
    const int sz = mat_size(id);
    if (x.rows() != sz || x.cols() != sz) throw ShapeError("lie_residual: wrong size");
    if (id.kind == Kind::Compact) return max_abs(conj_transpose(x) + x);
    Mat delta = form_delta(id.field, id.n);
    double res = max_abs(matmul(conj_transpose(x), delta) + matmul(delta, x));
    if (id.field == Field::C && id.det_one) {
        Quat tr;
        for (int i = 0; i < sz; ++i) tr += x.at(i, i);
        res = std::max(res, qnorm(tr));
    }
    return res;
}

Mat haar_sample(const GroupId& id, Rng& rng) {
    if (id.kind != Kind::Compact) throw ShapeError("haar_sample: compact groups only");
    const int n = id.n;
    const int comps = field_real_dim(id.field);
    Mat g(id.field, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Quat q;
            q.w = rng.normal();
            if (comps > 1) q.x = rng.normal();
            if (comps > 2) {
                q.y = rng.normal();
                q.z = rng.normal();
            }
            g.at(i, j) = q;
        }
    // Modified Gram-Schmidt on columns (right coefficients: H^n is a right
    // vector space), two passes, then normalize by the real column norm so
    // the implicit R factor has positive real diagonal.
    for (int c = 0; c < n; ++c) {
        for (int pass = 0; pass < 2; ++pass)
            for (int p = 0; p < c; ++p) {
                Quat dot;  // <q_p, a_c> = sum conj(q_p[i]) a_c[i]
                for (int i = 0; i < n; ++i) dot += qmul(qconj(g.at(i, p)), g.at(i, c));
                for (int i = 0; i < n; ++i) g.at(i, c) -= qmul(g.at(i, p), dot);
            }
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += qnormsq(g.at(i, c));
        nrm = std::sqrt(nrm);
        double inv = 1.0 / nrm;
        for (int i = 0; i < n; ++i) g.at(i, c) = inv * g.at(i, c);
    }
    if (id.field == Field::R) {
        if (det(g).v.w < 0.0)
            for (int i = 0; i < n; ++i) g.at(i, n - 1) = -g.at(i, n - 1);
    }
    return g;
}

Mat torus_point(const GroupId& id, const std::vector<double>& theta) {
    if (id.kind != Kind::Compact) throw ShapeError("torus_point: compact groups only");
    const int m = rank(id);
    if (static_cast<int>(theta.size()) != m)
        throw ShapeError("torus_point: expected rank " + std::to_string(m) + " angles");
    Mat d = Mat::zero(id.field, id.n, id.n);
    if (id.field == Field::R) {
        for (int j = 0; j < m; ++j) {
            double c = std::cos(theta[j]), s = std::sin(theta[j]);
            d.at(2 * j, 2 * j) = Quat(c);
            d.at(2 * j, 2 * j + 1) = Quat(-s);
            d.at(2 * j + 1, 2 * j) = Quat(s);
            d.at(2 * j + 1, 2 * j + 1) = Quat(c);
        }
        if (id.n % 2 == 1) d.at(id.n - 1, id.n - 1) = Quat(1.0);
    } else {
        for (int j = 0; j < m; ++j) d.at(j, j) = Quat(std::cos(theta[j]), std::sin(theta[j]));
    }
    return d;
}

double weyl_density(const GroupId& id, const std::vector<double>& theta) {
    if (id.kind != Kind::Compact) throw ShapeError("weyl_density: compact groups only");
    const int m = rank(id);
    if (static_cast<int>(theta.size()) != m) throw ShapeError("weyl_density: wrong rank");
    const double mass = haar_mass(id);
    double prod = 1.0;
    double weyl_order = 1.0;
    auto factorial = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    switch (id.field) {
        case Field::C: {  // U_n, type A roots theta_j - theta_k
            for (int j = 0; j < m; ++j)
                for (int k = j + 1; k < m; ++k) {
                    double s = 2.0 * std::sin(0.5 * (theta[j] - theta[k]));
                    prod *= s * s;
                }
            weyl_order = factorial(m);
            break;
        }
        case Field::R: {
            for (int j = 0; j < m; ++j)
                for (int k = j + 1; k < m; ++k) {
                    double c = 2.0 * (std::cos(theta[j]) - std::cos(theta[k]));
                    prod *= c * c;
                }
            if (id.n % 2 == 0) {  // SO_{2m}, type D
                weyl_order = factorial(m) * std::pow(2.0, std::max(0, m - 1));
            } else {  // SO_{2m+1}, type B: extra short roots theta_j
                for (int j = 0; j < m; ++j) {
                    double s = 2.0 * std::sin(0.5 * theta[j]);
                    prod *= s * s;
                }
                weyl_order = factorial(m) * std::pow(2.0, m);
            }
            break;
        }
        case Field::H: {  // Sp_n, type C: extra long roots 2 theta_j
            for (int j = 0; j < m; ++j)
                for (int k = j + 1; k < m; ++k) {
                    double c = 2.0 * (std::cos(theta[j]) - std::cos(theta[k]));
                    prod *= c * c;
                }
            for (int j = 0; j < m; ++j) {
                double s = 2.0 * std::sin(theta[j]);
                prod *= s * s;
            }
            weyl_order = factorial(m) * std::pow(2.0, m);
            break;
        }
    }
    return mass * prod / (weyl_order * std::pow(2.0 * kPi, m));
}

double haar_mass(const GroupId& id) {
    if (id.kind != Kind::Compact) throw ShapeError("haar_mass: compact groups only");
    const int n = id.n;
    double v = 1.0;
    switch (id.field) {
        case Field::R:  // SO(k)/SO(k-1) = S^{k-1} scaled by sqrt(2)
            for (int k = 2; k <= n; ++k) v *= std::pow(std::sqrt(2.0), k - 1) * vol_sphere(k - 1);
            break;
        case Field::C:  // U(k)/U(k-1) = S^{2k-1}, 2k-2 directions scaled
            for (int k = 1; k <= n; ++k) v *= std::pow(2.0, k - 1) * vol_sphere(2 * k - 1);
            break;
        case Field::H:  // Sp(k)/Sp(k-1) = S^{4k-1}, 4k-4 directions scaled
            for (int k = 1; k <= n; ++k) v *= std::pow(2.0, 2 * (k - 1)) * vol_sphere(4 * k - 1);
            break;
    }
    return v;
}

Mat embed(const GroupId& src, const GroupId& dst, const Mat& a) {
    if (src.kind != Kind::Split || dst.kind != Kind::Split)
        throw ShapeError("embed: defined between split groups");
    const bool same_n = src.n == dst.n;
    if (src.field == Field::R && dst.field == Field::C && same_n) return retag(a, Field::C);
    if (src.field == Field::C && dst.field == Field::H && same_n) return retag(a, Field::H);
    if (src.field == Field::R && dst.field == Field::H && same_n) return retag(a, Field::H);
    if (src.field == Field::C && dst.field == Field::R && dst.n == 2 * src.n)
        return realify_complex(a);
    if (src.field == Field::H && dst.field == Field::R && dst.n == 4 * src.n)
        return realify_quaternionic(a);
    throw ShapeError("embed: unsupported pair " + group_name(src) + " -> " + group_name(dst));
}

namespace {

// Orthonormal basis of the anti-Hermitian n x n matrices over f (so_n, u_n,
// sp_n), optionally traceless (su_n).
std::vector<Mat> compact_basis(Field f, int n, bool traceless) {
    std::vector<Mat> out;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Quat units[3] = {Quat(0, 1, 0, 0), Quat(0, 0, 1, 0), Quat(0, 0, 0, 1)};
    const int nunits = f == Field::R ? 0 : (f == Field::C ? 1 : 3);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            Mat e = Mat::zero(f, n, n);
            e.at(j, k) = Quat(inv_sqrt2);
            e.at(k, j) = Quat(-inv_sqrt2);
            out.push_back(e);
            for (int u = 0; u < nunits; ++u) {
                Mat s = Mat::zero(f, n, n);
                s.at(j, k) = inv_sqrt2 * units[u];
                s.at(k, j) = inv_sqrt2 * units[u];
                out.push_back(s);
            }
        }
    if (nunits > 0 && !traceless) {
        for (int j = 0; j < n; ++j)
            for (int u = 0; u < nunits; ++u) {
                Mat s = Mat::zero(f, n, n);
                s.at(j, j) = units[u];
                out.push_back(s);
            }
    } else if (nunits > 0 && traceless) {
        // su_n diagonal part: i * diag(1,..,1,-k,0,..) / sqrt(k(k+1)),
        // plus the j,k copies for H (not used: sp_n has no trace condition).
        for (int k = 1; k < n; ++k) {
            Mat s = Mat::zero(f, n, n);
            double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
            for (int j = 0; j < k; ++j) s.at(j, j) = scale * units[0];
            s.at(k, k) = -static_cast<double>(k) * scale * units[0];
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace

std::vector<Mat> lie_basis(const GroupId& id) {
    const int n = id.n;
    if (id.kind == Kind::Compact) return compact_basis(id.field, n, false);

    std::vector<Mat> out;
    const Field f = id.field;
    const int sz = 2 * n;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const bool su = f == Field::C && id.det_one;

    auto diag_embed = [&](const Mat& x, int corner) {
        Mat e = Mat::zero(f, sz, sz);
        set_block(e, corner, corner, x);
        return e;
    };

    std::vector<Mat> corner_basis = compact_basis(f, n, su);
    for (const Mat& x : corner_basis) {
        out.push_back(diag_embed(x, 0));
        out.push_back(diag_embed(x, n));
    }
    if (su) {
        // The one trace-compatible diagonal i-direction: diag(iI, -iI)/sqrt(2n).
        Mat e = Mat::zero(f, sz, sz);
        double scale = 1.0 / std::sqrt(2.0 * n);
        for (int j = 0; j < n; ++j) {
            e.at(j, j) = Quat(0, scale);
            e.at(n + j, n + j) = Quat(0, -scale);
        }
        out.push_back(e);
    }
    // Off-diagonal part: (0 c; conj(c)^T 0) for c over all F-matrix units.
    const int nunits = field_real_dim(f);
    const Quat units[4] = {Quat(1), Quat(0, 1), Quat(0, 0, 1), Quat(0, 0, 0, 1)};
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int u = 0; u < nunits; ++u) {
                Mat e = Mat::zero(f, sz, sz);
                e.at(j, n + k) = inv_sqrt2 * units[u];
                e.at(n + k, j) = inv_sqrt2 * qconj(units[u]);
                out.push_back(e);
            }
    return out;
}

Mat random_algebra(const GroupId& id, Rng& rng, double radius) {
    std::vector<Mat> basis = lie_basis(id);
    Mat z = Mat::zero(id.field, mat_size(id), mat_size(id));
    for (const Mat& e : basis) {
        double c = rng.normal();
        Mat t = e;
        t *= c;
        z += t;
    }
    double nrm = frob_norm(z);
    if (nrm > 0) z *= radius / nrm;
    return z;
}

Mat random_element(const GroupId& id, Rng& rng, double radius) {
    if (id.kind == Kind::Compact) return haar_sample(id, rng);
    return mexp(random_algebra(id, rng, radius));
}

Mat plane_rotation_generator(Field f, int n, int i) {
    if (i < 2 || i > n) throw ShapeError("plane_rotation_generator: need 2 <= i <= n");
    Mat a = Mat::zero(f, n, n);
    a.at(0, i - 1) = Quat(1.0);
    a.at(i - 1, 0) = Quat(-1.0);
    for (int j = 1; j < n; ++j)
        if (j != i - 1) a.at(j, j) = Quat(1.0);
    return a;
}

}  // namespace mobius
