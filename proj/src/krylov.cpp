#include "hamkrylov/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hamkrylov/error.hpp"
#include "hamkrylov/factorization.hpp"

namespace hamkrylov {

std::string_view to_string(BasisFlavor flavor) {
    switch (flavor) {
    case BasisFlavor::EuclideanArnoldi: return "euclidean_arnoldi";
    case BasisFlavor::WeightedArnoldi: return "weighted_arnoldi";
    case BasisFlavor::SymplecticLanczos: return "symplectic_lanczos";
    case BasisFlavor::BlockJ: return "block_j";
    }
    return "unknown";
}

namespace {

void require_start(const LinearOperator& a, std::span<const double> b, std::size_t n, const char* who) {
    if (b.size() != a.dim) throw DimensionError(std::string(who) + ": start vector length mismatch");
    if (n == 0) throw InvalidArgument(std::string(who) + ": basis size must be at least 1");
    if (norm2(b) == 0.0) throw InvalidArgument(std::string(who) + ": zero start vector");
}

DenseMatrix leading_block(const DenseMatrix& h, std::size_t d) {
    DenseMatrix out(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out(i, j) = h(i, j);
    return out;
}

} // namespace

KrylovBasis arnoldi(const LinearOperator& a, std::span<const double> b, std::size_t n, const InnerProduct& ip,
                    const ArnoldiOptions& options) {
    require_start(a, b, n, "arnoldi");
    const bool weighted = ip.is_weighted();

    std::vector<Vector> v;
    std::vector<Vector> mv; // M v_i, so that <v_i, w>_M = (M v_i)^T w
    v.reserve(n);
    mv.reserve(n);

    {
        Vector mb = ip.weight_apply(b);
        const double bb = dot(b, mb);
        if (!(bb > 0.0)) throw IndefiniteWeightError("arnoldi: <b, b> is not positive for the weighted inner product");
        const double nb = std::sqrt(bb);
        Vector v1(b.begin(), b.end());
        for (double& x : v1) x /= nb;
        for (double& x : mb) x /= nb;
        v.push_back(std::move(v1));
        mv.push_back(std::move(mb));
    }

    DenseMatrix h(n + 1, n);
    KrylovBasis out;
    out.flavor = weighted ? BasisFlavor::WeightedArnoldi : BasisFlavor::EuclideanArnoldi;
    double a_estimate = 0.0;
    std::size_t built = n;

    for (std::size_t j = 0; j < n; ++j) {
        Vector w = a(v[j]);
        {
            const double ww = dot(w, ip.weight_apply(w));
            a_estimate = std::max(a_estimate, std::sqrt(std::abs(ww)));
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i <= j; ++i) {
                const double c = dot(mv[i], w);
                h(i, j) += c;
                axpy(-c, v[i], w);
            }
        }
        Vector mw = ip.weight_apply(w);
        const double ww = dot(w, mw);
        if (weighted && ww < 0.0) {
            throw IndefiniteWeightError("arnoldi: <w, w> < 0 at step " + std::to_string(j + 1) +
                                        "; the weight is not positive definite");
        }
        const double hnext = std::sqrt(std::max(ww, 0.0));
        const double tol = options.breakdown_tolerance.value_or(1e-12 * a_estimate);

        if (hnext < tol) {
            out.breakdown_step = j + 1;
            out.residual = std::move(w);
            out.residual_coefficient = hnext;
            built = j + 1;
            break;
        }
        if (j + 1 == n) {
            out.residual = std::move(w);
            out.residual_coefficient = hnext;
            break;
        }
        h(j + 1, j) = hnext;
        for (double& x : w) x /= hnext;
        for (double& x : mw) x /= hnext;
        v.push_back(std::move(w));
        mv.push_back(std::move(mw));
    }

    v.resize(built);
    out.basis = DenseMatrix::from_columns(v);
    out.small_matrix = leading_block(h, built);
    return out;
}

KrylovBasis symplectic_lanczos(const LinearOperator& a, std::span<const double> y0, std::size_t n,
                               const LanczosOptions& options) {
    require_start(a, y0, n, "symplectic_lanczos");
    if (a.dim % 2 != 0) throw DimensionError("symplectic_lanczos: operator dimension must be even");
    const SymplecticOperator j_op(a.dim / 2);

    std::vector<Vector> v;
    std::vector<Vector> w;
    v.reserve(n + 1);
    w.reserve(n);
    {
        Vector v1(y0.begin(), y0.end());
        const double ny = norm2(v1);
        for (double& x : v1) x /= ny;
        v.push_back(std::move(v1));
    }

    // coefficients indexed as v_i -> i, w_i -> n + i
    DenseMatrix h(2 * n, 2 * n);
    auto project = [&](Vector& x, std::size_t pairs, std::size_t column) {
        // x -= sum_i omega(v_i, x) w_i - omega(w_i, x) v_i, twice
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < pairs; ++i) {
                const double alpha = symplectic_inner(j_op, v[i], x);
                const double beta = symplectic_inner(j_op, w[i], x);
                axpy(-alpha, w[i], x);
                axpy(beta, v[i], x);
                h(n + i, column) += alpha;
                h(i, column) -= beta;
            }
        }
    };

    KrylovBasis out;
    out.flavor = BasisFlavor::SymplecticLanczos;
    double a_estimate = 0.0;
    std::size_t built = n;

    for (std::size_t jj = 0; jj < n; ++jj) {
        Vector x = a(v[jj]);
        a_estimate = std::max(a_estimate, norm2(x));
        project(x, jj, jj);
        const double nu = symplectic_inner(j_op, v[jj], x);
        if (!(std::abs(nu) > options.serious_breakdown_tolerance * std::max(a_estimate, norm2(x)))) {
            throw BreakdownError("symplectic_lanczos: serious breakdown, omega(v_j, A v_j) ~ 0 at step " +
                                     std::to_string(jj + 1),
                                 jj + 1);
        }
        for (double& e : x) e /= nu;
        h(n + jj, jj) += nu;
        w.push_back(std::move(x));

        Vector y = a(w[jj]);
        a_estimate = std::max(a_estimate, norm2(y) / std::max(norm2(w[jj]), 1e-300));
        project(y, jj + 1, n + jj);
        const double zeta = norm2(y);
        if (zeta < options.breakdown_tolerance * a_estimate * norm2(w[jj])) {
            out.breakdown_step = jj + 1;
            out.residual = std::move(y);
            out.residual_coefficient = zeta;
            built = jj + 1;
            break;
        }
        if (jj + 1 == n) {
            out.residual = std::move(y);
            out.residual_coefficient = zeta;
            break;
        }
        for (double& e : y) e /= zeta;
        h(jj + 1, n + jj) = zeta;
        v.push_back(std::move(y));
    }

    v.resize(built);
    std::vector<Vector> columns = v;
    columns.insert(columns.end(), w.begin(), w.end());
    out.basis = DenseMatrix::from_columns(columns);

    DenseMatrix small(2 * built, 2 * built);
    auto index = [&](std::size_t k) { return k < built ? k : n + (k - built); };
    for (std::size_t r = 0; r < 2 * built; ++r)
        for (std::size_t c = 0; c < 2 * built; ++c) small(r, c) = h(index(r), index(c));
    out.small_matrix = std::move(small);

    const double defect = j_orthogonality_defect(out.basis);
    if (defect > options.orthogonality_limit) {
        throw BreakdownError("symplectic_lanczos: loss of J-orthogonality (" + std::to_string(defect) + ")", built);
    }
    return out;
}

KrylovBasis block_j_basis(const LinearOperator& a, std::span<const double> y0, std::size_t n, bool stabilized) {
    require_start(a, y0, n, "block_j_basis");
    if (a.dim % 2 != 0) throw DimensionError("block_j_basis: operator dimension must be even");
    const std::size_t m = a.dim / 2;

    KrylovBasis out;
    out.flavor = BasisFlavor::BlockJ;

    DenseMatrix krylov;
    if (stabilized) {
        KrylovBasis arn = arnoldi(a, y0, n, InnerProduct::euclidean());
        out.breakdown_step = arn.breakdown_step;
        krylov = std::move(arn.basis);
    } else {
        std::vector<Vector> cols;
        cols.emplace_back(y0.begin(), y0.end());
        for (std::size_t i = 1; i < n; ++i) cols.push_back(a(cols.back()));
        krylov = DenseMatrix::from_columns(cols);
    }

    // [K^q, K^p]
    const std::size_t c = krylov.cols();
    DenseMatrix halves(m, 2 * c);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            halves(i, j) = krylov(i, j);
            halves(i, c + j) = krylov(m + i, j);
        }
    }
    const QrResult qr = qr_factor(halves);
    const std::size_t k = qr.rank;
    if (k == 0) throw InvalidArgument("block_j_basis: rank 0 Krylov block");
    const DenseMatrix v = qr.q.column_block(0, k);
    out.basis = DenseMatrix::block_diagonal(v, v);

    // J_{2k} sym(S^T J^{-1} A S)
    const SymplecticOperator j_op(m);
    DenseMatrix jinv_as(2 * m, 2 * k);
    for (std::size_t col = 0; col < 2 * k; ++col) {
        jinv_as.set_column(col, j_op.apply_inverse(a(out.basis.column(col))));
    }
    DenseMatrix reduced_h = multiply_transposed(out.basis, jinv_as);
    for (std::size_t i = 0; i < 2 * k; ++i) {
        for (std::size_t j = i + 1; j < 2 * k; ++j) {
            const double s = 0.5 * (reduced_h(i, j) + reduced_h(j, i));
            reduced_h(i, j) = s;
            reduced_h(j, i) = s;
        }
    }
    out.small_matrix = j_apply_rows(reduced_h);
    return out;
}

double j_orthogonality_defect(const DenseMatrix& s) {
    if (s.rows() % 2 != 0 || s.cols() % 2 != 0) throw DimensionError("j_orthogonality_defect: odd dimensions");
    const DenseMatrix js = j_apply_rows(s);
    const DenseMatrix sjs = multiply_transposed(s, js);
    return max_abs_diff(sjs, SymplecticOperator(s.cols() / 2).dense());
}

double relation_residual(const LinearOperator& a, const KrylovBasis& basis) {
    if (basis.flavor == BasisFlavor::BlockJ) throw InvalidArgument("relation_residual: BlockJ has no Krylov relation");
    const std::size_t d = basis.dim();
    DenseMatrix av(basis.basis.rows(), d);
    for (std::size_t j = 0; j < d; ++j) av.set_column(j, a(basis.basis.column(j)));
    DenseMatrix diff = add(av, multiply(basis.basis, basis.small_matrix), -1.0);
    if (!basis.residual.empty()) {
        for (std::size_t i = 0; i < diff.rows(); ++i) diff(i, d - 1) -= basis.residual[i];
    }
    return diff.max_abs();
}

} // namespace hamkrylov
