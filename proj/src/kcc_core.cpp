#include "kcc/kcc_core.hpp"

#include <cmath>

namespace kcc {

namespace {

Mat connection_at(const SodeSystem& sys, const Vec& x, const Vec& y,
                  double t) {
    const int n = sys.dimension;
    if (sys.analytic_dg_dy) return sys.analytic_dg_dy(x, y, t);
    Mat nc = zeros2(n);
    Vec yp = y, ym = y;
    for (int j = 0; j < n; ++j) {
        const double h = fd::step1(y[j]);
        yp[j] = y[j] + h;
        ym[j] = y[j] - h;
        Vec gp = sys.eval({x, yp, t});
        Vec gm = sys.eval({x, ym, t});
        for (int i = 0; i < n; ++i) nc[i][j] = (gp[i] - gm[i]) / (2.0 * h);
        yp[j] = y[j];
        ym[j] = y[j];
    }
    return nc;
}

Mat dg_dx_at(const SodeSystem& sys, const Vec& x, const Vec& y, double t) {
    const int n = sys.dimension;
    if (sys.analytic_dg_dx) return sys.analytic_dg_dx(x, y, t);
    Mat d = zeros2(n);
    Vec xp = x, xm = x;
    for (int j = 0; j < n; ++j) {
        const double h = fd::step1(x[j]);
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        Vec gp = sys.eval({xp, y, t});
        Vec gm = sys.eval({xm, y, t});
        for (int i = 0; i < n; ++i) d[i][j] = (gp[i] - gm[i]) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return d;
}

// Berwald connection G^i_{jl} = dN^i_j/dy^l = d2 G^i / dy^j dy^l.
// With an analytic N this is a single central difference; otherwise a
// direct second-difference stencil on G avoids nesting two noisy first
// differences.
Tensor3 berwald_at(const SodeSystem& sys, const Vec& x, const Vec& y,
                   double t) {
    const int n = sys.dimension;
    Tensor3 b = zeros3(n);
    if (sys.analytic_dg_dy) {
        const double h = fd::kDeepStep;
        Vec yp = y, ym = y;
        for (int l = 0; l < n; ++l) {
            yp[l] = y[l] + h;
            ym[l] = y[l] - h;
            Mat np = sys.analytic_dg_dy(x, yp, t);
            Mat nm = sys.analytic_dg_dy(x, ym, t);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    b[i][j][l] = (np[i][j] - nm[i][j]) / (2.0 * h);
            yp[l] = y[l];
            ym[l] = y[l];
        }
        return b;
    }
    const double h = fd::kWideStep;
    Vec g0 = sys.eval({x, y, t});
    Vec yv = y;
    for (int j = 0; j < n; ++j) {
        yv[j] = y[j] + h;
        Vec gp = sys.eval({x, yv, t});
        yv[j] = y[j] - h;
        Vec gm = sys.eval({x, yv, t});
        yv[j] = y[j];
        for (int i = 0; i < n; ++i)
            b[i][j][j] = (gp[i] - 2.0 * g0[i] + gm[i]) / (h * h);
        for (int l = 0; l < j; ++l) {
            Vec acc(n, 0.0);
            for (int sj : {+1, -1})
                for (int sl : {+1, -1}) {
                    yv[j] = y[j] + sj * h;
                    yv[l] = y[l] + sl * h;
                    Vec g = sys.eval({x, yv, t});
                    for (int i = 0; i < n; ++i)
                        acc[i] += sj * sl * g[i] / (4.0 * h * h);
                    yv[j] = y[j];
                    yv[l] = y[l];
                }
            for (int i = 0; i < n; ++i) {
                b[i][j][l] = acc[i];
                b[i][l][j] = acc[i];
            }
        }
    }
    return b;
}

// dN^i_j/dx^l = d2 G^i / dy^j dx^l; same strategy as berwald_at.
Tensor3 dn_dx_at(const SodeSystem& sys, const Vec& x, const Vec& y,
                 double t) {
    const int n = sys.dimension;
    Tensor3 d = zeros3(n);
    if (sys.analytic_dg_dy) {
        const double h = fd::kDeepStep;
        Vec xp = x, xm = x;
        for (int l = 0; l < n; ++l) {
            xp[l] = x[l] + h;
            xm[l] = x[l] - h;
            Mat np = sys.analytic_dg_dy(xp, y, t);
            Mat nm = sys.analytic_dg_dy(xm, y, t);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    d[i][j][l] = (np[i][j] - nm[i][j]) / (2.0 * h);
            xp[l] = x[l];
            xm[l] = x[l];
        }
        return d;
    }
    const double h = fd::kWideStep;
    Vec xv = x, yv = y;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            Vec acc(n, 0.0);
            for (int sj : {+1, -1})
                for (int sl : {+1, -1}) {
                    yv[j] = y[j] + sj * h;
                    xv[l] = x[l] + sl * h;
                    Vec g = sys.eval({xv, yv, t});
                    for (int i = 0; i < n; ++i)
                        acc[i] += sj * sl * g[i] / (4.0 * h * h);
                    yv[j] = y[j];
                    xv[l] = x[l];
                }
            for (int i = 0; i < n; ++i) d[i][j][l] = acc[i];
        }
    return d;
}

Tensor3 torsion_at(const SodeSystem& sys, const Vec& x, const Vec& y,
                   double t) {
    const int n = sys.dimension;
    Tensor3 dndx = dn_dx_at(sys, x, y, t);
    Tensor3 gb = berwald_at(sys, x, y, t);
    Mat nc = connection_at(sys, x, y, t);
    Tensor3 b = zeros3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double v = dndx[i][j][k] - dndx[i][k][j];
                for (int m = 0; m < n; ++m)
                    v += nc[m][j] * gb[i][k][m] - nc[m][k] * gb[i][j][m];
                b[i][j][k] = v;
            }
    return b;
}

}  // namespace

Mat nonlinear_connection(const SodeSystem& sys, const Jet& jet) {
    return connection_at(sys, jet.x, jet.y, jet.t);
}

Tensor3 berwald_connection(const SodeSystem& sys, const Jet& jet) {
    return berwald_at(sys, jet.x, jet.y, jet.t);
}

Vec first_invariant(const SodeSystem& sys, const Jet& jet) {
    const int n = sys.dimension;
    Vec g = sys.eval(jet);
    Mat nc = nonlinear_connection(sys, jet);
    Vec eps(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double ny = 0.0;
        for (int j = 0; j < n; ++j) ny += nc[i][j] * jet.y[j];
        eps[i] = 2.0 * g[i] - ny;
    }
    return eps;
}

ConnectionData connection_data(const SodeSystem& sys, const Jet& jet) {
    const int n = sys.dimension;
    ConnectionData c;
    c.n_coeffs = connection_at(sys, jet.x, jet.y, jet.t);
    c.berwald = berwald_at(sys, jet.x, jet.y, jet.t);
    c.dg_dx = dg_dx_at(sys, jet.x, jet.y, jet.t);
    c.dn_dx = dn_dx_at(sys, jet.x, jet.y, jet.t);
    c.dn_dt = zeros2(n);
    if (sys.time_dependent) {
        const double h = sys.analytic_dg_dy ? fd::kDeepStep : fd::kWideStep;
        Mat np = connection_at(sys, jet.x, jet.y, jet.t + h);
        Mat nm = connection_at(sys, jet.x, jet.y, jet.t - h);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                c.dn_dt[i][j] = (np[i][j] - nm[i][j]) / (2.0 * h);
    }
    return c;
}

Mat deviation_curvature(const SodeSystem& sys, const Jet& jet,
                        const ConnectionData& c) {
    const int n = sys.dimension;
    Vec g = sys.eval(jet);
    Mat p = zeros2(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = -2.0 * c.dg_dx[i][j] + c.dn_dt[i][j];
            for (int l = 0; l < n; ++l) {
                v += -2.0 * g[l] * c.berwald[i][j][l];
                v += jet.y[l] * c.dn_dx[i][j][l];
                v += c.n_coeffs[i][l] * c.n_coeffs[l][j];
            }
            p[i][j] = v;
        }
    return p;
}

Mat deviation_curvature(const SodeSystem& sys, const Jet& jet) {
    return deviation_curvature(sys, jet, connection_data(sys, jet));
}

KccInvariants higher_invariants(const SodeSystem& sys, const Jet& jet) {
    const int n = sys.dimension;
    KccInvariants inv;
    inv.epsilon = first_invariant(sys, jet);
    inv.p_tensor = deviation_curvature(sys, jet);
    inv.p_trace = 0.0;
    for (int i = 0; i < n; ++i) inv.p_trace += inv.p_tensor[i][i];

    // dP^i_j/dy^k by central differences of the assembled P.
    auto p_at = [&](const Vec& y) {
        return deviation_curvature(sys, {jet.x, y, jet.t});
    };
    const double h = fd::kNestedStep;
    Tensor3 dp_dy = zeros3(n);
    std::vector<Mat> p_plus(n), p_minus(n);
    {
        Vec y = jet.y;
        for (int k = 0; k < n; ++k) {
            y[k] = jet.y[k] + h;
            p_plus[k] = p_at(y);
            y[k] = jet.y[k] - h;
            p_minus[k] = p_at(y);
            y[k] = jet.y[k];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    dp_dy[i][j][k] =
                        (p_plus[k][i][j] - p_minus[k][i][j]) / (2.0 * h);
        }
    }
    inv.p3 = zeros3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                inv.p3[i][j][k] = (dp_dy[i][j][k] - dp_dy[i][k][j]) / 3.0;

    // Fourth invariant via direct second differences of P (one extra
    // difference of p3 would double the cancellation noise).
    const double h2 = fd::kDeepStep;
    Tensor4 d2p = zeros4(n);  // [i][j][k][l] = d2 P^i_j / dy^k dy^l
    {
        Mat p0 = inv.p_tensor;
        Vec y = jet.y;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l <= k; ++l) {
                Mat d2;
                if (k == l) {
                    y[k] = jet.y[k] + h2;
                    Mat pp = p_at(y);
                    y[k] = jet.y[k] - h2;
                    Mat pm = p_at(y);
                    y[k] = jet.y[k];
                    d2 = zeros2(n);
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            d2[i][j] = (pp[i][j] - 2.0 * p0[i][j] + pm[i][j]) /
                                       (h2 * h2);
                } else {
                    d2 = zeros2(n);
                    for (int sk : {+1, -1})
                        for (int sl : {+1, -1}) {
                            y[k] = jet.y[k] + sk * h2;
                            y[l] = jet.y[l] + sl * h2;
                            Mat pv = p_at(y);
                            for (int i = 0; i < n; ++i)
                                for (int j = 0; j < n; ++j)
                                    d2[i][j] += sk * sl * pv[i][j] /
                                                (4.0 * h2 * h2);
                            y[k] = jet.y[k];
                            y[l] = jet.y[l];
                        }
                }
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        d2p[i][j][k][l] = d2[i][j];
                        d2p[i][j][l][k] = d2[i][j];
                    }
            }
    }
    inv.p4 = zeros4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    inv.p4[i][j][k][l] =
                        (d2p[i][j][k][l] - d2p[i][k][j][l]) / 3.0;

    // Douglas tensor: y-derivative of the Berwald connection.
    inv.douglas = zeros4(n);
    {
        Vec y = jet.y;
        for (int l = 0; l < n; ++l) {
            y[l] = jet.y[l] + h2;
            Tensor3 bp = berwald_at(sys, jet.x, y, jet.t);
            y[l] = jet.y[l] - h2;
            Tensor3 bm = berwald_at(sys, jet.x, y, jet.t);
            y[l] = jet.y[l];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        inv.douglas[i][j][k][l] =
                            (bp[i][j][k] - bm[i][j][k]) / (2.0 * h2);
        }
    }

    inv.torsion_b = torsion_at(sys, jet.x, jet.y, jet.t);

    // B^i_{jkl} = dB^i_{kl}/dy^j, stored as b4[i][j][k][l].
    inv.b4 = zeros4(n);
    {
        Vec y = jet.y;
        for (int j = 0; j < n; ++j) {
            y[j] = jet.y[j] + h2;
            Tensor3 bp = torsion_at(sys, jet.x, y, jet.t);
            y[j] = jet.y[j] - h2;
            Tensor3 bm = torsion_at(sys, jet.x, y, jet.t);
            y[j] = jet.y[j];
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        inv.b4[i][j][k][l] =
                            (bp[i][k][l] - bm[i][k][l]) / (2.0 * h2);
        }
    }
    return inv;
}

SpectralSummary spectral_summary(const Mat& p) {
    if (p.size() != 2 || p[0].size() != 2 || p[1].size() != 2)
        throw std::invalid_argument("spectral_summary requires a 2x2 matrix");
    SpectralSummary s;
    const double tr = p[0][0] + p[1][1];
    const double det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    s.trace_condition = tr;
    s.det_condition = det;
    const double disc = tr * tr - 4.0 * det;
    std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
    s.lambda_plus = (std::complex<double>(tr, 0.0) + root) / 2.0;
    s.lambda_minus = (std::complex<double>(tr, 0.0) - root) / 2.0;
    s.kappa = tr / 2.0;
    s.theta = root / 2.0;
    s.jacobi_stable = tr < 0.0 && det > 0.0;
    if (!s.jacobi_stable) {
        const double max_re =
            std::max(s.lambda_plus.real(), s.lambda_minus.real());
        s.marginal = max_re == 0.0;
    }
    return s;
}

Vec deviation_ode_rhs(const SodeSystem& sys, const Jet& jet, const Vec& xi,
                      const Vec& xi_dot) {
    const int n = sys.dimension;
    Mat nc = nonlinear_connection(sys, jet);
    Mat dgdx = dg_dx_at(sys, jet.x, jet.y, jet.t);
    Vec acc(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        for (int j = 0; j < n; ++j)
            v += -2.0 * nc[i][j] * xi_dot[j] - 2.0 * dgdx[i][j] * xi[j];
        acc[i] = v;
    }
    return acc;
}

}  // namespace kcc
