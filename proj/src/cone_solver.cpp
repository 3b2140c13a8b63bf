#include "srdoa/cone_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace srdoa {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Eigen::VectorXd svec(const Eigen::MatrixXd& S) {
    const int d = static_cast<int>(S.rows());
    Eigen::VectorXd out(svec_len(d));
    int i = 0;
    for (int c = 0; c < d; ++c)
        for (int r = 0; r <= c; ++r)
            out(i++) = S(r, c) * (r != c ? kSq2 : 1.0);
    return out;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v, int d) {
    Eigen::MatrixXd S(d, d);
    int i = 0;
    for (int c = 0; c < d; ++c)
        for (int r = 0; r <= c; ++r) {
            if (r == c) {
                S(r, c) = v(i);
            } else {
                S(r, c) = v(i) / kSq2;
                S(c, r) = S(r, c);
            }
            ++i;
        }
    return S;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::NearOptimal: return "near_optimal";
        default: return "failed";
    }
}

bool cone_inside(const ConeSpec& cone, const Eigen::VectorXd& x, double margin) {
    switch (cone.kind) {
        case ConeKind::NonNeg:
            return (x.array() > margin).all();
        case ConeKind::Soc:
            return x(0) > x.tail(x.size() - 1).norm() + margin;
        default: {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(smat(x, cone.size),
                                                              Eigen::EigenvaluesOnly);
            return es.eigenvalues().minCoeff() > margin;
        }
    }
}

namespace {

// ------------------------------------------------------------------ cones

Eigen::VectorXd cone_identity(const ConeSpec& cone) {
    if (cone.kind == ConeKind::NonNeg) return Eigen::VectorXd::Ones(cone.size);
    if (cone.kind == ConeKind::Soc) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(cone.size);
        e(0) = 1.0;
        return e;
    }
    return svec(Eigen::MatrixXd::Identity(cone.size, cone.size));
}

// Largest alpha with x + alpha dx still in the closed cone (x strictly
// inside); +inf when unbounded.
double step_to_boundary(const ConeSpec& cone, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& dx) {
    switch (cone.kind) {
        case ConeKind::NonNeg: {
            double best = kInf;
            for (int i = 0; i < x.size(); ++i)
                if (dx(i) < 0.0) best = std::min(best, -x(i) / dx(i));
            return best;
        }
        case ConeKind::Soc: {
            const auto x1 = x.tail(x.size() - 1);
            const auto d1 = dx.tail(dx.size() - 1);
            const double a = dx(0) * dx(0) - d1.squaredNorm();
            const double bq = 2.0 * (x(0) * dx(0) - x1.dot(d1));
            const double cq = x(0) * x(0) - x1.squaredNorm();
            double best = kInf;
            const double disc = bq * bq - 4.0 * a * cq;
            if (std::abs(a) < 1e-300) {
                if (bq < 0.0) best = -cq / bq;
            } else if (disc >= 0.0) {
                const double sd = std::sqrt(disc);
                for (double r : {(-bq - sd) / (2.0 * a), (-bq + sd) / (2.0 * a)})
                    if (r > 0.0) best = std::min(best, r);
            }
            if (dx(0) < 0.0) best = std::min(best, -x(0) / dx(0));
            return best;
        }
        default: {
            const int d = cone.size;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(smat(x, d));
            if (es.info() != Eigen::Success) return 0.0;
            Eigen::VectorXd ev = es.eigenvalues();
            const double floor_ev = 1e-14 * std::max(ev(d - 1), 1e-300);
            ev = ev.cwiseMax(floor_ev);
            // X ~= L L' with L = Q diag(sqrt(ev)); Li = L^{-1}
            const Eigen::MatrixXd Li =
                ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(
                Li * smat(dx, d) * Li.transpose(), Eigen::EigenvaluesOnly);
            if (es2.info() != Eigen::Success) return 0.0;
            const double lm = es2.eigenvalues().minCoeff();
            return lm >= -1e-300 ? kInf : -1.0 / lm;
        }
    }
}

Eigen::VectorXd jordan_prod(const ConeSpec& cone,
                            const Eigen::Ref<const Eigen::VectorXd>& u,
                            const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (cone.kind == ConeKind::NonNeg) return u.cwiseProduct(v);
    if (cone.kind == ConeKind::Soc) {
        Eigen::VectorXd out(cone.size);
        out(0) = u.dot(v);
        out.tail(cone.size - 1) =
            u(0) * v.tail(cone.size - 1) + v(0) * u.tail(cone.size - 1);
        return out;
    }
    const Eigen::MatrixXd U = smat(u, cone.size);
    const Eigen::MatrixXd V = smat(v, cone.size);
    return svec(0.5 * (U * V + V * U));
}

// Solve lam o g = d for g; lam is the NT scaled point (diagonal for PSD).
Eigen::VectorXd jordan_div(const ConeSpec& cone,
                           const Eigen::Ref<const Eigen::VectorXd>& lam,
                           const Eigen::Ref<const Eigen::VectorXd>& d) {
    if (cone.kind == ConeKind::NonNeg) return d.cwiseQuotient(lam);
    if (cone.kind == ConeKind::Soc) {
        const int n = cone.size;
        const auto l1 = lam.tail(n - 1);
        const auto d1 = d.tail(n - 1);
        const double det = lam(0) * lam(0) - l1.squaredNorm();
        Eigen::VectorXd g(n);
        g(0) = (lam(0) * d(0) - l1.dot(d1)) / det;
        g.tail(n - 1) = (d1 - g(0) * l1) / lam(0);
        return g;
    }
    const int dd = cone.size;
    Eigen::VectorXd lv(dd);
    for (int i = 0; i < dd; ++i) lv(i) = lam(svec_index(i, i));
    const Eigen::MatrixXd D = smat(d, dd);
    Eigen::MatrixXd G(dd, dd);
    for (int c = 0; c < dd; ++c)
        for (int r = 0; r < dd; ++r) G(r, c) = 2.0 * D(r, c) / (lv(r) + lv(c));
    return svec(G);
}

// ------------------------------------------------------------------ scaling

struct Scaling {
    const ConeSpec* cone = nullptr;
    // NonNeg
    Eigen::VectorXd w;
    // Soc
    double soc_beta = 0.0;
    Eigen::VectorXd v;
    // Psd
    Eigen::MatrixXd R, Rinv;

    Eigen::VectorXd lam;  // scaled point, W^{-1} x = W' z

    // Returns false when the factorization degenerates (iterate at the
    // numerical boundary).
    bool init(const ConeSpec& cn, const Eigen::Ref<const Eigen::VectorXd>& x,
              const Eigen::Ref<const Eigen::VectorXd>& z) {
        cone = &cn;
        switch (cn.kind) {
            case ConeKind::NonNeg: {
                w = (x.cwiseQuotient(z)).cwiseSqrt();
                lam = x.cwiseProduct(z).cwiseSqrt();
                return w.allFinite() && lam.allFinite();
            }
            case ConeKind::Soc: {
                const int n = cn.size;
                const double rx2 = x(0) * x(0) - x.tail(n - 1).squaredNorm();
                const double rz2 = z(0) * z(0) - z.tail(n - 1).squaredNorm();
                const double rx = std::sqrt(std::max(rx2, 1e-300));
                const double rz = std::sqrt(std::max(rz2, 1e-300));
                const Eigen::VectorXd xb = x / rx;
                Eigen::VectorXd zb = z / rz;
                const double gam = std::sqrt((1.0 + xb.dot(zb)) / 2.0);
                zb.tail(n - 1) = -zb.tail(n - 1);  // J zb
                Eigen::VectorXd wb = (xb + zb) / (2.0 * gam);
                v = wb;
                v(0) += 1.0;
                v /= std::sqrt(2.0 * (wb(0) + 1.0));
                soc_beta = std::sqrt(rx / rz);
                lam = inv_apply(x);
                return v.allFinite() && lam.allFinite();
            }
            default: {
                const int d = cn.size;
                const Eigen::MatrixXd X = smat(x, d);
                const Eigen::MatrixXd Z = smat(z, d);
                Eigen::LLT<Eigen::MatrixXd> llt(X);
                if (llt.info() != Eigen::Success) return false;
                const Eigen::MatrixXd Lx = llt.matrixL();
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lx.transpose() * Z * Lx);
                if (es.info() != Eigen::Success) return false;
                Eigen::VectorXd lamv = es.eigenvalues().cwiseMax(1e-300);
                const Eigen::VectorXd lq = lamv.array().pow(0.25).matrix();
                R = Lx * es.eigenvectors() * lq.cwiseInverse().asDiagonal();
                const Eigen::MatrixXd Linv = Lx.triangularView<Eigen::Lower>().solve(
                    Eigen::MatrixXd::Identity(d, d));
                Rinv = lq.asDiagonal() * es.eigenvectors().transpose() * Linv;
                lam = svec(Eigen::MatrixXd(lamv.cwiseSqrt().asDiagonal()));
                return R.allFinite() && Rinv.allFinite();
            }
        }
    }

    // W s
    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& s) const {
        switch (cone->kind) {
            case ConeKind::NonNeg: return w.cwiseProduct(s);
            case ConeKind::Soc: {
                Eigen::VectorXd js = s;
                js.tail(js.size() - 1) = -js.tail(js.size() - 1);
                return soc_beta * (2.0 * v * v.dot(s) - js);
            }
            default:
                return svec(R * smat(s, cone->size) * R.transpose());
        }
    }

    // W' s (differs from W only for PSD)
    Eigen::VectorXd t_apply(const Eigen::Ref<const Eigen::VectorXd>& s) const {
        if (cone->kind == ConeKind::Psd)
            return svec(R.transpose() * smat(s, cone->size) * R);
        return apply(s);
    }

    // W^{-1} s
    Eigen::VectorXd inv_apply(const Eigen::Ref<const Eigen::VectorXd>& s) const {
        switch (cone->kind) {
            case ConeKind::NonNeg: return s.cwiseQuotient(w);
            case ConeKind::Soc: {
                Eigen::VectorXd jv = v;
                jv.tail(jv.size() - 1) = -jv.tail(jv.size() - 1);
                Eigen::VectorXd js = s;
                js.tail(js.size() - 1) = -js.tail(js.size() - 1);
                return (2.0 * jv * jv.dot(s) - js) / soc_beta;
            }
            default:
                return svec(Rinv * smat(s, cone->size) * Rinv.transpose());
        }
    }

    // W^{-T} s
    Eigen::VectorXd inv_t_apply(const Eigen::Ref<const Eigen::VectorXd>& s) const {
        if (cone->kind == ConeKind::Psd)
            return svec(Rinv.transpose() * smat(s, cone->size) * Rinv);
        return inv_apply(s);
    }
};

// Sparse row entries split per cone block; PSD entries converted to matrix
// coordinates so W' rows can be formed by rank-1 outer products of R rows.
struct RowBlock {
    struct PsdEntry { int r, c; double v; };           // v = matrix value
    std::vector<std::pair<int, double>> vec_nz;        // local idx within block
    std::vector<PsdEntry> psd_nz;
};

}  // namespace

SolveResult solve_conic(const ConicProblem& prob, double tol, int max_iter,
                        std::ostream* log) {
    const int n = prob.num_vars();
    const int m = static_cast<int>(prob.A.size());
    if (prob.c.size() != n)
        throw std::invalid_argument("solve_conic: objective length mismatch");
    if (prob.b.size() != m)
        throw std::invalid_argument("solve_conic: rhs length mismatch");

    const int ncones = static_cast<int>(prob.cones.size());
    std::vector<int> off(ncones + 1, 0);
    for (int k = 0; k < ncones; ++k) off[k + 1] = off[k] + prob.cones[k].vlen();

    int rho = 0;
    for (const auto& cn : prob.cones) rho += cn.degree();

    // Split each row into per-cone blocks once.
    std::vector<std::vector<RowBlock>> rowblocks(m, std::vector<RowBlock>(ncones));
    for (int i = 0; i < m; ++i) {
        for (const auto& [idx, val] : prob.A[i].nz) {
            if (idx < 0 || idx >= n)
                throw std::invalid_argument("solve_conic: row index out of range");
            int k = 0;
            while (idx >= off[k + 1]) ++k;
            const int loc = idx - off[k];
            if (prob.cones[k].kind == ConeKind::Psd) {
                // invert svec index -> (r, c), r <= c
                int c = 0;
                while (svec_index(0, c + 1) <= loc && c + 1 < prob.cones[k].size) ++c;
                const int r = loc - svec_index(0, c);
                const double mv = (r == c) ? val : val / kSq2;
                rowblocks[i][k].psd_nz.push_back({r, c, mv});
            } else {
                rowblocks[i][k].vec_nz.emplace_back(loc, val);
            }
        }
    }

    auto dot_row = [&](const SparseRow& row, const Eigen::VectorXd& xv) {
        double s = 0.0;
        for (const auto& [idx, val] : row.nz) s += val * xv(idx);
        return s;
    };
    auto A_mul = [&](const Eigen::VectorXd& xv) {
        Eigen::VectorXd out(m);
        for (int i = 0; i < m; ++i) out(i) = dot_row(prob.A[i], xv);
        return out;
    };
    auto At_mul = [&](const Eigen::VectorXd& yv) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < m; ++i)
            for (const auto& [idx, val] : prob.A[i].nz) out(idx) += val * yv(i);
        return out;
    };

    Eigen::VectorXd x(n), z(n), e(n);
    for (int k = 0; k < ncones; ++k) {
        const Eigen::VectorXd id = cone_identity(prob.cones[k]);
        x.segment(off[k], id.size()) = id;
        e.segment(off[k], id.size()) = id;
    }
    z = x;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

    const double nb = 1.0 + prob.b.norm();
    const double nc = 1.0 + prob.c.norm();

    double pres = kInf, dres = kInf, relgap = kInf;
    int it = 0;

    // Degenerate instances can stall and then drift; keep the best iterate
    // seen so a late wobble does not discard an essentially converged point.
    Eigen::VectorXd xb = x, yb = y, zb = z;
    double bp = kInf, bd = kInf, bg = kInf, best_score = kInf;

    std::vector<Scaling> scals(ncones);
    Eigen::MatrixXd B(m, n), S(m, m), Tbuf;
    Eigen::LLT<Eigen::MatrixXd> schur;

    auto percone = [&](auto&& f, const Eigen::VectorXd& a, const Eigen::VectorXd& bv) {
        Eigen::VectorXd out(n);
        for (int k = 0; k < ncones; ++k) {
            const int o = off[k], l = prob.cones[k].vlen();
            out.segment(o, l) = f(prob.cones[k], a.segment(o, l), bv.segment(o, l));
        }
        return out;
    };
    auto apply_all = [&](auto&& method, const Eigen::VectorXd& s) {
        Eigen::VectorXd out(n);
        for (int k = 0; k < ncones; ++k) {
            const int o = off[k], l = prob.cones[k].vlen();
            out.segment(o, l) = (scals[k].*method)(s.segment(o, l));
        }
        return out;
    };
    auto min_step = [&](const Eigen::VectorXd& pt, const Eigen::VectorXd& dir) {
        double a = 1.0;
        for (int k = 0; k < ncones; ++k) {
            const int o = off[k], l = prob.cones[k].vlen();
            a = std::min(a, step_to_boundary(prob.cones[k], pt.segment(o, l),
                                             dir.segment(o, l)));
        }
        return a;
    };

    for (it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd rp = prob.b - A_mul(x);
        const Eigen::VectorXd rd = prob.c - At_mul(y) - z;
        const double gap = x.dot(z);
        const double mu = gap / rho;
        const double pobj = prob.c.dot(x);
        const double dobj = prob.b.dot(y);
        relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        pres = rp.norm() / nb;
        dres = rd.norm() / nc;
        if (log)
            *log << "  it " << it << " pres " << pres << " dres " << dres
                 << " relgap " << relgap << " mu " << mu << "\n";
        if (pres < tol && dres < tol && (relgap < tol || mu / (1.0 + std::abs(pobj)) < tol))
            return {SolveStatus::Optimal, x, y, z, it, pres, dres, relgap, pobj};
        const double score = std::max({pres, dres, relgap});
        if (score < best_score) {
            best_score = score;
            xb = x;
            yb = y;
            zb = z;
            bp = pres;
            bd = dres;
            bg = relgap;
        }

        bool scale_ok = true;
        for (int k = 0; k < ncones && scale_ok; ++k) {
            const int o = off[k], l = prob.cones[k].vlen();
            scale_ok = scals[k].init(prob.cones[k], x.segment(o, l), z.segment(o, l));
        }
        if (!scale_ok) break;  // numerical precision exhausted at this iterate

        Eigen::VectorXd lam(n);
        for (int k = 0; k < ncones; ++k)
            lam.segment(off[k], prob.cones[k].vlen()) = scals[k].lam;

        // B rows = W' a_i, exploiting row sparsity per cone block.
        B.setZero();
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < ncones; ++k) {
                const RowBlock& rb = rowblocks[i][k];
                const int o = off[k];
                const ConeSpec& cn = prob.cones[k];
                if (cn.kind == ConeKind::Psd) {
                    if (rb.psd_nz.empty()) continue;
                    const int d = cn.size;
                    Tbuf.setZero(d, d);
                    // W'(a) = svec(R' smat(a) R); smat(a) = sum v (e_r e_c' + e_c e_r')
                    for (const auto& en : rb.psd_nz) {
                        Tbuf.noalias() +=
                            en.v * (scals[k].R.row(en.r).transpose() * scals[k].R.row(en.c));
                        if (en.r != en.c)
                            Tbuf.noalias() += en.v * (scals[k].R.row(en.c).transpose() *
                                                      scals[k].R.row(en.r));
                    }
                    int p = 0;
                    for (int c = 0; c < d; ++c)
                        for (int r = 0; r <= c; ++r)
                            B(i, o + p++) = Tbuf(r, c) * (r != c ? kSq2 : 1.0);
                } else if (cn.kind == ConeKind::Soc) {
                    if (rb.vec_nz.empty()) continue;
                    double vdot = 0.0;
                    for (const auto& [loc, val] : rb.vec_nz) vdot += scals[k].v(loc) * val;
                    B.row(i).segment(o, cn.size) +=
                        (2.0 * scals[k].soc_beta * vdot) * scals[k].v.transpose();
                    for (const auto& [loc, val] : rb.vec_nz)
                        B(i, o + loc) -= scals[k].soc_beta * (loc == 0 ? val : -val);
                } else {
                    for (const auto& [loc, val] : rb.vec_nz)
                        B(i, o + loc) += scals[k].w(loc) * val;
                }
            }
        }

        S.setZero();
        S.selfadjointView<Eigen::Lower>().rankUpdate(B);
        S.diagonal().array() += 1e-13 * std::max(1.0, S.trace() / m);
        schur.compute(S);
        if (schur.info() != Eigen::Success) {
            S.diagonal().array() += 1e-9 * S.trace() / m;
            schur.compute(S);
            if (schur.info() != Eigen::Success) break;
        }

        const Eigen::VectorXd wtrd = apply_all(&Scaling::t_apply, rd);

        auto kkt = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx,
                       Eigen::VectorXd& dy, Eigen::VectorXd& dz) {
            const Eigen::VectorXd g = percone(jordan_div, lam, rc);
            const Eigen::VectorXd rhs = rp + A_mul(apply_all(&Scaling::apply, wtrd - g));
            dy = schur.solve(rhs);
            dz = rd - At_mul(dy);
            dx = apply_all(&Scaling::apply, g - apply_all(&Scaling::t_apply, dz));
        };

        const Eigen::VectorXd lamlam = percone(jordan_prod, lam, lam);

        Eigen::VectorXd dxa, dya, dza;
        kkt(-lamlam, dxa, dya, dza);
        double ap = min_step(x, dxa);
        double ad = min_step(z, dza);
        const double mua = (x + ap * dxa).dot(z + ad * dza) / rho;
        const double sig = std::pow(std::clamp(mua / mu, 0.0, 1.0), 3.0);

        const Eigen::VectorXd corr = percone(
            jordan_prod, apply_all(&Scaling::inv_apply, dxa),
            apply_all(&Scaling::t_apply, dza));
        const Eigen::VectorXd rc = sig * mu * e - lamlam - corr;

        Eigen::VectorXd dx, dy, dz;
        kkt(rc, dx, dy, dz);
        ap = min_step(x, dx);
        ad = min_step(z, dz);
        const double al = 0.99 * std::min(ap, ad);

        const Eigen::VectorXd xn = x + al * dx;
        const Eigen::VectorXd yn = y + al * dy;
        const Eigen::VectorXd zn = z + al * dz;
        if (!xn.allFinite() || !yn.allFinite() || !zn.allFinite()) break;
        x = xn;
        y = yn;
        z = zn;
    }

    const bool near = bp < 1e-5 && bd < 1e-5 && bg < 1e-5;
    return {near ? SolveStatus::NearOptimal : SolveStatus::Failed,
            xb, yb, zb, it, bp, bd, bg, prob.c.dot(xb)};
}

}  // namespace srdoa
