#include "resmatch/transform.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace resmatch {

SimilarityTransform SimilarityTransform::from_linear(double p, double q, double a, double b) {
    SimilarityTransform t;
    t.h = std::hypot(p, q);
    t.theta = std::atan2(q, p);
    t.a = a;
    t.b = b;
    return t;
}

double SimilarityTransform::p() const { return h * std::cos(theta); }
double SimilarityTransform::q() const { return h * std::sin(theta); }

Point SimilarityTransform::apply(const Point& x) const {
    const double cp = p();
    const double cq = q();
    return {cp * x.u - cq * x.v + a, cq * x.u + cp * x.v + b};
}

SimilarityTransform SimilarityTransform::inverse() const {
    if (!(h > 0.0)) throw ParameterError("SimilarityTransform::inverse: h must be positive");
    SimilarityTransform inv;
    inv.h = 1.0 / h;
    inv.theta = -theta;
    const double cp = inv.h * std::cos(inv.theta);
    const double cq = inv.h * std::sin(inv.theta);
    inv.a = -(cp * a - cq * b);
    inv.b = -(cq * a + cp * b);
    return inv;
}

SimilarityTransform SimilarityTransform::compose(const SimilarityTransform& inner) const {
    SimilarityTransform out;
    out.h = h * inner.h;
    out.theta = theta + inner.theta;
    const Point t = apply({inner.a, inner.b});
    out.a = t.u;
    out.b = t.v;
    return out;
}

TransformModel TransformModel::from_similarity(const SimilarityTransform& t) {
    TransformModel model;
    model.kind = ModelKind::Similarity;
    const double p = t.p();
    const double q = t.q();
    model.m = {p, -q, t.a, q, p, t.b, 0.0, 0.0, 1.0};
    return model;
}

Point TransformModel::apply(const Point& x) const {
    const double X = m[0] * x.u + m[1] * x.v + m[2];
    const double Y = m[3] * x.u + m[4] * x.v + m[5];
    if (kind != ModelKind::Homography) return {X, Y};
    const double W = m[6] * x.u + m[7] * x.v + m[8];
    if (std::abs(W) < 1e-300) throw DegenerateError("TransformModel::apply: point at infinity");
    return {X / W, Y / W};
}

SimilarityTransform TransformModel::similarity() const {
    if (kind != ModelKind::Similarity)
        throw ParameterError("TransformModel::similarity: model is not a similarity");
    return SimilarityTransform::from_linear(m[0], m[3], m[2], m[5]);
}

double TransformModel::scale_hint() const {
    return std::sqrt(std::abs(m[0] * m[4] - m[1] * m[3]));
}

int minimal_matches(ModelKind kind) {
    switch (kind) {
        case ModelKind::Similarity: return 2;
        case ModelKind::Affine: return 3;
        case ModelKind::Homography: return 4;
    }
    return 2;
}

namespace {

struct Normalization {
    double cu = 0.0, cv = 0.0, scale = 1.0;

    Point apply(const Point& x) const { return {(x.u - cu) * scale, (x.v - cv) * scale}; }
};

Normalization normalize_points(std::span<const Point> pts) {
    Normalization n;
    for (const Point& p : pts) {
        n.cu += p.u;
        n.cv += p.v;
    }
    n.cu /= static_cast<double>(pts.size());
    n.cv /= static_cast<double>(pts.size());
    double mean_dist = 0.0;
    for (const Point& p : pts) mean_dist += std::hypot(p.u - n.cu, p.v - n.cv);
    mean_dist /= static_cast<double>(pts.size());
    n.scale = mean_dist > 1e-12 ? std::sqrt(2.0) / mean_dist : 1.0;
    return n;
}

bool sources_coincident(std::span<const Point> src) {
    for (size_t i = 1; i < src.size(); ++i) {
        if (std::abs(src[i].u - src[0].u) > 1e-12 || std::abs(src[i].v - src[0].v) > 1e-12)
            return false;
    }
    return true;
}

bool sources_collinear(std::span<const Point> src) {
    if (src.size() < 3) return true;
    // Largest triangle area over pairs with the first point.
    double span = 0.0;
    for (const Point& p : src)
        span = std::max(span, std::hypot(p.u - src[0].u, p.v - src[0].v));
    if (span < 1e-12) return true;
    for (size_t i = 1; i < src.size(); ++i) {
        for (size_t j = i + 1; j < src.size(); ++j) {
            const double area = (src[i].u - src[0].u) * (src[j].v - src[0].v) -
                                (src[i].v - src[0].v) * (src[j].u - src[0].u);
            if (std::abs(area) > 1e-9 * span * span) return false;
        }
    }
    return true;
}

TransformModel estimate_affine(std::span<const Point> src, std::span<const Point> dst) {
    if (sources_collinear(src))
        throw DegenerateError("estimate_model: collinear source points for affine fit");
    const auto n = static_cast<Eigen::Index>(src.size());
    Eigen::MatrixXd A(n, 3);
    Eigen::MatrixXd B(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, 0) = src[i].u;
        A(i, 1) = src[i].v;
        A(i, 2) = 1.0;
        B(i, 0) = dst[i].u;
        B(i, 1) = dst[i].v;
    }
    const Eigen::MatrixXd sol = A.colPivHouseholderQr().solve(B); // 3x2
    TransformModel model;
    model.kind = ModelKind::Affine;
    model.m = {sol(0, 0), sol(1, 0), sol(2, 0), sol(0, 1), sol(1, 1), sol(2, 1), 0.0, 0.0, 1.0};
    return model;
}

TransformModel estimate_homography(std::span<const Point> src, std::span<const Point> dst) {
    if (sources_collinear(src))
        throw DegenerateError("estimate_model: collinear source points for homography fit");
    const Normalization ns = normalize_points(src);
    const Normalization nd = normalize_points(dst);

    const auto n = static_cast<Eigen::Index>(src.size());
    Eigen::MatrixXd A(2 * n, 9);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point s = ns.apply(src[i]);
        const Point d = nd.apply(dst[i]);
        A.row(2 * i) << s.u, s.v, 1, 0, 0, 0, -d.u * s.u, -d.u * s.v, -d.u;
        A.row(2 * i + 1) << 0, 0, 0, s.u, s.v, 1, -d.v * s.u, -d.v * s.v, -d.v;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const Eigen::VectorXd hvec = svd.matrixV().col(8);

    Eigen::Matrix3d Hn;
    Hn << hvec(0), hvec(1), hvec(2), hvec(3), hvec(4), hvec(5), hvec(6), hvec(7), hvec(8);

    Eigen::Matrix3d Ts, Td;
    Ts << ns.scale, 0, -ns.scale * ns.cu, 0, ns.scale, -ns.scale * ns.cv, 0, 0, 1;
    Td << nd.scale, 0, -nd.scale * nd.cu, 0, nd.scale, -nd.scale * nd.cv, 0, 0, 1;
    Eigen::Matrix3d H = Td.inverse() * Hn * Ts;

    if (std::abs(H.determinant()) < 1e-12 * std::pow(H.norm(), 3))
        throw DegenerateError("estimate_model: homography is rank deficient");
    if (std::abs(H(2, 2)) > 1e-12) H /= H(2, 2);

    TransformModel model;
    model.kind = ModelKind::Homography;
    model.m = {H(0, 0), H(0, 1), H(0, 2), H(1, 0), H(1, 1), H(1, 2), H(2, 0), H(2, 1), H(2, 2)};
    return model;
}

} // namespace

SimilarityTransform estimate_similarity(std::span<const Point> src, std::span<const Point> dst) {
    if (src.size() != dst.size())
        throw ParameterError("estimate_similarity: source/target size mismatch");
    if (src.size() < 2) throw ParameterError("estimate_similarity: at least 2 pairs required");
    if (sources_coincident(src))
        throw DegenerateError("estimate_similarity: source points are coincident");

    // Normal equations of the linear system rows
    //   [u -v 1 0; v u 0 1] [p q a b]^T = [u'; v']
    // accumulated in closed form.
    double n = 0, su = 0, sv = 0, suu = 0;
    double spp = 0, sqq = 0, sa = 0, sb = 0;
    for (size_t i = 0; i < src.size(); ++i) {
        const double u = src[i].u, v = src[i].v;
        const double x = dst[i].u, y = dst[i].v;
        n += 1.0;
        su += u;
        sv += v;
        suu += u * u + v * v;
        spp += u * x + v * y;
        sqq += u * y - v * x;
        sa += x;
        sb += y;
    }
    // Solve the symmetric 4x4 system via Eigen for clarity.
    Eigen::Matrix4d M;
    M << suu, 0, su, sv, 0, suu, -sv, su, su, -sv, n, 0, sv, su, 0, n;
    Eigen::Vector4d rhs(spp, sqq, sa, sb);
    const Eigen::Vector4d sol = M.ldlt().solve(rhs);
    return SimilarityTransform::from_linear(sol(0), sol(1), sol(2), sol(3));
}

TransformModel estimate_model(std::span<const Point> src, std::span<const Point> dst,
                              ModelKind kind) {
    if (src.size() != dst.size()) throw ParameterError("estimate_model: size mismatch");
    if (static_cast<int>(src.size()) < minimal_matches(kind))
        throw ParameterError("estimate_model: not enough correspondences");
    switch (kind) {
        case ModelKind::Similarity:
            return TransformModel::from_similarity(estimate_similarity(src, dst));
        case ModelKind::Affine: return estimate_affine(src, dst);
        case ModelKind::Homography: return estimate_homography(src, dst);
    }
    throw ParameterError("estimate_model: unknown model kind");
}

} // namespace resmatch
