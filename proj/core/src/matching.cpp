#include "resmatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "resmatch/convolve.hpp"

namespace resmatch {

std::vector<Match> candidate_matches(std::span<const InterestPoint> high,
                                     std::span<const InterestPoint> low,
                                     const CovarianceModel& cov, double d_max) {
    if (high.empty() || low.empty())
        throw ParameterError("candidate_matches: point sets must be nonempty");
    std::vector<Match> out;
    for (size_t ih = 0; ih < high.size(); ++ih) {
        if (!high[ih].descriptor) continue;
        InvariantVector vh;
        vh.v = *high[ih].descriptor;
        int best = -1;
        double best_dist = 0.0;
        for (size_t il = 0; il < low.size(); ++il) {
            if (!low[il].descriptor) continue;
            InvariantVector vl;
            vl.v = *low[il].descriptor;
            const double d = mahalanobis(vh, vl, cov);
            if (best < 0 || d < best_dist) {
                best = static_cast<int>(il);
                best_dist = d;
            }
        }
        if (best >= 0 && best_dist <= d_max) {
            out.push_back({static_cast<int>(ih), best, best_dist, MatchStatus::Candidate});
        }
    }
    return out;
}

namespace {

double sq_dist(const Point& a, const Point& b) {
    return (a.u - b.u) * (a.u - b.u) + (a.v - b.v) * (a.v - b.v);
}

Point high_point(std::span<const InterestPoint> high, const Match& m) {
    return {high[m.index_high].u, high[m.index_high].v};
}

Point low_point(std::span<const InterestPoint> low, const Match& m) {
    return {low[m.index_low].u, low[m.index_low].v};
}

} // namespace

LocalSupportResult local_support(std::span<const Match> matches,
                                 std::span<const InterestPoint> high,
                                 std::span<const InterestPoint> low, double radius_high,
                                 double radius_low, int min_support, double tolerance) {
    LocalSupportResult result;
    const double rh2 = radius_high * radius_high;
    const double rl2 = radius_low * radius_low;

    for (size_t i = 0; i < matches.size(); ++i) {
        const Match& central = matches[i];
        const Point ch = high_point(high, central);
        const Point cl = low_point(low, central);

        std::vector<int> neigh;
        for (size_t j = 0; j < matches.size(); ++j) {
            if (j == i) continue;
            if (sq_dist(high_point(high, matches[j]), ch) <= rh2 &&
                sq_dist(low_point(low, matches[j]), cl) <= rl2)
                neigh.push_back(static_cast<int>(j));
        }

        if (static_cast<int>(neigh.size()) < 1 + min_support) {
            // Too sparse to test; no basis to reject.
            Match kept = central;
            kept.status = MatchStatus::LocallySupported;
            result.matches.push_back(kept);
            ++result.vacuous;
            continue;
        }

        bool supported = false;
        for (int j : neigh) {
            const Point src[2] = {ch, high_point(high, matches[j])};
            const Point dst[2] = {cl, low_point(low, matches[j])};
            SimilarityTransform t;
            try {
                t = estimate_similarity(src, dst);
            } catch (const DegenerateError&) {
                continue;
            }
            int consistent = 0;
            for (int k : neigh) {
                if (k == j) continue;
                const Point pred = t.apply(high_point(high, matches[k]));
                if (sq_dist(pred, low_point(low, matches[k])) <= tolerance * tolerance)
                    ++consistent;
            }
            if (consistent >= min_support) {
                supported = true;
                break;
            }
        }
        if (supported) {
            Match kept = central;
            kept.status = MatchStatus::LocallySupported;
            result.matches.push_back(kept);
        }
    }
    return result;
}

double ssd_verify(const GrayImage& high_img, const GrayImage& low_img,
                  const SimilarityTransform& t, const Point& high_point, int half_window) {
    if (half_window < 0) throw ParameterError("ssd_verify: half_window must be >= 0");
    const Point low_centre = t.apply(high_point);
    const SimilarityTransform inv = t.inverse();
    // Low-image shift d maps to the high-image shift (1/h) R^T d.
    const double ip = inv.p();
    const double iq = inv.q();

    // Bounds check over the window corners before sampling.
    const double w = half_window;
    for (int cv = -1; cv <= 1; cv += 2) {
        for (int cu = -1; cu <= 1; cu += 2) {
            const double lu = low_centre.u - cu * w;
            const double lv = low_centre.v - cv * w;
            if (!low_img.bilinear_safe(lu, lv))
                throw BorderError("ssd_verify: low-image window out of bounds");
            const double hu = high_point.u - (ip * cu * w - iq * cv * w);
            const double hv = high_point.v - (iq * cu * w + ip * cv * w);
            if (!high_img.bilinear_safe(hu, hv))
                throw BorderError("ssd_verify: high-image window out of bounds");
        }
    }

    double acc = 0.0;
    for (int dv = -half_window; dv <= half_window; ++dv) {
        for (int du = -half_window; du <= half_window; ++du) {
            const double lo = low_img.bilinear(low_centre.u - du, low_centre.v - dv);
            const double hi = high_img.bilinear(high_point.u - (ip * du - iq * dv),
                                                high_point.v - (iq * du + ip * dv));
            acc += (lo - hi) * (lo - hi);
        }
    }
    const double count = (2.0 * half_window + 1.0) * (2.0 * half_window + 1.0);
    return acc / count;
}

namespace {

struct PairView {
    std::vector<Point> src; // low
    std::vector<Point> dst; // high
};

PairView gather_pairs(std::span<const Match> matches, std::span<const InterestPoint> high,
                      std::span<const InterestPoint> low) {
    PairView pairs;
    pairs.src.reserve(matches.size());
    pairs.dst.reserve(matches.size());
    for (const Match& m : matches) {
        pairs.src.push_back(low_point(low, m));
        pairs.dst.push_back(high_point(high, m));
    }
    return pairs;
}

std::vector<int> find_inliers(const PairView& pairs, const TransformModel& model, double tol) {
    std::vector<int> inliers;
    const double tol2 = tol * tol;
    for (size_t i = 0; i < pairs.src.size(); ++i) {
        Point pred;
        try {
            pred = model.apply(pairs.src[i]);
        } catch (const DegenerateError&) {
            continue;
        }
        if (sq_dist(pred, pairs.dst[i]) <= tol2) inliers.push_back(static_cast<int>(i));
    }
    return inliers;
}

TransformModel fit_subset(const PairView& pairs, std::span<const int> idx, ModelKind kind) {
    std::vector<Point> src, dst;
    src.reserve(idx.size());
    dst.reserve(idx.size());
    for (int i : idx) {
        src.push_back(pairs.src[i]);
        dst.push_back(pairs.dst[i]);
    }
    return estimate_model(src, dst, kind);
}

int adaptive_iterations(double inlier_ratio, int sample_size, double confidence, int cap) {
    if (inlier_ratio <= 0.0) return cap;
    double w = std::pow(inlier_ratio, sample_size);
    w = std::min(w, 1.0 - 1e-12);
    if (w <= 1e-12) return cap;
    const double n = std::log(1.0 - confidence) / std::log(1.0 - w);
    if (!(n > 0.0)) return 1;
    return n >= cap ? cap : static_cast<int>(std::ceil(n));
}

} // namespace

RansacResult ransac(std::span<const Match> matches, std::span<const InterestPoint> high,
                    std::span<const InterestPoint> low, ModelKind kind,
                    const RansacConfig& config) {
    const int m = minimal_matches(kind);
    const int n = static_cast<int>(matches.size());
    if (n < m) throw NoConsensusError("ransac: fewer matches than the minimal sample size");

    const PairView pairs = gather_pairs(matches, high, low);
    std::mt19937_64 rng(config.seed);

    std::vector<int> best_inliers;
    int needed = config.max_iterations;
    int iter = 0;
    for (; iter < needed && iter < config.max_iterations; ++iter) {
        // Distinct random sample.
        int sample[4];
        for (int k = 0; k < m;) {
            const int c = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            bool dup = false;
            for (int j = 0; j < k; ++j) dup |= sample[j] == c;
            if (!dup) sample[k++] = c;
        }
        TransformModel model;
        try {
            model = fit_subset(pairs, std::span<const int>(sample, m), kind);
        } catch (const DegenerateError&) {
            continue;
        } catch (const ParameterError&) {
            continue;
        }
        const double tol = config.inlier_tol * std::max(1.0, model.scale_hint());
        std::vector<int> inliers = find_inliers(pairs, model, tol);
        if (inliers.size() > best_inliers.size()) {
            best_inliers = std::move(inliers);
            needed = adaptive_iterations(static_cast<double>(best_inliers.size()) / n, m,
                                         config.confidence, config.max_iterations);
        }
    }

    if (static_cast<int>(best_inliers.size()) < m + 1)
        throw NoConsensusError("ransac: no model with more than a minimal consensus");

    // Refit on the consensus set, re-collect inliers once, refit again.
    TransformModel model = fit_subset(pairs, best_inliers, kind);
    double tol = config.inlier_tol * std::max(1.0, model.scale_hint());
    std::vector<int> inliers = find_inliers(pairs, model, tol);
    if (static_cast<int>(inliers.size()) >= m) model = fit_subset(pairs, inliers, kind);
    tol = config.inlier_tol * std::max(1.0, model.scale_hint());
    inliers = find_inliers(pairs, model, tol);
    if (static_cast<int>(inliers.size()) < m + 1)
        throw NoConsensusError("ransac: consensus collapsed during refit");

    RansacResult result;
    result.model = model;
    result.inlier_indices = std::move(inliers);
    result.iterations = iter;
    return result;
}

namespace {

ScaleMatchResult no_consensus_result(double s, int n_points, int n_initial,
                                     std::vector<Match> matches, bool degenerate) {
    ScaleMatchResult out;
    out.report.scale = s;
    out.report.n_points = n_points;
    out.report.n_initial = n_initial;
    out.report.n_inliers = 0;
    out.report.outlier_fraction = n_initial > 0 ? 1.0 : 0.0;
    for (Match& m : matches)
        if (m.status != MatchStatus::Candidate) m.status = MatchStatus::Outlier;
    out.matches = std::move(matches);
    out.detect_degenerate = degenerate;
    return out;
}

ScaleMatchResult match_at_scale_impl(const GrayImage& high_norm, const GrayImage& low_norm,
                                     double s, const MatcherConfig& config,
                                     const DetectResult& low_features,
                                     const CovarianceModel& cov) {
    const DetectResult high_features = extract_features(high_norm, config.detector, s);
    const int n_points = static_cast<int>(high_features.points.size());
    if (high_features.points.empty() || low_features.points.empty())
        return no_consensus_result(s, n_points, 0, {},
                                   high_features.too_small || low_features.too_small);

    std::vector<Match> candidates =
        candidate_matches(high_features.points, low_features.points, cov, config.d_max);
    const int n_initial = static_cast<int>(candidates.size());
    if (candidates.empty()) return no_consensus_result(s, n_points, 0, {}, false);

    LocalSupportResult supported =
        local_support(candidates, high_features.points, low_features.points,
                      config.support_radius * s, config.support_radius, config.min_support,
                      config.support_tolerance);

    // Final statuses are tracked on the candidate list.
    auto find_candidate = [&candidates](const Match& m) -> Match& {
        for (Match& c : candidates)
            if (c.index_high == m.index_high && c.index_low == m.index_low) return c;
        throw Error("match_at_scale: lost track of a match");
    };
    for (const Match& m : supported.matches) find_candidate(m).status = MatchStatus::LocallySupported;

    ScaleMatchResult out;
    out.report.scale = s;
    out.report.n_points = n_points;
    out.report.n_initial = n_initial;

    RansacResult rr;
    try {
        rr = ransac(supported.matches, high_features.points, low_features.points, config.model,
                    config.ransac);
    } catch (const NoConsensusError&) {
        return no_consensus_result(s, n_points, n_initial, std::move(candidates), false);
    }

    // SSD verification of every inlier on the scale-matched smoothed images.
    const GrayImage high_s = smooth(high_norm, s * config.detector.sigma);
    const GrayImage low_s = smooth(low_norm, config.detector.sigma);

    std::vector<int> kept;
    std::vector<double> scores;
    {
        // Verification uses the similarity mapping high -> low. For affine and
        // homography models the similarity is refit from the inlier pairs.
        SimilarityTransform high_to_low;
        if (config.model == ModelKind::Similarity) {
            high_to_low = rr.model.similarity().inverse();
        } else {
            std::vector<Point> src, dst;
            for (int idx : rr.inlier_indices) {
                const Match& m = supported.matches[idx];
                src.push_back({high_features.points[m.index_high].u,
                               high_features.points[m.index_high].v});
                dst.push_back({low_features.points[m.index_low].u,
                               low_features.points[m.index_low].v});
            }
            high_to_low = estimate_similarity(src, dst);
        }
        for (int idx : rr.inlier_indices) {
            const Match& m = supported.matches[idx];
            const Point hp{high_features.points[m.index_high].u,
                           high_features.points[m.index_high].v};
            double score;
            try {
                score = ssd_verify(high_s, low_s, high_to_low, hp, config.ssd_half_window);
            } catch (const BorderError&) {
                kept.push_back(idx); // window unverifiable, keep
                continue;
            }
            if (score <= config.ssd_cutoff) {
                kept.push_back(idx);
                scores.push_back(score);
            }
        }
    }

    const int m_min = minimal_matches(config.model);
    if (static_cast<int>(kept.size()) < m_min + 1)
        return no_consensus_result(s, n_points, n_initial, std::move(candidates), false);

    // Refit on the SSD-verified inliers.
    std::vector<Point> src, dst;
    for (int idx : kept) {
        const Match& m = supported.matches[idx];
        src.push_back({low_features.points[m.index_low].u, low_features.points[m.index_low].v});
        dst.push_back({high_features.points[m.index_high].u, high_features.points[m.index_high].v});
    }
    TransformModel final_model;
    try {
        final_model = estimate_model(src, dst, config.model);
    } catch (const DegenerateError&) {
        return no_consensus_result(s, n_points, n_initial, std::move(candidates), false);
    }

    for (int idx : kept) {
        const Match& m = supported.matches[idx];
        find_candidate(m).status = MatchStatus::Inlier;
        InlierPair pair;
        pair.high = {high_features.points[m.index_high].u, high_features.points[m.index_high].v};
        pair.low = {low_features.points[m.index_low].u, low_features.points[m.index_low].v};
        pair.scale = s;
        out.inliers.push_back(pair);
    }
    for (Match& c : candidates)
        if (c.status == MatchStatus::LocallySupported) c.status = MatchStatus::Outlier;

    out.model = final_model;
    out.report.n_inliers = static_cast<int>(kept.size());
    out.report.outlier_fraction =
        n_initial > 0 ? 1.0 - static_cast<double>(kept.size()) / n_initial : 0.0;
    out.report.estimated_factor = final_model.scale_hint();
    if (!scores.empty()) {
        double mean = 0.0;
        for (double x : scores) mean += x;
        out.report.mean_ssd = mean / static_cast<double>(scores.size());
    }
    out.matches = std::move(candidates);
    return out;
}

} // namespace

ScaleMatchResult match_at_scale(const GrayImage& high, const GrayImage& low, double s,
                                const MatcherConfig& config,
                                const std::optional<CovarianceModel>& cov) {
    const GrayImage high_norm = normalize_photometric(high);
    const GrayImage low_norm = normalize_photometric(low);
    const DetectResult low_features = extract_features(low_norm, config.detector, 1.0);

    CovarianceModel covariance = CovarianceModel::unit();
    if (cov) {
        covariance = *cov;
    } else {
        std::vector<InvariantVector> descs;
        for (const InterestPoint& p : low_features.points) {
            if (p.descriptor) {
                InvariantVector v;
                v.v = *p.descriptor;
                descs.push_back(v);
            }
        }
        if (descs.size() >= 8) covariance = estimate_covariance(descs);
    }
    return match_at_scale_impl(high_norm, low_norm, s, config, low_features, covariance);
}

OneToManyResult match_one_to_many(const GrayImage& high, const GrayImage& low,
                                  std::span<const double> scales, const MatcherConfig& config) {
    if (scales.empty()) throw ParameterError("match_one_to_many: scale list is empty");

    const GrayImage high_norm = normalize_photometric(high);
    const GrayImage low_norm = normalize_photometric(low);
    const DetectResult low_features = extract_features(low_norm, config.detector, 1.0);

    CovarianceModel covariance = CovarianceModel::unit();
    {
        std::vector<InvariantVector> descs;
        for (const InterestPoint& p : low_features.points) {
            if (p.descriptor) {
                InvariantVector v;
                v.v = *p.descriptor;
                descs.push_back(v);
            }
        }
        if (descs.size() >= 8) covariance = estimate_covariance(descs);
    }

    OneToManyResult out;
    for (double s : scales) {
        out.per_scale.push_back(
            match_at_scale_impl(high_norm, low_norm, s, config, low_features, covariance));
    }

    for (size_t i = 0; i < out.per_scale.size(); ++i) {
        const ScaleReport& r = out.per_scale[i].report;
        if (!out.per_scale[i].model || r.n_inliers <= 0) continue;
        if (!out.best_index) {
            out.best_index = static_cast<int>(i);
            continue;
        }
        const ScaleReport& b = out.per_scale[*out.best_index].report;
        bool better = false;
        if (r.n_inliers != b.n_inliers) {
            better = r.n_inliers > b.n_inliers;
        } else if (r.outlier_fraction != b.outlier_fraction) {
            better = r.outlier_fraction < b.outlier_fraction;
        } else {
            const double rs = r.mean_ssd.value_or(std::numeric_limits<double>::infinity());
            const double bs = b.mean_ssd.value_or(std::numeric_limits<double>::infinity());
            if (rs != bs) better = rs < bs;
        }
        if (better) out.best_index = static_cast<int>(i);
    }

    if (out.best_index) {
        const ScaleMatchResult& best = out.per_scale[*out.best_index];
        out.best_scale = best.report.scale;
        out.transform = best.model;
        out.estimated_factor = best.report.estimated_factor;
    }
    return out;
}

} // namespace resmatch
