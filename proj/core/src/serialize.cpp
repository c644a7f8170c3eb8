#include "resmatch/serialize.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace resmatch {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Similarity: return "similarity";
        case ModelKind::Affine: return "affine";
        case ModelKind::Homography: return "homography";
    }
    return "similarity";
}

ModelKind model_kind_from(const std::string& name, const std::string& pointer) {
    if (name == "similarity") return ModelKind::Similarity;
    if (name == "affine") return ModelKind::Affine;
    if (name == "homography") return ModelKind::Homography;
    throw SchemaError("unknown model kind '" + name + "' at " + pointer);
}

ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["command"] = c.command;
    j["inputs"] = c.inputs;
    ordered_json outputs;
    outputs["json"] = c.output_json;
    outputs["png"] = c.output_png;
    outputs["csv"] = c.output_csv;
    j["outputs"] = outputs;

    const DetectorParams& d = c.matcher.detector;
    ordered_json jd;
    jd["sigma"] = d.sigma;
    jd["sigma_tilde"] = d.sigma_tilde;
    jd["alpha"] = d.alpha;
    jd["rel_threshold"] = d.rel_threshold;
    jd["nms_radius"] = d.nms_radius;
    jd["max_points"] = d.max_points;
    j["detector"] = jd;

    const MatcherConfig& m = c.matcher;
    ordered_json jm;
    jm["d_max"] = m.d_max;
    jm["support_radius"] = m.support_radius;
    jm["min_support"] = m.min_support;
    jm["support_tolerance"] = m.support_tolerance;
    jm["model"] = model_kind_name(m.model);
    jm["inlier_tol"] = m.ransac.inlier_tol;
    jm["confidence"] = m.ransac.confidence;
    jm["max_iterations"] = m.ransac.max_iterations;
    jm["ssd_half_window"] = m.ssd_half_window;
    jm["ssd_cutoff"] = m.ssd_cutoff;
    j["matcher"] = jm;

    j["scales"] = c.scales;
    j["seed"] = m.ransac.seed;

    ordered_json jr;
    jr["factors"] = c.factors;
    jr["epsilon"] = c.epsilon;
    jr["scene"] = c.scene;
    jr["scene_size"] = c.scene_size;
    jr["scene_seed"] = c.scene_seed;
    j["repeat"] = jr;
    return j;
}

template <typename T>
T require(const ordered_json& j, const std::string& pointer) {
    const nlohmann::json_pointer<std::string> ptr(pointer);
    if (!j.contains(ptr)) throw SchemaError("missing field at " + pointer);
    try {
        return j.at(ptr).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaError("wrong type at " + pointer);
    }
}

} // namespace

std::string config_to_json(const RunConfig& config) { return config_json(config).dump(2); }

RunConfig config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    c.command = require<std::string>(j, "/command");
    c.inputs = require<std::vector<std::string>>(j, "/inputs");
    c.output_json = require<std::string>(j, "/outputs/json");
    c.output_png = require<std::string>(j, "/outputs/png");
    c.output_csv = require<std::string>(j, "/outputs/csv");

    DetectorParams& d = c.matcher.detector;
    d.sigma = require<double>(j, "/detector/sigma");
    d.sigma_tilde = require<double>(j, "/detector/sigma_tilde");
    d.alpha = require<double>(j, "/detector/alpha");
    d.rel_threshold = require<double>(j, "/detector/rel_threshold");
    d.nms_radius = require<double>(j, "/detector/nms_radius");
    d.max_points = require<int>(j, "/detector/max_points");

    MatcherConfig& m = c.matcher;
    m.d_max = require<double>(j, "/matcher/d_max");
    m.support_radius = require<double>(j, "/matcher/support_radius");
    m.min_support = require<int>(j, "/matcher/min_support");
    m.support_tolerance = require<double>(j, "/matcher/support_tolerance");
    m.model = model_kind_from(require<std::string>(j, "/matcher/model"), "/matcher/model");
    m.ransac.inlier_tol = require<double>(j, "/matcher/inlier_tol");
    m.ransac.confidence = require<double>(j, "/matcher/confidence");
    m.ransac.max_iterations = require<int>(j, "/matcher/max_iterations");
    m.ssd_half_window = require<int>(j, "/matcher/ssd_half_window");
    m.ssd_cutoff = require<double>(j, "/matcher/ssd_cutoff");

    c.scales = require<std::vector<double>>(j, "/scales");
    m.ransac.seed = require<std::uint64_t>(j, "/seed");

    c.factors = require<std::vector<double>>(j, "/repeat/factors");
    c.epsilon = require<double>(j, "/repeat/epsilon");
    c.scene = require<std::string>(j, "/repeat/scene");
    c.scene_size = require<int>(j, "/repeat/scene_size");
    c.scene_seed = require<std::uint64_t>(j, "/repeat/scene_seed");
    return c;
}

std::string detect_output_json(const RunConfig& config, std::span<const double> scales,
                               std::span<const DetectResult> detections) {
    ordered_json j;
    j["command"] = "detect";
    j["config"] = config_json(config);
    ordered_json jscales = ordered_json::array();
    for (size_t i = 0; i < detections.size(); ++i) {
        ordered_json js;
        js["scale"] = scales[i];
        js["too_small"] = detections[i].too_small;
        ordered_json pts = ordered_json::array();
        for (const InterestPoint& p : detections[i].points) {
            ordered_json jp;
            jp["u"] = p.u;
            jp["v"] = p.v;
            jp["cornerness"] = p.cornerness;
            if (p.descriptor) jp["descriptor"] = *p.descriptor;
            pts.push_back(jp);
        }
        js["points"] = pts;
        jscales.push_back(js);
    }
    j["scales"] = jscales;
    return j.dump(2);
}

std::string match_report_json(const RunConfig& config, const OneToManyResult& result) {
    ordered_json j;
    j["command"] = "match";
    j["config"] = config_json(config);
    j["seed"] = config.matcher.ransac.seed;

    ordered_json jscales = ordered_json::array();
    for (const ScaleMatchResult& r : result.per_scale) {
        ordered_json js;
        js["s"] = r.report.scale;
        if (r.report.estimated_factor)
            js["estimated_factor"] = *r.report.estimated_factor;
        else
            js["estimated_factor"] = nullptr;
        js["n_points"] = r.report.n_points;
        js["n_initial"] = r.report.n_initial;
        js["n_inliers"] = r.report.n_inliers;
        js["outlier_fraction"] = r.report.outlier_fraction;
        if (r.report.mean_ssd)
            js["mean_ssd"] = *r.report.mean_ssd;
        else
            js["mean_ssd"] = nullptr;
        jscales.push_back(js);
    }
    j["scales"] = jscales;

    if (result.best_scale)
        j["best_scale"] = *result.best_scale;
    else
        j["best_scale"] = nullptr;

    if (result.transform) {
        const TransformModel& t = *result.transform;
        ordered_json jt;
        jt["kind"] = model_kind_name(t.kind);
        if (t.kind == ModelKind::Similarity) {
            const SimilarityTransform sim = t.similarity();
            jt["h"] = sim.h;
            jt["theta_deg"] = sim.theta * 180.0 / M_PI;
            jt["a"] = sim.a;
            jt["b"] = sim.b;
        }
        jt["matrix"] = t.m;
        j["transform"] = jt;
    } else {
        j["transform"] = nullptr;
    }

    ordered_json jin = ordered_json::array();
    if (result.best_index) {
        for (const InlierPair& p : result.per_scale[*result.best_index].inliers) {
            ordered_json jp;
            jp["high_u"] = p.high.u;
            jp["high_v"] = p.high.v;
            jp["low_u"] = p.low.u;
            jp["low_v"] = p.low.v;
            jp["scale"] = p.scale;
            jin.push_back(jp);
        }
    }
    j["inliers"] = jin;
    return j.dump(2);
}

std::string sweep_csv(const RunConfig& config, std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << "# config: " << config_json(config).dump() << "\n";
    out << "factor,detector,n_ref,n_test,repeated,rate\n";
    out.setf(std::ios::fixed);
    for (const SweepRow& r : rows) {
        out.precision(3);
        out << r.factor << ',';
        out << (r.mode == DetectorMode::Standard ? "standard" : "adapted") << ',';
        out << r.n_ref << ',' << r.n_test << ',' << r.repeated << ',';
        out.precision(6);
        out << r.rate << "\n";
    }
    return out.str();
}

ParsedReport parse_match_report(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("report is not valid JSON: ") + e.what());
    }
    ParsedReport report;
    report.seed = require<std::uint64_t>(j, "/seed");

    if (!j.contains("best_scale")) throw SchemaError("missing field at /best_scale");
    if (!j.at("best_scale").is_null())
        report.best_scale = require<double>(j, "/best_scale");

    if (!j.contains("transform")) throw SchemaError("missing field at /transform");
    if (!j.at("transform").is_null()) {
        TransformModel model;
        model.kind =
            model_kind_from(require<std::string>(j, "/transform/kind"), "/transform/kind");
        const auto m = require<std::vector<double>>(j, "/transform/matrix");
        if (m.size() != 9) throw SchemaError("expected 9 entries at /transform/matrix");
        std::copy(m.begin(), m.end(), model.m.begin());
        report.transform = model;
    }

    if (!j.contains("inliers") || !j.at("inliers").is_array())
        throw SchemaError("missing or invalid array at /inliers");
    const ordered_json& jin = j.at("inliers");
    for (size_t i = 0; i < jin.size(); ++i) {
        const std::string base = "/inliers/" + std::to_string(i);
        InlierPair p;
        p.high.u = require<double>(j, base + "/high_u");
        p.high.v = require<double>(j, base + "/high_v");
        p.low.u = require<double>(j, base + "/low_u");
        p.low.v = require<double>(j, base + "/low_v");
        p.scale = require<double>(j, base + "/scale");
        report.inliers.push_back(p);
    }
    return report;
}

} // namespace resmatch
