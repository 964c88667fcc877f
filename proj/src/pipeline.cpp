// SPDX-License-Identifier: Apache-2.0
#include "biokey/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "biokey/fusion.hpp"
#include "biokey/image_io.hpp"
#include "biokey/imaging.hpp"
#include "parse.hpp"

namespace biokey {

namespace {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;

struct Field {
    std::string key;
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, const std::string&)> set;
};

void require(bool ok, const std::string& key, const std::string& rule) {
    if (!ok) throw InvalidParameter("config '" + key + "': value must be " + rule);
}

Field real(std::string key, double PipelineConfig::*member, std::function<bool(double)> ok, std::string rule) {
    return {key, [member](const PipelineConfig& c) { return format_double(c.*member); },
            [=](PipelineConfig& c, const std::string& v) {
                const double d = parse_double(key, v);
                require(ok(d), key, rule);
                c.*member = d;
            }};
}

Field auto_real(std::string key, std::optional<double> PipelineConfig::*member) {
    return {key,
            [member](const PipelineConfig& c) { return (c.*member) ? format_double(*(c.*member)) : std::string("auto"); },
            [=](PipelineConfig& c, const std::string& v) {
                if (detail::trim(v) == "auto") {
                    c.*member = std::nullopt;
                    return;
                }
                const double d = parse_double(key, v);
                require(d >= 0.0, key, "'auto' or >= 0");
                c.*member = d;
            }};
}

Field integer(std::string key, int PipelineConfig::*member, int lo, int hi) {
    return {key, [member](const PipelineConfig& c) { return std::to_string(c.*member); },
            [=](PipelineConfig& c, const std::string& v) {
                const int i = parse_int<int>(key, v);
                require(i >= lo && i <= hi, key, "in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
                c.*member = i;
            }};
}

const std::vector<Field>& fields() {
    using C = PipelineConfig;
    auto positive = [](double d) { return d > 0.0; };
    auto unit_open = [](double d) { return d > 0.0 && d < 1.0; };
    static const std::vector<Field> table = {
        {"seed", [](const C& c) { return std::to_string(c.seed); },
         [](C& c, const std::string& v) { c.seed = parse_int<std::uint64_t>("seed", v); }},
        {"key_bits", [](const C& c) { return std::to_string(c.key_bits); },
         [](C& c, const std::string& v) {
             const auto k = parse_int<std::size_t>("key_bits", v);
             require(k >= 1 && k <= (1u << 20), "key_bits", "in [1, 1048576]");
             c.key_bits = k;
         }},
        auto_real("fp.wiener_noise", &C::fp_wiener_noise),
        auto_real("fp.segment_threshold", &C::fp_segment_threshold),
        real("fp.segment_threshold_factor", &C::fp_segment_threshold_factor, [](double d) { return d >= 0.0; }, ">= 0"),
        real("fp.smoothing_sigma", &C::fp_smoothing_sigma, positive, "> 0"),
        real("fp.gabor_f0", &C::fp_gabor_f0, [](double d) { return d > 0.0 && d <= 0.5; }, "in (0, 0.5]"),
        real("fp.gabor_sigma_x", &C::fp_gabor_sigma_x, positive, "> 0"),
        real("fp.gabor_sigma_y", &C::fp_gabor_sigma_y, positive, "> 0"),
        real("iris.canny_sigma", &C::iris_canny_sigma, positive, "> 0"),
        real("iris.canny_high_percentile", &C::iris_canny_high_percentile, unit_open, "in (0, 1)"),
        real("iris.canny_low_ratio", &C::iris_canny_low_ratio, unit_open, "in (0, 1)"),
        integer("iris.pupil_r_min", &C::iris_pupil_r_min, 1, 100000),
        integer("iris.pupil_r_max", &C::iris_pupil_r_max, 2, 100000),
        integer("iris.iris_r_min", &C::iris_r_min, 1, 100000),
        integer("iris.iris_r_max", &C::iris_r_max, 2, 100000),
        integer("iris.centre_tolerance", &C::iris_centre_tolerance, 0, 100000),
        real("iris.min_circle_support", &C::iris_min_circle_support, [](double d) { return d >= 0.0 && d <= 1.0; },
             "in [0, 1]"),
        real("iris.eyelash_threshold", &C::iris_eyelash_threshold, [](double d) { return d >= 0.0 && d <= 255.0; },
             "in [0, 255]"),
        real("iris.reflection_threshold", &C::iris_reflection_threshold,
             [](double d) { return d >= 0.0 && d <= 256.0; }, "in [0, 256]"),
        real("iris.eyelid_min_fraction", &C::iris_eyelid_min_fraction, positive, "> 0"),
        integer("iris.radial_res", &C::iris_radial_res, 2, 4096),
        integer("iris.angular_res", &C::iris_angular_res, 2, 4096),
        real("iris.log_gabor_f0", &C::iris_log_gabor_f0, [](double d) { return d > 0.0 && d <= 0.5; }, "in (0, 0.5]"),
        real("iris.log_gabor_sigma_ratio", &C::iris_log_gabor_sigma_ratio, unit_open, "in (0, 1)"),
        {"fusion.big_m", [](const C& c) { return std::to_string(c.fusion_big_m); },
         [](C& c, const std::string& v) {
             const auto m = parse_int<std::uint64_t>("fusion.big_m", v);
             require(m >= 1 && m <= (1ULL << 52), "fusion.big_m", "in [1, 2^52]");
             c.fusion_big_m = m;
         }},
        real("fusion.quant_scale", &C::fusion_quant_scale, [](double d) { return d > 0.0 && d <= 1e12; },
             "in (0, 1e12]"),
        integer("fusion.bit_width", &C::fusion_bit_width, 1, 32),
    };
    return table;
}

const Field& field(const std::string& key) {
    for (const auto& f : fields())
        if (f.key == key) return f;
    throw InvalidParameter("unknown config key '" + key + "'");
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) { field(key).set(*this, value); }

std::string PipelineConfig::get(const std::string& key) const { return field(key).get(*this); }

std::vector<std::string> PipelineConfig::keys() {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
}

void PipelineConfig::validate() const {
    // re-run every single-key check, then the cross-key ones
    PipelineConfig probe;
    for (const auto& f : fields()) f.set(probe, f.get(*this));
    require(iris_pupil_r_min < iris_pupil_r_max, "iris.pupil_r_min", "< iris.pupil_r_max");
    require(iris_r_min < iris_r_max, "iris.iris_r_min", "< iris.iris_r_max");
    require(iris_pupil_r_max < iris_r_max, "iris.pupil_r_max", "< iris.iris_r_max");
}

PipelineConfig PipelineConfig::parse(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidParameter("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        cfg.set(std::string(detail::trim(body.substr(0, eq))), std::string(detail::trim(body.substr(eq + 1))));
    }
    cfg.validate();
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string PipelineConfig::serialize() const {
    std::string out;
    for (const auto& f : fields()) out += f.key + " = " + f.get(*this) + "\n";
    return out;
}

iris::LocalizeParams PipelineConfig::localize_params() const {
    iris::LocalizeParams p;
    p.pupil_r_min = iris_pupil_r_min;
    p.pupil_r_max = iris_pupil_r_max;
    p.iris_r_min = iris_r_min;
    p.iris_r_max = iris_r_max;
    p.centre_tolerance = iris_centre_tolerance;
    p.min_circle_support = iris_min_circle_support;
    p.canny_sigma = iris_canny_sigma;
    p.canny_percentile = iris_canny_high_percentile;
    p.canny_low_ratio = iris_canny_low_ratio;
    return p;
}

iris::NoiseParams PipelineConfig::noise_params() const {
    iris::NoiseParams p;
    p.eyelash_threshold = iris_eyelash_threshold;
    p.reflection_threshold = iris_reflection_threshold;
    p.eyelid_min_fraction = iris_eyelid_min_fraction;
    p.canny_sigma = iris_canny_sigma;
    p.canny_percentile = iris_canny_high_percentile;
    p.canny_low_ratio = iris_canny_low_ratio;
    return p;
}

fingerprint::EnhanceParams PipelineConfig::enhance_params() const {
    return {fp_gabor_f0, fp_gabor_sigma_x, fp_gabor_sigma_y, fp_smoothing_sigma};
}

// ---------------------------------------------------------------------------

namespace {

template <typename F>
auto run_stage(RunReport& report, const char* name, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        auto result = fn();
        report.timings.push_back(
            {name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
        return result;
    } catch (const IoError& e) {
        throw IoError(std::string("stage ") + name + ": " + e.what());
    } catch (const Error& e) {
        throw StageError(std::string("stage ") + name + ": " + e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorCode::Internal, std::string("stage ") + name + ": " + e.what());
    }
}

class Dumper {
public:
    Dumper(const std::optional<std::string>& dir, RunReport& report) : report_(report) {
        if (dir) {
            std::error_code ec;
            std::filesystem::create_directories(*dir, ec);
            if (ec) throw IoError("cannot create dump directory '" + *dir + "': " + ec.message());
            dir_ = std::filesystem::path(*dir);
        }
    }

    bool enabled() const { return dir_.has_value(); }

    template <typename Image>
    void image(const std::string& name, const Image& img) {
        if (!dir_) return;
        write_pgm(path(name), img);
    }

    void text(const std::string& name, const std::string& body) {
        if (!dir_) return;
        const auto p = path(name);
        std::ofstream out(p, std::ios::binary);
        out << body;
        if (!out) throw IoError("failed writing '" + p + "'");
    }

private:
    std::string path(const std::string& name) {
        auto p = (*dir_ / name).string();
        report_.artifacts.push_back(p);
        return p;
    }

    std::optional<std::filesystem::path> dir_;
    RunReport& report_;
};

GrayImage mask_image(const fingerprint::SegmentationMask& mask) {
    GrayImage img(mask.image_width(), mask.image_height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) img.at(x, y) = mask.pixel_foreground(x, y) ? 255 : 0;
    return img;
}

std::string orientation_csv(const fingerprint::OrientationField& field) {
    std::string out;
    char buf[32];
    for (int by = 0; by < field.blocks_y(); ++by) {
        for (int bx = 0; bx < field.blocks_x(); ++bx) {
            if (bx) out += ',';
            if (field.valid(bx, by)) {
                std::snprintf(buf, sizeof buf, "%.4f", field.angle(bx, by) * 180.0 / std::numbers::pi);
                out += buf;
            }
        }
        out += '\n';
    }
    return out;
}

std::string minutiae_json(const fingerprint::MinutiaeSet& set) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : set.minutiae) {
        arr.push_back({{"x", m.x},
                       {"y", m.y},
                       {"kind", m.kind == fingerprint::MinutiaKind::RidgeEnding ? "ridge-ending" : "bifurcation"}});
    }
    return arr.dump(2) + "\n";
}

std::string circles_json(const iris::IrisBoundaries& b) {
    auto circle = [](const iris::Circle& c) { return nlohmann::json{{"cx", c.cx}, {"cy", c.cy}, {"r", c.r}}; };
    return nlohmann::json{{"pupil", circle(b.pupil)}, {"iris", circle(b.iris)}}.dump(2) + "\n";
}

std::string coefficients_json(const iris::IrisTexture& tex) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : tex.coeffs) arr.push_back({c.real(), c.imag()});
    return arr.dump() + "\n";
}

GrayImage normalized_image(const iris::NormalizedIris& n) {
    GrayImage img(n.angular_res, n.radial_res);
    for (int r = 0; r < n.radial_res; ++r)
        for (int c = 0; c < n.angular_res; ++c) img.at(c, r) = to_pixel(n.value(r, c));
    return img;
}

}  // namespace

fingerprint::MinutiaeSet extract_fingerprint(const GrayImage& img, const PipelineConfig& cfg,
                                             const std::optional<std::string>& dump_dir, RunReport& report) {
    using namespace fingerprint;
    Dumper dump(dump_dir, report);

    const GrayImage equalized = run_stage(report, "fingerprint.equalize", [&] { return histogram_equalize(img).image; });
    dump.image("fp_equalized.pgm", equalized);

    const GrayImage filtered =
        run_stage(report, "fingerprint.wiener", [&] { return wiener_filter(equalized, {cfg.fp_wiener_noise}); });
    dump.image("fp_wiener.pgm", filtered);

    const SegmentationMask mask = run_stage(report, "fingerprint.segment", [&] {
        const double t = cfg.fp_segment_threshold ? *cfg.fp_segment_threshold
                                                  : default_segment_threshold(filtered, cfg.fp_segment_threshold_factor);
        return segment(filtered, t);
    });
    dump.image("fp_mask.pgm", mask_image(mask));

    const OrientationField field =
        run_stage(report, "fingerprint.orientation", [&] { return estimate_orientation(filtered, mask); });
    dump.text("fp_orientation.csv", orientation_csv(field));

    const GrayImage enhanced =
        run_stage(report, "fingerprint.enhance", [&] { return gabor_enhance(filtered, field, cfg.enhance_params()); });
    dump.image("fp_enhanced.pgm", enhanced);

    const BinaryImage binary = run_stage(report, "fingerprint.binarize", [&] { return binarize(enhanced, mask); });
    dump.image("fp_binary.pgm", binary);

    const BinaryImage skeleton = run_stage(report, "fingerprint.thin", [&] { return thin(binary); });
    dump.image("fp_thinned.pgm", skeleton);

    MinutiaeSet minutiae = run_stage(report, "fingerprint.minutiae", [&] { return extract_minutiae(skeleton, mask); });
    dump.text("fp_minutiae.json", minutiae_json(minutiae));
    return minutiae;
}

iris::IrisTexture extract_iris(const GrayImage& img, const PipelineConfig& cfg,
                               const std::optional<std::string>& dump_dir, RunReport& report) {
    using namespace iris;
    Dumper dump(dump_dir, report);
    const LocalizeParams lp = cfg.localize_params();

    const EdgeMap edges = run_stage(report, "iris.edges", [&] { return detect_edges(img, lp); });
    dump.image("iris_edges.pgm", edges);

    const IrisBoundaries located = run_stage(report, "iris.localize", [&] { return locate_boundaries(edges, lp); });
    dump.text("iris_circles.json", circles_json(located));

    const IrisBoundaries bounds =
        run_stage(report, "iris.noise", [&] { return mask_noise(img, located, cfg.noise_params()); });
    dump.image("iris_noise_mask.pgm", bounds.noise_mask);

    const NormalizedIris norm = run_stage(report, "iris.normalize", [&] {
        return normalize(img, bounds, cfg.iris_radial_res, cfg.iris_angular_res);
    });
    dump.image("iris_normalized.pgm", normalized_image(norm));

    IrisTexture tex = run_stage(report, "iris.texture", [&] {
        return log_gabor_features(norm, {cfg.iris_log_gabor_f0, cfg.iris_log_gabor_sigma_ratio});
    });
    dump.text("iris_coefficients.json", coefficients_json(tex));
    return tex;
}

keygen::CryptoKey derive_from_features(const fingerprint::MinutiaeSet& minutiae, const iris::IrisTexture& texture,
                                       const PipelineConfig& cfg, RunReport& report) {
    const fusion::FusionState state = run_stage(report, "fusion", [&] {
        const auto fv = fusion::build_feature_vectors(minutiae, texture, cfg.fusion_quant_scale, cfg.fusion_bit_width);
        return fusion::fuse(fv, {cfg.seed, cfg.fusion_big_m, cfg.fusion_bit_width, cfg.fusion_quant_scale});
    });
    report.minutiae = minutiae.size();
    report.coefficients = texture.size();
    return run_stage(report, "keygen", [&] {
        const auto u = keygen::distinct(state.bt);
        report.distinct = u.size();
        return keygen::derive_key(keygen::resize(u, cfg.key_bits));
    });
}

RunReport run_pipeline(const GrayImage& fingerprint_img, const GrayImage& iris_img, const PipelineConfig& cfg,
                       const std::optional<std::string>& dump_dir) {
    cfg.validate();
    RunReport report;
    const auto minutiae = extract_fingerprint(fingerprint_img, cfg, dump_dir, report);
    const auto texture = extract_iris(iris_img, cfg, dump_dir, report);
    report.key = derive_from_features(minutiae, texture, cfg, report);
    return report;
}

RunReport run_pipeline(const std::string& fingerprint_path, const std::string& iris_path, const PipelineConfig& cfg,
                       const std::optional<std::string>& dump_dir) {
    cfg.validate();
    RunReport report;
    const GrayImage fp = run_stage(report, "fingerprint.load", [&] { return read_image(fingerprint_path); });
    const GrayImage ir = run_stage(report, "iris.load", [&] { return read_image(iris_path); });
    const auto minutiae = extract_fingerprint(fp, cfg, dump_dir, report);
    const auto texture = extract_iris(ir, cfg, dump_dir, report);
    report.key = derive_from_features(minutiae, texture, cfg, report);
    return report;
}

}  // namespace biokey
