// SPDX-License-Identifier: Apache-2.0
#include "biokey/iris.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "biokey/imaging.hpp"

namespace biokey::iris {

namespace {

constexpr double kPi = std::numbers::pi;

void check_canny_params(double low, double high, double sigma) {
    if (!(low >= 0.0) || !(low < high)) throw InvalidParameter("canny: need 0 <= low < high");
    if (!(sigma > 0.0)) throw InvalidParameter("canny: sigma must be positive");
}

}  // namespace

RealImage gradient_magnitude(const GrayImage& img, double sigma) {
    const RealImage smooth = convolve(RealImage(img), gaussian_kernel(sigma).weights);
    const Gradient g = sobel(smooth);
    RealImage mag(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) mag.at(x, y) = std::hypot(g.gx.at(x, y), g.gy.at(x, y));
    return mag;
}

CannyThresholds canny_auto_thresholds(const GrayImage& img, double sigma, double percentile, double low_ratio) {
    if (!(percentile > 0.0 && percentile < 1.0)) throw InvalidParameter("canny: percentile must be in (0,1)");
    if (!(low_ratio > 0.0 && low_ratio < 1.0)) throw InvalidParameter("canny: low ratio must be in (0,1)");
    const RealImage mag = gradient_magnitude(img, sigma);
    std::vector<double> nonzero;
    for (double v : mag.values())
        if (v > 1e-9) nonzero.push_back(v);
    if (nonzero.empty()) return {low_ratio, 1.0};  // nothing can reach either threshold
    const auto k = static_cast<std::size_t>(percentile * static_cast<double>(nonzero.size() - 1));
    std::nth_element(nonzero.begin(), nonzero.begin() + static_cast<std::ptrdiff_t>(k), nonzero.end());
    const double high = nonzero[k];
    return {low_ratio * high, high};
}

EdgeMap canny_edges(const GrayImage& img, double low, double high, double sigma) {
    check_canny_params(low, high, sigma);
    const int w = img.width(), h = img.height();
    const RealImage smooth = convolve(RealImage(img), gaussian_kernel(sigma).weights);
    const Gradient g = sobel(smooth);
    RealImage mag(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) mag.at(x, y) = std::hypot(g.gx.at(x, y), g.gy.at(x, y));

    auto mag_or_zero = [&](int x, int y) {
        return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag.at(x, y);
    };

    // Non-maximum suppression along the gradient, quantised to 4 directions.
    // The forward neighbour must be strictly smaller so plateaus stay one
    // pixel wide.
    RealImage thin_mag(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = mag.at(x, y);
            if (m <= 1e-9) continue;
            double angle = std::atan2(g.gy.at(x, y), g.gx.at(x, y)) * 180.0 / kPi;
            if (angle < 0) angle += 180.0;
            int dx, dy;
            if (angle < 22.5 || angle >= 157.5) {
                dx = 1; dy = 0;
            } else if (angle < 67.5) {
                dx = 1; dy = 1;
            } else if (angle < 112.5) {
                dx = 0; dy = 1;
            } else {
                dx = -1; dy = 1;
            }
            if (m > mag_or_zero(x + dx, y + dy) && m >= mag_or_zero(x - dx, y - dy)) thin_mag.at(x, y) = m;
        }
    }

    // Double threshold and hysteresis: weak pixels survive only when
    // 8-connected to a strong one.
    EdgeMap edges(w, h);
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (thin_mag.at(x, y) > 0.0 && thin_mag.at(x, y) >= high) {
                edges.set(x, y, true);
                stack.emplace_back(x, y);
            }
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h || edges.at(nx, ny)) continue;
                const double m = thin_mag.at(nx, ny);
                if (m > 0.0 && m >= low) {
                    edges.set(nx, ny, true);
                    stack.emplace_back(nx, ny);
                }
            }
    }
    return edges;
}

std::vector<std::pair<int, int>> ring_offsets(int r) {
    std::vector<std::pair<int, int>> out;
    const double lo = (r - 0.5) * (r - 0.5), hi = (r + 0.5) * (r + 0.5);
    for (int dy = -r - 1; dy <= r + 1; ++dy)
        for (int dx = -r - 1; dx <= r + 1; ++dx) {
            const double d2 = static_cast<double>(dx * dx + dy * dy);
            if (d2 >= lo && d2 < hi) out.emplace_back(dx, dy);
        }
    return out;
}

CircleFit hough_circle_fit(const EdgeMap& edges, int r_min, int r_max, std::optional<CentreWindow> window) {
    if (r_min < 1 || r_min >= r_max) throw InvalidParameter("hough_circle: need 1 <= r_min < r_max");
    const int w = edges.width(), h = edges.height();
    CentreWindow win = window.value_or(CentreWindow{0, 0, w - 1, h - 1});
    win.x0 = std::max(win.x0, 0);
    win.y0 = std::max(win.y0, 0);
    win.x1 = std::min(win.x1, w - 1);
    win.y1 = std::min(win.y1, h - 1);

    std::vector<std::pair<int, int>> points;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (edges.at(x, y)) points.emplace_back(x, y);
    if (points.empty() || win.x0 > win.x1 || win.y0 > win.y1) throw StageError("hough_circle: no circle found");

    const int ww = win.x1 - win.x0 + 1, wh = win.y1 - win.y0 + 1;
    const int nr = r_max - r_min + 1;
    std::vector<std::int32_t> acc(static_cast<std::size_t>(nr) * ww * wh, 0);
    std::vector<std::size_t> ring_size(nr);
    for (int ri = 0; ri < nr; ++ri) {
        const auto ring = ring_offsets(r_min + ri);
        ring_size[ri] = ring.size();
        std::int32_t* plane = acc.data() + static_cast<std::size_t>(ri) * ww * wh;
        for (auto [px, py] : points) {
            for (auto [dx, dy] : ring) {
                const int cx = px + dx, cy = py + dy;
                if (cx < win.x0 || cx > win.x1 || cy < win.y0 || cy > win.y1) continue;
                ++plane[static_cast<std::size_t>(cy - win.y0) * ww + (cx - win.x0)];
            }
        }
    }

    // Scan order (r, cy, cx) ascending with a strict comparison gives the
    // documented tie-break.
    CircleFit best;
    for (int ri = 0; ri < nr; ++ri)
        for (int cy = 0; cy < wh; ++cy)
            for (int cx = 0; cx < ww; ++cx) {
                const int v = acc[(static_cast<std::size_t>(ri) * wh + cy) * ww + cx];
                if (v > best.votes) {
                    best.votes = v;
                    best.circle = {cx + win.x0, cy + win.y0, r_min + ri};
                    best.support = static_cast<double>(v) / static_cast<double>(ring_size[ri]);
                }
            }
    if (best.votes == 0) throw StageError("hough_circle: no circle found");
    return best;
}

Circle hough_circle(const EdgeMap& edges, int r_min, int r_max, std::optional<CentreWindow> window) {
    return hough_circle_fit(edges, r_min, r_max, window).circle;
}

EdgeMap detect_edges(const GrayImage& img, const LocalizeParams& params) {
    const auto t = canny_auto_thresholds(img, params.canny_sigma, params.canny_percentile, params.canny_low_ratio);
    return canny_edges(img, t.low, t.high, params.canny_sigma);
}

IrisBoundaries locate_boundaries(const EdgeMap& edges, const LocalizeParams& params) {
    if (params.pupil_r_max >= params.iris_r_max) {
        throw InvalidParameter("locate_boundaries: pupil radius range must lie below the iris range");
    }
    auto fit = [&](const char* what, int r_min, int r_max, std::optional<CentreWindow> win) {
        CircleFit f;
        try {
            f = hough_circle_fit(edges, r_min, r_max, win);
        } catch (const StageError&) {
            throw StageError(std::string("localization: no ") + what + " circle found");
        }
        if (f.support < params.min_circle_support) {
            throw StageError(std::string("localization: no ") + what + " circle with enough edge support in radius range [" +
                             std::to_string(r_min) + ", " + std::to_string(r_max) + "]");
        }
        return f.circle;
    };

    const Circle pupil = fit("pupil", params.pupil_r_min, params.pupil_r_max, std::nullopt);
    const int tol = params.centre_tolerance;
    const Circle iris = fit("iris", params.iris_r_min, params.iris_r_max,
                            CentreWindow{pupil.cx - tol, pupil.cy - tol, pupil.cx + tol, pupil.cy + tol});

    const double centre_dist = std::hypot(pupil.cx - iris.cx, pupil.cy - iris.cy);
    if (pupil.r >= iris.r || centre_dist >= iris.r) {
        throw StageError("localization: pupil circle is not contained in the iris circle");
    }
    return {pupil, iris, BinaryImage(edges.width(), edges.height())};
}

IrisBoundaries locate_boundaries(const GrayImage& img, const LocalizeParams& params) {
    return locate_boundaries(detect_edges(img, params), params);
}

std::optional<Line> hough_line(const std::vector<std::pair<int, int>>& points, int min_votes) {
    if (points.empty()) return std::nullopt;
    constexpr int kAngles = 180;
    int max_abs = 0;
    for (auto [x, y] : points) max_abs = std::max({max_abs, std::abs(x), std::abs(y)});
    const int rho_max = static_cast<int>(std::ceil(max_abs * std::numbers::sqrt2)) + 1;
    const int nrho = 2 * rho_max + 1;
    std::vector<int> acc(static_cast<std::size_t>(kAngles) * nrho, 0);
    std::array<double, kAngles> cs{}, sn{};
    for (int a = 0; a < kAngles; ++a) {
        cs[a] = std::cos(a * kPi / kAngles);
        sn[a] = std::sin(a * kPi / kAngles);
    }
    for (auto [x, y] : points)
        for (int a = 0; a < kAngles; ++a) {
            const int rho = static_cast<int>(std::lround(x * cs[a] + y * sn[a]));
            ++acc[static_cast<std::size_t>(a) * nrho + (rho + rho_max)];
        }
    Line best;
    for (int a = 0; a < kAngles; ++a)
        for (int r = 0; r < nrho; ++r) {
            const int v = acc[static_cast<std::size_t>(a) * nrho + r];
            if (v > best.votes) best = {a * kPi / kAngles, static_cast<double>(r - rho_max), v};
        }
    if (best.votes < min_votes) return std::nullopt;
    return best;
}

namespace {

double dist(double x0, double y0, double x1, double y1) { return std::hypot(x1 - x0, y1 - y0); }

bool in_disk(const Circle& c, double x, double y) { return dist(c.cx, c.cy, x, y) <= c.r; }

// Fits an eyelid line in the band [y0, y1] and masks the iris disk on the
// far side of the horizontal through the line point nearest the pupil.
void mask_eyelid(const EdgeMap& edges, const IrisBoundaries& b, int y0, int y1, bool upper, int min_votes,
                 BinaryImage& mask) {
    const int w = edges.width(), h = edges.height();
    const int x0 = std::max(0, b.iris.cx - b.iris.r), x1 = std::min(w - 1, b.iris.cx + b.iris.r);
    y0 = std::max(0, y0);
    y1 = std::min(h - 1, y1);
    if (y0 > y1 || x0 > x1) return;

    std::vector<std::pair<int, int>> pts;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            if (!edges.at(x, y)) continue;
            // boundary arcs are not eyelids
            const double dp = dist(b.pupil.cx, b.pupil.cy, x, y), di = dist(b.iris.cx, b.iris.cy, x, y);
            if (std::abs(dp - b.pupil.r) <= 2.0 || std::abs(di - b.iris.r) <= 2.0) continue;
            pts.emplace_back(x - x0, y - y0);
        }
    const auto line = hough_line(pts, min_votes);
    if (!line) return;
    const double sn = std::sin(line->theta), cs = std::cos(line->theta);
    if (std::abs(sn) < 1e-6) return;  // vertical line, not an eyelid

    std::optional<double> bound;
    for (int x = x0; x <= x1; ++x) {
        const double y = (line->rho - (x - x0) * cs) / sn + y0;
        if (y < y0 || y > y1 || !in_disk(b.iris, x, y)) continue;
        if (!bound || (upper ? y > *bound : y < *bound)) bound = y;
    }
    if (!bound) return;
    for (int y = 0; y < h; ++y)
        for (int x = x0; x <= x1; ++x) {
            if (!in_disk(b.iris, x, y)) continue;
            if (upper ? (y <= *bound) : (y >= *bound)) mask.set(x, y, true);
        }
}

}  // namespace

IrisBoundaries mask_noise(const GrayImage& img, const IrisBoundaries& bounds, const NoiseParams& params) {
    if (bounds.pupil.r <= 0 || bounds.pupil.r >= bounds.iris.r) {
        throw InvalidInput("mask_noise: invalid iris boundaries");
    }
    IrisBoundaries out = bounds;
    if (out.noise_mask.width() != img.width() || out.noise_mask.height() != img.height()) {
        out.noise_mask = BinaryImage(img.width(), img.height());
    }

    const auto t = canny_auto_thresholds(img, params.canny_sigma, params.canny_percentile, params.canny_low_ratio);
    const EdgeMap edges = canny_edges(img, t.low, t.high, params.canny_sigma);
    const int min_votes = std::max(1, static_cast<int>(std::ceil(params.eyelid_min_fraction * 2 * bounds.iris.r)));
    const Circle& p = bounds.pupil;
    const Circle& i = bounds.iris;
    mask_eyelid(edges, bounds, i.cy - i.r, p.cy - p.r - 1, true, min_votes, out.noise_mask);
    mask_eyelid(edges, bounds, p.cy + p.r + 1, i.cy + i.r, false, min_votes, out.noise_mask);

    for (int y = std::max(0, i.cy - i.r); y <= std::min(img.height() - 1, i.cy + i.r); ++y)
        for (int x = std::max(0, i.cx - i.r); x <= std::min(img.width() - 1, i.cx + i.r); ++x) {
            if (!in_disk(i, x, y) || in_disk(p, x, y)) continue;
            const double v = img.at(x, y);
            if (v < params.eyelash_threshold || v >= params.reflection_threshold) out.noise_mask.set(x, y, true);
        }
    return out;
}

NormalizedIris normalize(const GrayImage& img, const IrisBoundaries& bounds, int radial_res, int angular_res) {
    if (radial_res < 2 || angular_res < 2) throw InvalidParameter("normalize: resolutions must be >= 2");
    if (bounds.pupil.r <= 0 || bounds.pupil.r >= bounds.iris.r) throw InvalidInput("normalize: invalid iris boundaries");
    const bool have_mask = bounds.noise_mask.width() == img.width() && bounds.noise_mask.height() == img.height();

    NormalizedIris out;
    out.radial_res = radial_res;
    out.angular_res = angular_res;
    out.values.assign(static_cast<std::size_t>(radial_res) * angular_res, 0.0);
    out.mask.assign(out.values.size(), 0);

    const Circle& p = bounds.pupil;
    const Circle& ir = bounds.iris;
    for (int col = 0; col < angular_res; ++col) {
        const double theta = 2.0 * kPi * col / angular_res;
        const double c = std::cos(theta), s = std::sin(theta);
        const double xp = p.cx + p.r * c, yp = p.cy + p.r * s;
        const double xi = ir.cx + ir.r * c, yi = ir.cy + ir.r * s;
        for (int row = 0; row < radial_res; ++row) {
            const double r = static_cast<double>(row) / (radial_res - 1);
            const double x = (1.0 - r) * xp + r * xi;
            const double y = (1.0 - r) * yp + r * yi;
            const std::size_t idx = static_cast<std::size_t>(row) * angular_res + col;
            if (x < 0.0 || y < 0.0 || x > img.width() - 1 || y > img.height() - 1) {
                out.mask[idx] = 1;
                continue;
            }
            const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
            const int x1 = std::min(x0 + 1, img.width() - 1), y1 = std::min(y0 + 1, img.height() - 1);
            const double fx = x - x0, fy = y - y0;
            // nested lerps reproduce a flat neighbourhood exactly
            const double top = img.at(x0, y0) + fx * (img.at(x1, y0) - img.at(x0, y0));
            const double bottom = img.at(x0, y1) + fx * (img.at(x1, y1) - img.at(x0, y1));
            const double v = top + fy * (bottom - top);
            out.values[idx] = v;
            if (have_mask) {
                const auto& m = bounds.noise_mask;
                const bool hit = ((1 - fx) * (1 - fy) > 0 && m.at(x0, y0)) || (fx * (1 - fy) > 0 && m.at(x1, y0)) ||
                                 ((1 - fx) * fy > 0 && m.at(x0, y1)) || (fx * fy > 0 && m.at(x1, y1));
                out.mask[idx] = hit ? 1 : 0;
            }
        }
    }
    return out;
}

double log_gabor_response(double f, const LogGaborParams& params) {
    if (f <= 0.0) return 0.0;
    const double num = std::log(f / params.f0);
    const double den = std::log(params.sigma_ratio);
    return std::exp(-(num * num) / (2.0 * den * den));
}

IrisTexture log_gabor_features(const NormalizedIris& norm, const LogGaborParams& params) {
    if (!(params.f0 > 0.0)) throw InvalidParameter("log-Gabor: f0 must be positive");
    if (!(params.sigma_ratio > 0.0 && params.sigma_ratio < 1.0)) {
        throw InvalidParameter("log-Gabor: sigma ratio must be in (0, 1)");
    }
    const int n = norm.angular_res;
    if (n < 2 || norm.values.size() != static_cast<std::size_t>(norm.radial_res) * n) {
        throw InvalidInput("log-Gabor: malformed normalized iris");
    }

    // twiddle[k] = exp(-2 pi i k / n)
    std::vector<std::complex<double>> twiddle(n);
    for (int k = 0; k < n; ++k) twiddle[k] = std::polar(1.0, -2.0 * kPi * k / n);
    // One-sided response: positive frequencies only, so the output is the
    // analytic (complex) band-passed signal.
    std::vector<double> filter(n, 0.0);
    for (int u = 1; u <= n / 2; ++u) filter[u] = log_gabor_response(static_cast<double>(u) / n, params);

    IrisTexture tex;
    tex.coeffs.assign(norm.values.size(), {0.0, 0.0});
    std::vector<double> signal(n);
    std::vector<std::complex<double>> spectrum(n);
    for (int row = 0; row < norm.radial_res; ++row) {
        double fill = 0.0;
        int unmasked = 0;
        for (int col = 0; col < n; ++col)
            if (!norm.masked(row, col)) {
                fill += norm.value(row, col) / 255.0;
                ++unmasked;
            }
        fill = unmasked ? fill / unmasked : 0.0;
        for (int col = 0; col < n; ++col) signal[col] = norm.masked(row, col) ? fill : norm.value(row, col) / 255.0;

        for (int u = 0; u < n; ++u) {
            spectrum[u] = 0.0;
            if (filter[u] == 0.0) continue;
            std::complex<double> acc = 0.0;
            for (int k = 0; k < n; ++k) acc += signal[k] * twiddle[static_cast<std::size_t>(u) * k % n];
            spectrum[u] = acc * filter[u];
        }
        for (int k = 0; k < n; ++k) {
            std::complex<double> acc = 0.0;
            for (int u = 1; u <= n / 2; ++u) acc += spectrum[u] * std::conj(twiddle[static_cast<std::size_t>(u) * k % n]);
            const std::size_t idx = static_cast<std::size_t>(row) * n + k;
            tex.coeffs[idx] = norm.masked(row, k) ? std::complex<double>{} : acc / static_cast<double>(n);
        }
    }
    return tex;
}

}  // namespace biokey::iris
