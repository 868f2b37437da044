#include "univhol/cubes.hpp"

#include <cstdio>
#include <sstream>

namespace uh {

namespace {

struct Rect {
    double x0, y0, x1, y1;
    const char* style;
};

bool meets_slice(const std::vector<std::pair<Rat, Rat>>& box) {
    for (std::size_t d = 2; d < box.size(); ++d)
        if (sgn(box[d].first) > 0 || sgn(box[d].second) < 0) return false;
    return true;
}

}  // namespace

std::string render_svg(const CubeFamily& fam, const std::optional<Rat>& central_L) {
    std::vector<Rect> rects;
    auto add = [&](const std::vector<std::pair<Rat, Rat>>& box, const char* style) {
        if (!meets_slice(box)) return;
        rects.push_back({to_double(box[0].first), to_double(box[1].first), to_double(box[0].second),
                         to_double(box[1].second), style});
    };
    const char* cube_style = "fill=\"#4a7ab5\" fill-opacity=\"0.6\" stroke=\"none\"";
    const char* face_style = "fill=\"none\" stroke=\"#4a7ab5\" stroke-dasharray=\"4 2\"";
    if (!fam.cubes.empty()) {
        for (const auto& c : fam.cubes) {
            std::vector<std::pair<Rat, Rat>> box;
            for (const auto& x : c.center) box.emplace_back(x - c.half_width, x + c.half_width);
            add(box, cube_style);
        }
    } else {
        for (const auto& f : fam.faces) add(f.bounding_box(), face_style);
    }
    if (central_L)
        add(std::vector<std::pair<Rat, Rat>>(2 * fam.n, {-*central_L, *central_L}),
            "fill=\"#c0504d\" fill-opacity=\"0.4\" stroke=\"none\"");
    double ext = 1;
    for (const auto& r : rects) ext = std::max({ext, std::abs(r.x0), std::abs(r.x1), std::abs(r.y0), std::abs(r.y1)});
    if (sgn(fam.N) > 0) ext = std::max(ext, to_double(Rat(fam.R + fam.N)));
    ext *= 1.05;
    const double size = 800, scale = size / (2 * ext);
    std::ostringstream os;
    char buf[256];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
       << size << " " << size << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    auto frame = [&](double r, const char* color) {
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"none\" stroke=\"%s\"/>\n",
                      (ext - r) * scale, (ext - r) * scale, 2 * r * scale, 2 * r * scale, color);
        os << buf;
    };
    if (sgn(fam.N) > 0) {
        frame(to_double(Rat(fam.R)), "#999999");
        frame(to_double(Rat(fam.R + fam.N)), "#999999");
    }
    for (const auto& r : rects) {
        // y axis points up
        std::snprintf(buf, sizeof buf, "<rect x=\"%.4f\" y=\"%.4f\" width=\"%.4f\" height=\"%.4f\" %s/>\n",
                      (r.x0 + ext) * scale, (ext - r.y1) * scale, (r.x1 - r.x0) * scale, (r.y1 - r.y0) * scale,
                      r.style);
        os << buf;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace uh
