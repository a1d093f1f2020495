#include "phasespace/plot.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "phasespace/artifacts.hpp"

namespace phasespace::plot {
namespace {

namespace fs = std::filesystem;

void be32(std::vector<uint8_t>& v, uint32_t x) {
    v.push_back(static_cast<uint8_t>(x >> 24));
    v.push_back(static_cast<uint8_t>(x >> 16));
    v.push_back(static_cast<uint8_t>(x >> 8));
    v.push_back(static_cast<uint8_t>(x));
}

void write_chunk(std::ofstream& f, const char* type, const std::vector<uint8_t>& data) {
    std::vector<uint8_t> head;
    be32(head, static_cast<uint32_t>(data.size()));
    f.write(reinterpret_cast<const char*>(head.data()), 4);
    f.write(type, 4);
    if (!data.empty()) f.write(reinterpret_cast<const char*>(data.data()), data.size());
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
    if (!data.empty()) crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
    std::vector<uint8_t> tail;
    be32(tail, static_cast<uint32_t>(crc));
    f.write(reinterpret_cast<const char*>(tail.data()), 4);
}

struct Rgb {
    uint8_t r, g, b;
};

struct Canvas {
    int w = 0, h = 0;
    std::vector<uint8_t> px;

    Canvas(int width, int height, Rgb fill = {255, 255, 255}) : w(width), h(height) {
        px.resize(static_cast<size_t>(w) * h * 3);
        for (int i = 0; i < w * h; ++i) {
            px[3 * i] = fill.r;
            px[3 * i + 1] = fill.g;
            px[3 * i + 2] = fill.b;
        }
    }
    void set(int x, int y, Rgb c) {
        if (x < 0 || y < 0 || x >= w || y >= h) return;
        size_t i = (static_cast<size_t>(y) * w + x) * 3;
        px[i] = c.r;
        px[i + 1] = c.g;
        px[i + 2] = c.b;
    }
    void line(int x0, int y0, int x1, int y1, Rgb c) {
        int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
        int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        for (;;) {
            set(x0, y0, c);
            if (x0 == x1 && y0 == y1) break;
            int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }
};

// 3x5 glyphs, row-major bits (msb = left pixel)
struct Glyph {
    char ch;
    uint8_t rows[5];
};
constexpr Glyph kFont[] = {
    {'0', {0b111, 0b101, 0b101, 0b101, 0b111}}, {'1', {0b010, 0b110, 0b010, 0b010, 0b111}},
    {'2', {0b111, 0b001, 0b111, 0b100, 0b111}}, {'3', {0b111, 0b001, 0b111, 0b001, 0b111}},
    {'4', {0b101, 0b101, 0b111, 0b001, 0b001}}, {'5', {0b111, 0b100, 0b111, 0b001, 0b111}},
    {'6', {0b111, 0b100, 0b111, 0b101, 0b111}}, {'7', {0b111, 0b001, 0b010, 0b010, 0b010}},
    {'8', {0b111, 0b101, 0b111, 0b101, 0b111}}, {'9', {0b111, 0b101, 0b111, 0b001, 0b111}},
    {'.', {0b000, 0b000, 0b000, 0b000, 0b010}}, {'-', {0b000, 0b000, 0b111, 0b000, 0b000}},
    {'+', {0b000, 0b010, 0b111, 0b010, 0b000}}, {'e', {0b000, 0b111, 0b110, 0b100, 0b111}},
    {'t', {0b010, 0b111, 0b010, 0b010, 0b011}}, {'=', {0b000, 0b111, 0b000, 0b111, 0b000}},
};

const Glyph* find_glyph(char c) {
    for (const Glyph& g : kFont)
        if (g.ch == c) return &g;
    return nullptr;
}

void draw_text(Canvas& cv, int x, int y, const std::string& text, Rgb c, int scale = 1) {
    int cx = x;
    for (char ch : text) {
        const Glyph* g = find_glyph(ch);
        if (g) {
            for (int r = 0; r < 5; ++r)
                for (int k = 0; k < 3; ++k)
                    if (g->rows[r] & (1 << (2 - k)))
                        for (int sy = 0; sy < scale; ++sy)
                            for (int sx = 0; sx < scale; ++sx)
                                cv.set(cx + k * scale + sx, y + r * scale + sy, c);
        }
        cx += 4 * scale;
    }
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

const Rgb kPalette[] = {{31, 119, 180}, {214, 39, 40},  {44, 160, 44},  {255, 127, 14},
                        {148, 103, 189}, {23, 190, 207}, {127, 127, 127}, {188, 189, 34}};

Rgb diverging(double t) {
    // t in [-1, 1]: blue - white - red
    t = std::clamp(t, -1.0, 1.0);
    if (t < 0) {
        double a = -t;
        return {static_cast<uint8_t>(255 - a * 225), static_cast<uint8_t>(255 - a * 215),
                static_cast<uint8_t>(255 - a * 75)};
    }
    return {static_cast<uint8_t>(255 - t * 55), static_cast<uint8_t>(255 - t * 215),
            static_cast<uint8_t>(255 - t * 215)};
}

Rgb sequential(double t) {
    // t in [0, 1]: white - deep blue
    t = std::clamp(t, 0.0, 1.0);
    return {static_cast<uint8_t>(255 - t * 225), static_cast<uint8_t>(255 - t * 195),
            static_cast<uint8_t>(255 - t * 105)};
}

}  // namespace

void write_png(const std::string& path, int width, int height, const std::vector<uint8_t>& rgb) {
    if (width <= 0 || height <= 0 ||
        rgb.size() != static_cast<size_t>(width) * height * 3)
        throw IoError("png: buffer size does not match dimensions");

    std::vector<uint8_t> raw;
    raw.reserve(static_cast<size_t>(height) * (1 + 3 * width));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);  // filter: none
        const uint8_t* row = rgb.data() + static_cast<size_t>(y) * width * 3;
        raw.insert(raw.end(), row, row + 3 * width);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> packed(bound);
    if (compress2(packed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError("png: deflate failed");
    packed.resize(bound);

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    f.write(reinterpret_cast<const char*>(sig), 8);

    std::vector<uint8_t> ihdr;
    be32(ihdr, static_cast<uint32_t>(width));
    be32(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // truecolor
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    write_chunk(f, "IHDR", ihdr);
    write_chunk(f, "IDAT", packed);
    write_chunk(f, "IEND", {});
    if (!f) throw IoError("write to '" + path + "' failed");
}

void heatmap_png(const GridField& f, const std::string& path, int scale) {
    if (f.dim() != 2) throw ConfigError("heatmap needs a 2D field");
    if (scale < 1) scale = 1;
    const int nx = f.spec.axes[0].n;
    const int ny = f.spec.axes[1].n;
    double vmax = 0.0, vmin = 0.0;
    for (double v : f.values) {
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
    }
    const double amax = std::max(std::abs(vmax), std::abs(vmin));
    const bool div = vmin < -1e-12 * std::max(amax, 1e-300);

    Canvas cv(nx * scale, ny * scale);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            double v = f.values[static_cast<size_t>(i) * ny + j];
            Rgb c = amax == 0.0 ? Rgb{255, 255, 255}
                    : div       ? diverging(v / amax)
                                : sequential(std::max(v, 0.0) / amax);
            for (int sy = 0; sy < scale; ++sy)
                for (int sx = 0; sx < scale; ++sx)
                    cv.set(i * scale + sx, (ny - 1 - j) * scale + sy, c);
        }
    }
    draw_text(cv, 4, 4, "t=" + short_num(f.time), {0, 0, 0}, 2);
    write_png(path, cv.w, cv.h, cv.px);
}

void line_png(const std::vector<Series>& series, const std::string& path, int width, int height) {
    const int L = 48, R = 10, T = 10, B = 22;
    Canvas cv(width, height);
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const Series& s : series) {
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto px = [&](double x) {
        return L + static_cast<int>((x - xmin) / (xmax - xmin) * (width - L - R));
    };
    auto py = [&](double y) {
        return height - B - static_cast<int>((y - ymin) / (ymax - ymin) * (height - T - B));
    };

    if (ymin < 0 && ymax > 0)
        cv.line(L, py(0.0), width - R, py(0.0), {220, 220, 220});
    Rgb frame{0, 0, 0};
    cv.line(L, T, L, height - B, frame);
    cv.line(L, height - B, width - R, height - B, frame);

    for (size_t k = 0; k < series.size(); ++k) {
        Rgb c = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
        const Series& s = series[k];
        bool pen = false;
        int lx = 0, ly = 0;
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen = false;
                continue;
            }
            int x = px(s.x[i]), y = py(s.y[i]);
            if (pen) cv.line(lx, ly, x, y, c);
            lx = x;
            ly = y;
            pen = true;
        }
    }

    draw_text(cv, L, height - B + 4, short_num(xmin), {0, 0, 0});
    std::string xm = short_num(xmax);
    draw_text(cv, width - R - 4 * static_cast<int>(xm.size()), height - B + 4, xm, {0, 0, 0});
    draw_text(cv, 2, py(ymax), short_num(ymax), {0, 0, 0});
    draw_text(cv, 2, py(ymin) - 6, short_num(ymin), {0, 0, 0});
    write_png(path, cv.w, cv.h, cv.px);
}

int render_plots(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("'" + dir + "' is not a directory");
    int written = 0;

    std::vector<fs::path> grids;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::string name = e.path().filename().string();
        if (name.rfind("grid_", 0) == 0 && e.path().extension() == ".field")
            grids.push_back(e.path());
    }
    std::sort(grids.begin(), grids.end());
    for (const fs::path& p : grids) {
        GridField f = GridField::load(p.string());
        fs::path out = p;
        out.replace_extension(".png");
        heatmap_png(f, out.string());
        ++written;
    }

    fs::path csv = fs::path(dir) / "observables.csv";
    if (fs::exists(csv)) {
        CsvTable t = read_csv(csv.string());
        int tc = t.column("t");
        if (tc < 0) throw IoError("observables.csv lacks a t column");
        auto col = [&](int c) {
            Series s;
            for (const auto& row : t.rows) {
                s.x.push_back(row[tc]);
                s.y.push_back(row[c]);
            }
            return s;
        };
        // per-mode columns look like "<prefix><digits>"; _err twins excluded
        auto collect = [&](const std::string& prefix) {
            std::vector<Series> out;
            for (size_t c = 0; c < t.columns.size(); ++c) {
                const std::string& name = t.columns[c];
                if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) continue;
                std::string rest = name.substr(prefix.size());
                bool digits = std::all_of(rest.begin(), rest.end(),
                                          [](unsigned char ch) { return std::isdigit(ch); });
                if (!digits) continue;
                out.push_back(col(static_cast<int>(c)));
            }
            return out;
        };

        std::vector<Series> fields = collect("re_a");
        std::vector<Series> im = collect("im_a");
        fields.insert(fields.end(), im.begin(), im.end());
        if (!fields.empty()) {
            line_png(fields, (fs::path(dir) / "fields.png").string());
            ++written;
        }
        std::vector<Series> occ = collect("n");
        if (!occ.empty()) {
            line_png(occ, (fs::path(dir) / "occupation.png").string());
            ++written;
        }
        auto maybe_plot = [&](const std::string& name, const std::string& file) {
            int c = t.column(name);
            if (c < 0) return;
            Series s = col(c);
            bool any = false;
            for (double v : s.y) any = any || std::isfinite(v);
            if (!any) return;
            line_png({s}, (fs::path(dir) / file).string());
            ++written;
        };
        maybe_plot("wehrl", "entropy.png");
        maybe_plot("neg_volume", "negativity.png");
        maybe_plot("sign_mean", "sign.png");
    }
    return written;
}

}  // namespace phasespace::plot
