#include "fwm/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fwm/errors.hpp"

namespace fwm {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOFailure("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IOFailure("write failed for " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOFailure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_pgm(const std::string& path, const Image& img, int bits) {
    if (bits != 8 && bits != 16) throw DomainError("PGM depth must be 8 or 16 bits");
    const int maxval = bits == 8 ? 255 : 65535;
    const double peak = img.v.empty() ? 0.0 : *std::max_element(img.v.begin(), img.v.end());
    const double scale = peak > 0.0 ? peak / maxval : 1.0;

    std::string data = "P5\n" + std::to_string(img.grid.nx) + " " + std::to_string(img.grid.ny) + "\n" +
                       std::to_string(maxval) + "\n";
    // Top row of the file is the largest y.
    for (int iy = img.grid.ny - 1; iy >= 0; --iy)
        for (int ix = 0; ix < img.grid.nx; ++ix) {
            const long q = std::lround(std::clamp(img.at(ix, iy) / scale, 0.0, double(maxval)));
            if (bits == 8) {
                data.push_back(static_cast<char>(q));
            } else {
                data.push_back(static_cast<char>((q >> 8) & 0xff));
                data.push_back(static_cast<char>(q & 0xff));
            }
        }
    write_text(path, data);

    std::ostringstream hdr;
    hdr << "nx " << img.grid.nx << "\nny " << img.grid.ny << "\ndx_m " << format_double(img.grid.dx)
        << "\ndy_m " << format_double(img.grid.dy) << "\nextent_x_m " << format_double(img.grid.width())
        << "\nextent_y_m " << format_double(img.grid.height()) << "\nbits " << bits
        << "\nscale " << format_double(scale) << "\n";
    write_text(path + ".hdr", hdr.str());
}

Image read_pgm(const std::string& path, double fallback_pitch) {
    const std::string raw = read_text(path);
    std::istringstream in(raw);
    std::string magic;
    int nx = 0, ny = 0, maxval = 0;
    auto skip = [&] {
        while (in >> std::ws && in.peek() == '#') in.ignore(1 << 20, '\n');
    };
    in >> magic;
    skip();
    in >> nx;
    skip();
    in >> ny;
    skip();
    in >> maxval;
    if (magic != "P5" || nx <= 0 || ny <= 0 || maxval <= 0 || maxval > 65535)
        throw IOFailure(path + ": not a binary PGM");
    in.get();
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    const std::size_t offset = static_cast<std::size_t>(in.tellg());
    if (raw.size() < offset + bytes * nx * ny) throw IOFailure(path + ": truncated pixel data");

    double dx = fallback_pitch, dy = fallback_pitch, scale = 1.0;
    std::ifstream side(path + ".hdr");
    if (side) {
        std::string key;
        double value;
        while (side >> key >> value) {
            if (key == "dx_m") dx = value;
            else if (key == "dy_m") dy = value;
            else if (key == "scale") scale = value;
        }
    }
    if (!(dx > 0.0) || !(dy > 0.0)) throw IOFailure(path + ": pixel pitch unknown (no sidecar header)");

    Image img{Grid2D{nx, ny, dx, dy}, std::vector<double>(static_cast<std::size_t>(nx) * ny)};
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data()) + offset;
    for (int row = 0; row < ny; ++row)
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t k = (static_cast<std::size_t>(row) * nx + ix) * bytes;
            const unsigned v = bytes == 2 ? (p[k] << 8) | p[k + 1] : p[k];
            img.at(ix, ny - 1 - row) = v * scale;
        }
    return img;
}

Image crop(const Image& img, double cx, double cy, double width, double height) {
    const Grid2D& g = img.grid;
    const int nx = std::max(2, 2 * static_cast<int>(std::lround(width / g.dx / 2)));
    const int ny = std::max(2, 2 * static_cast<int>(std::lround(height / g.dy / 2)));
    const int ox = static_cast<int>(std::lround(cx / g.dx)) + g.nx / 2 - nx / 2;
    const int oy = static_cast<int>(std::lround(cy / g.dy)) + g.ny / 2 - ny / 2;
    if (ox < 0 || oy < 0 || ox + nx > g.nx || oy + ny > g.ny) throw DomainError("crop exceeds the image");
    Image out{Grid2D{nx, ny, g.dx, g.dy}, std::vector<double>(static_cast<std::size_t>(nx) * ny)};
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) out.at(ix, iy) = img.at(ox + ix, oy + iy);
    return out;
}

}  // namespace fwm
