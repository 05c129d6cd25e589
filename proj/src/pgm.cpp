#include "obmbo/pgm.hpp"

#include <fstream>
#include <stdexcept>

namespace obmbo {

namespace {

// Reads one whitespace-delimited token, skipping '#' comment lines as the
// format allows between header fields.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) continue;
        tok.push_back(static_cast<char>(c));
        while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') {
            tok.push_back(static_cast<char>(in.get()));
        }
        return tok;
    }
    throw std::runtime_error("unexpected end of PGM header");
}

int parse_header_int(std::istream& in, const char* what) {
    const std::string tok = next_token(in);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("bad PGM ") + what + ": '" + tok + "'");
    }
}

} // namespace

void save_pgm(const PgmImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * img.height) {
        throw std::runtime_error("PGM image dimensions do not match pixel buffer");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

PgmImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    const std::string magic = next_token(in);
    if (magic != "P5") {
        throw std::runtime_error("'" + path + "' is not a binary PGM (magic " + magic + ")");
    }
    PgmImage img;
    img.width = parse_header_int(in, "width");
    img.height = parse_header_int(in, "height");
    const int maxval = parse_header_int(in, "maxval");
    if (maxval != 255) {
        throw std::runtime_error("unsupported PGM maxval " + std::to_string(maxval));
    }
    in.get(); // single whitespace byte after maxval
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw std::runtime_error("'" + path + "' is truncated");
    }
    return img;
}

void save_phase_pgm(const PhaseField& u, const std::string& path) {
    PgmImage img;
    img.width = u.geom.n;
    img.height = u.geom.n;
    img.pixels.resize(u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        img.pixels[i] = u.values[i] > 0 ? 255 : 0;
    }
    save_pgm(img, path);
}

PhaseField load_phase_pgm(const std::string& path) {
    const PgmImage img = load_pgm(path);
    if (img.width != img.height) {
        throw std::runtime_error("'" + path + "' is not square");
    }
    GridGeometry geom(img.width);
    PhaseField u(geom, static_cast<std::int8_t>(-1));
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        if (img.pixels[i] == 255) {
            u.values[i] = 1;
        } else if (img.pixels[i] != 0) {
            throw std::runtime_error("'" + path + "' has gray pixels, not a phase state");
        }
    }
    return u;
}

void save_mask_pgm(std::span<const std::uint8_t> mask, GridGeometry geom,
                   const std::string& path) {
    if (mask.size() != geom.cells()) {
        throw std::runtime_error("mask size does not match grid");
    }
    PgmImage img;
    img.width = geom.n;
    img.height = geom.n;
    img.pixels.resize(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        img.pixels[i] = mask[i] ? 255 : 0;
    }
    save_pgm(img, path);
}

std::vector<std::uint8_t> load_mask_pgm(const std::string& path, GridGeometry& geom_out) {
    const PgmImage img = load_pgm(path);
    if (img.width != img.height) {
        throw std::runtime_error("'" + path + "' is not square");
    }
    geom_out = GridGeometry(img.width);
    std::vector<std::uint8_t> mask(img.pixels.size(), 0);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        if (img.pixels[i] == 255) {
            mask[i] = 1;
        } else if (img.pixels[i] != 0) {
            throw std::runtime_error("'" + path + "' has gray pixels, not a mask");
        }
    }
    return mask;
}

} // namespace obmbo
