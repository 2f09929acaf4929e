#ifndef DISENT_SHAPES_HPP
#define DISENT_SHAPES_HPP

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "disent/errors.hpp"
#include "disent/rng.hpp"

namespace disent {

// ---------------------------------------------------------------------------
// Factor grid
//
// Five generative factors: shape {square, ellipse, triangle}, position X
// (16 values), position Y (16 values), scale (6 levels), rotation (60
// values over [0, pi], endpoints included).
//
// Geometry conventions:
//   * scale level s gives a nominal half-extent of 8 + 4*s pixels
//     (square half-side, ellipse semi-major axis, triangle circumradius;
//     the ellipse minor axis is half the major one);
//   * the position grid spans centers [28, 36] in both axes, the widest
//     range that keeps the largest nominal extent (28) inside the 64-pixel
//     frame at every grid point;
//   * rotation index r maps to angle r*pi/59, so index 59 is a half turn.
//     A half turn maps squares and ellipses onto themselves, which is the
//     main source of duplicate renders the dataset build removes.
// ---------------------------------------------------------------------------

enum class Shape : std::uint8_t { square = 0, ellipse = 1, triangle = 2 };

constexpr int kNumShapes = 3;
constexpr int kNumPositions = 16;
constexpr int kNumScales = 6;
constexpr int kNumRotations = 60;
constexpr int kImageSize = 64;
constexpr int kImagePixels = kImageSize * kImageSize;

struct FactorTuple {
    Shape shape = Shape::square;
    std::uint8_t pos_x = 0;    // 0..15
    std::uint8_t pos_y = 0;    // 0..15
    std::uint8_t scale = 0;    // 0..5
    std::uint8_t rotation = 0; // 0..59

    bool operator==(const FactorTuple&) const = default;
};

inline double factor_center(int pos_index) {
    return 28.0 + 8.0 * static_cast<double>(pos_index) / 15.0;
}

inline double factor_half_extent(int scale_index) {
    return 8.0 + 4.0 * static_cast<double>(scale_index);
}

inline double factor_angle(int rotation_index) {
    return std::numbers::pi * static_cast<double>(rotation_index) / 59.0;
}

// 64x64 binary image, packed row-major, MSB-first within each byte.
struct Bitmap {
    std::array<std::uint8_t, kImagePixels / 8> bits{};

    bool get(int x, int y) const {
        const int i = y * kImageSize + x;
        return (bits[i >> 3] >> (7 - (i & 7))) & 1;
    }
    void set(int x, int y, bool v) {
        const int i = y * kImageSize + x;
        const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (i & 7)));
        if (v)
            bits[i >> 3] |= mask;
        else
            bits[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }
    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (std::uint8_t b : bits) n += static_cast<std::size_t>(std::popcount(b));
        return n;
    }
    // Unpacks into `out` (length 4096) as 0.0 / 1.0.
    void unpack(double* out) const {
        for (int i = 0; i < kImagePixels; ++i)
            out[i] = static_cast<double>((bits[i >> 3] >> (7 - (i & 7))) & 1);
    }
    bool operator==(const Bitmap&) const = default;
};

struct BitmapHash {
    std::size_t operator()(const Bitmap& b) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint8_t c : b.bits) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

namespace detail {

// Point-in-shape predicate for one factor tuple, with the rotation folded
// into a local frame so the per-sample cost is a few multiplies.
struct ShapeGeometry {
    Shape shape;
    double cx, cy;      // center in pixel coordinates
    double cs, sn;      // cos/sin of the rotation angle
    double h;           // nominal half-extent
    double bound;       // circumradius for bounding-box purposes

    explicit ShapeGeometry(const FactorTuple& f)
        : shape(f.shape),
          cx(factor_center(f.pos_x)),
          cy(factor_center(f.pos_y)),
          cs(std::cos(factor_angle(f.rotation))),
          sn(std::sin(factor_angle(f.rotation))),
          h(factor_half_extent(f.scale)),
          bound(f.shape == Shape::square ? h * std::numbers::sqrt2 : h) {}

    bool contains(double px, double py) const {
        const double dx = px - cx, dy = py - cy;
        // rotate the sample into the shape's local frame
        const double lx = cs * dx + sn * dy;
        const double ly = -sn * dx + cs * dy;
        switch (shape) {
            case Shape::square:
                return std::abs(lx) <= h && std::abs(ly) <= h;
            case Shape::ellipse: {
                const double a = lx / h, b = ly / (0.5 * h);
                return a * a + b * b <= 1.0;
            }
            case Shape::triangle: {
                // equilateral, circumradius h, apex toward -y (up) before
                // rotation: vertices (0,-h) and (+-sqrt(3)h/2, h/2).
                // Inside = below the base edge and between the two slanted
                // edges through the apex.
                constexpr double r3 = std::numbers::sqrt3;
                return ly <= 0.5 * h && r3 * std::abs(lx) <= ly + h;
            }
        }
        return false;
    }
};

}  // namespace detail

// Deterministic binary render: 4x4 supersampled coverage per pixel,
// thresholded at 0.5 (8 of 16 samples). Pure function of the tuple.
inline Bitmap rasterize(const FactorTuple& f) {
    const detail::ShapeGeometry geom(f);
    Bitmap bm;
    const int x0 = std::max(0, static_cast<int>(std::floor(geom.cx - geom.bound - 1.0)));
    const int x1 = std::min(kImageSize - 1, static_cast<int>(std::ceil(geom.cx + geom.bound + 1.0)));
    const int y0 = std::max(0, static_cast<int>(std::floor(geom.cy - geom.bound - 1.0)));
    const int y1 = std::min(kImageSize - 1, static_cast<int>(std::ceil(geom.cy + geom.bound + 1.0)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            int hits = 0;
            for (int sy = 0; sy < 4; ++sy) {
                const double py = y + (sy + 0.5) / 4.0;
                for (int sx = 0; sx < 4; ++sx) {
                    const double px = x + (sx + 0.5) / 4.0;
                    hits += geom.contains(px, py) ? 1 : 0;
                }
            }
            if (hits >= 8) bm.set(x, y, true);
        }
    }
    return bm;
}

// Full grid in lexicographic (shape, pos_x, pos_y, scale, rotation) order.
inline std::vector<FactorTuple> enumerate_factors() {
    std::vector<FactorTuple> out;
    out.reserve(static_cast<std::size_t>(kNumShapes) * kNumPositions * kNumPositions *
                kNumScales * kNumRotations);
    for (int sh = 0; sh < kNumShapes; ++sh)
        for (int px = 0; px < kNumPositions; ++px)
            for (int py = 0; py < kNumPositions; ++py)
                for (int sc = 0; sc < kNumScales; ++sc)
                    for (int rot = 0; rot < kNumRotations; ++rot)
                        out.push_back(FactorTuple{static_cast<Shape>(sh),
                                                  static_cast<std::uint8_t>(px),
                                                  static_cast<std::uint8_t>(py),
                                                  static_cast<std::uint8_t>(sc),
                                                  static_cast<std::uint8_t>(rot)});
    return out;
}

enum class SplitTag : std::uint8_t { train = 0, validation = 1, test = 2 };

struct DatasetRecord {
    FactorTuple factors;
    SplitTag split = SplitTag::train;
    Bitmap bitmap;
};

struct ShapesDataset {
    std::uint64_t seed = 0;
    std::vector<DatasetRecord> records;

    std::size_t split_count(SplitTag tag) const {
        std::size_t n = 0;
        for (const auto& r : records) n += (r.split == tag) ? 1 : 0;
        return n;
    }
    std::vector<std::size_t> split_indices(SplitTag tag) const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < records.size(); ++i)
            if (records[i].split == tag) idx.push_back(i);
        return idx;
    }
};

namespace detail {

// Removes records whose bitmap is pixel-identical to an earlier record,
// keeping the first occurrence. Order-preserving.
inline void dedup_records(std::vector<DatasetRecord>& records) {
    std::unordered_map<Bitmap, std::size_t, BitmapHash> seen;
    seen.reserve(records.size() * 2);
    std::vector<DatasetRecord> kept;
    kept.reserve(records.size());
    for (auto& r : records) {
        auto [it, inserted] = seen.emplace(r.bitmap, kept.size());
        if (inserted) kept.push_back(std::move(r));
    }
    records = std::move(kept);
}

// 70:15:15 assignment, stratified by shape, seeded. Counts per split use
// largest-remainder rounding so each (split, shape) cell is off by at most
// one from its exact share.
inline void assign_splits(std::vector<DatasetRecord>& records, std::uint64_t seed) {
    RngState root = RngState::seeded(seed);
    for (int sh = 0; sh < kNumShapes; ++sh) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < records.size(); ++i)
            if (static_cast<int>(records[i].factors.shape) == sh) idx.push_back(i);
        RngState rng = root.substream("split/shape=" + std::to_string(sh));
        rng.shuffle(idx);
        const std::size_t n = idx.size();
        const std::size_t n_train = static_cast<std::size_t>(std::llround(0.70 * static_cast<double>(n)));
        const std::size_t n_val = static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(n)));
        for (std::size_t i = 0; i < n; ++i) {
            SplitTag tag = SplitTag::test;
            if (i < n_train)
                tag = SplitTag::train;
            else if (i < n_train + n_val)
                tag = SplitTag::validation;
            records[idx[i]].split = tag;
        }
    }
}

}  // namespace detail

// Enumerates the grid, renders every tuple, removes duplicate renders
// (first occurrence wins), and assigns seeded stratified splits.
inline ShapesDataset build_dataset(std::uint64_t seed) {
    ShapesDataset ds;
    ds.seed = seed;
    const std::vector<FactorTuple> grid = enumerate_factors();
    ds.records.reserve(grid.size());
    for (const FactorTuple& f : grid) {
        DatasetRecord rec;
        rec.factors = f;
        rec.bitmap = rasterize(f);
        ds.records.push_back(std::move(rec));
    }
    detail::dedup_records(ds.records);
    detail::assign_splits(ds.records, seed);
    return ds;
}

// ---------------------------------------------------------------------------
// Dataset container file
//
// Little-endian. Layout:
//   magic   "DSAE"  (4 bytes)
//   version u32 = 1
//   seed    u64
//   count   u32
//   count records of:
//     shape u8, pos_x u8, pos_y u8, scale u8, rotation u8, split u8,
//     bitmap 512 bytes (4096 bits, row-major, MSB-first)
// ---------------------------------------------------------------------------

namespace detail {

inline void write_u32(std::ostream& os, std::uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
                 static_cast<char>(v >> 24)};
    os.write(b, 4);
}
inline void write_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
    os.write(b, 8);
}
inline std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw FormatError("dataset file: truncated while reading u32");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
inline std::uint64_t read_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw FormatError("dataset file: truncated while reading u64");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace detail

inline void save_dataset(const ShapesDataset& ds, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os.write("DSAE", 4);
    detail::write_u32(os, 1);
    detail::write_u64(os, ds.seed);
    detail::write_u32(os, static_cast<std::uint32_t>(ds.records.size()));
    for (const auto& r : ds.records) {
        const char head[6] = {static_cast<char>(r.factors.shape),
                              static_cast<char>(r.factors.pos_x),
                              static_cast<char>(r.factors.pos_y),
                              static_cast<char>(r.factors.scale),
                              static_cast<char>(r.factors.rotation),
                              static_cast<char>(r.split)};
        os.write(head, 6);
        os.write(reinterpret_cast<const char*>(r.bitmap.bits.data()),
                 static_cast<std::streamsize>(r.bitmap.bits.size()));
    }
    if (!os) throw IoError("write failed: " + path);
}

inline ShapesDataset load_dataset(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "DSAE", 4) != 0)
        throw FormatError("dataset file: bad magic (expected DSAE): " + path);
    const std::uint32_t version = detail::read_u32(is);
    if (version != 1)
        throw FormatError("dataset file: unsupported version " + std::to_string(version));
    ShapesDataset ds;
    ds.seed = detail::read_u64(is);
    const std::uint32_t count = detail::read_u32(is);
    ds.records.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        unsigned char head[6];
        is.read(reinterpret_cast<char*>(head), 6);
        if (!is) throw FormatError("dataset file: truncated record header at " + std::to_string(i));
        if (head[0] >= kNumShapes || head[1] >= kNumPositions || head[2] >= kNumPositions ||
            head[3] >= kNumScales || head[4] >= kNumRotations || head[5] > 2)
            throw FormatError("dataset file: factor value out of range at record " +
                              std::to_string(i));
        DatasetRecord& r = ds.records[i];
        r.factors = FactorTuple{static_cast<Shape>(head[0]), head[1], head[2], head[3], head[4]};
        r.split = static_cast<SplitTag>(head[5]);
        is.read(reinterpret_cast<char*>(r.bitmap.bits.data()),
                static_cast<std::streamsize>(r.bitmap.bits.size()));
        if (!is) throw FormatError("dataset file: truncated bitmap at record " + std::to_string(i));
    }
    return ds;
}

}  // namespace disent

#endif
