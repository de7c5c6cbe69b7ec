#include "besovq/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace besovq::io {

namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path) {
        const auto parent = std::filesystem::path(path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        out_.open(path, std::ios::binary);
        if (!out_) throw Error("cannot open '" + path + "' for writing");
    }
    void bytes(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }
    void u64(std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
        bytes(b, 8);
    }
    void u32(std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
        bytes(b, 4);
    }
    void i32(int v) { u32(static_cast<std::uint32_t>(v)); }
    void u8(std::uint8_t v) { bytes(reinterpret_cast<const char*>(&v), 1); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void finish() {
        out_.flush();
        if (!out_) throw Error("write to '" + path_ + "' failed");
    }

private:
    std::string path_;
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw Error("cannot open '" + path + "' for reading");
    }
    void bytes(char* p, std::size_t n) {
        in_.read(p, static_cast<std::streamsize>(n));
        if (!in_) throw Error("'" + path_ + "' is truncated");
    }
    std::uint64_t u64() {
        unsigned char b[8];
        bytes(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    std::uint32_t u32() {
        unsigned char b[4];
        bytes(reinterpret_cast<char*>(b), 4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    int i32() { return static_cast<int>(u32()); }
    std::uint8_t u8() {
        char c;
        bytes(&c, 1);
        return static_cast<std::uint8_t>(c);
    }
    double f64() { return std::bit_cast<double>(u64()); }
    void magic(const char* expect) {
        char m[4];
        bytes(m, 4);
        if (std::memcmp(m, expect, 4) != 0) throw Error("'" + path_ + "' is not a " + std::string(expect, 4) + " file");
        if (u32() != kVersion) throw Error("'" + path_ + "' has an unsupported version");
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream in_;
};

void write_spec(Writer& w, const BasisSpec& spec) {
    w.i32(spec.grid.dim);
    w.i32(spec.grid.size);
    w.i32(spec.grid.box_exponent);
    w.i32(spec.j_min);
    w.i32(spec.j_max);
}

BasisSpec read_spec(Reader& r) {
    BasisSpec spec;
    spec.grid.dim = r.i32();
    spec.grid.size = r.i32();
    spec.grid.box_exponent = r.i32();
    spec.j_min = r.i32();
    spec.j_max = r.i32();
    spec.validate();
    return spec;
}

}  // namespace

void write_coefficients(const std::string& path, const CoefficientSet& coeffs) {
    Writer w(path);
    w.bytes("BQCS", 4);
    w.u32(kVersion);
    write_spec(w, coeffs.spec());
    w.i32(coeffs.components());
    w.u8(coeffs.time ? 1 : 0);
    w.f64(coeffs.time.value_or(0.0));
    w.u64(coeffs.nonzeros());
    coeffs.for_each([&](int c, const WaveletIndex& idx, cplx v) {
        w.i32(c);
        w.u32(idx.eps);
        w.i32(idx.j);
        for (int a = 0; a < 3; ++a) w.i32(idx.k[a]);
        w.f64(v.real());
        w.f64(v.imag());
    });
    w.finish();
}

CoefficientSet read_coefficients(const std::string& path) {
    Reader r(path);
    r.magic("BQCS");
    const BasisSpec spec = read_spec(r);
    const int comps = r.i32();
    if (comps < 1) throw Error("'" + path + "' has no components");
    CoefficientSet out(spec, comps);
    const bool has_time = r.u8() != 0;
    const double t = r.f64();
    if (has_time) out.time = t;
    const std::uint64_t count = r.u64();
    for (std::uint64_t i = 0; i < count; ++i) {
        const int c = r.i32();
        WaveletIndex idx;
        idx.eps = r.u32();
        idx.j = r.i32();
        for (int a = 0; a < 3; ++a) idx.k[a] = r.i32();
        const double re = r.f64(), im = r.f64();
        if (c < 0 || c >= comps) throw Error("'" + path + "' has a component index out of range");
        out.set(c, idx, cplx(re, im));
    }
    return out;
}

nlohmann::json coefficients_to_json(const CoefficientSet& coeffs) {
    const BasisSpec& spec = coeffs.spec();
    nlohmann::json j;
    j["grid"] = {{"dim", spec.grid.dim}, {"size", spec.grid.size}, {"box_exponent", spec.grid.box_exponent}};
    j["j_min"] = spec.j_min;
    j["j_max"] = spec.j_max;
    j["components"] = coeffs.components();
    if (coeffs.time) j["time"] = *coeffs.time;
    nlohmann::json entries = nlohmann::json::array();
    coeffs.for_each([&](int c, const WaveletIndex& idx, cplx v) {
        std::vector<int> k(idx.k.begin(), idx.k.begin() + spec.grid.dim);
        entries.push_back({{"c", c}, {"eps", idx.eps}, {"j", idx.j}, {"k", k}, {"re", v.real()}, {"im", v.imag()}});
    });
    j["entries"] = std::move(entries);
    return j;
}

CoefficientSet coefficients_from_json(const nlohmann::json& j) {
    try {
        BasisSpec spec;
        spec.grid.dim = j.at("grid").at("dim").get<int>();
        spec.grid.size = j.at("grid").at("size").get<int>();
        spec.grid.box_exponent = j.at("grid").at("box_exponent").get<int>();
        spec.j_min = j.at("j_min").get<int>();
        spec.j_max = j.at("j_max").get<int>();
        spec.validate();
        CoefficientSet out(spec, j.at("components").get<int>());
        if (j.contains("time")) out.time = j["time"].get<double>();
        for (const auto& e : j.at("entries")) {
            WaveletIndex idx;
            idx.eps = e.at("eps").get<unsigned>();
            idx.j = e.at("j").get<int>();
            const auto k = e.at("k").get<std::vector<int>>();
            if (static_cast<int>(k.size()) != spec.grid.dim) throw Error("coefficient entry has a wrong k length");
            for (std::size_t a = 0; a < k.size(); ++a) idx.k[a] = k[a];
            out.set(e.at("c").get<int>(), idx, cplx(e.at("re").get<double>(), e.value("im", 0.0)));
        }
        return out;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("malformed coefficient JSON: ") + ex.what());
    }
}

void write_checkpoint(const std::string& path, const Checkpoint& ck) {
    Writer w(path);
    const Grid& g = ck.field.grid();
    w.bytes("BQCK", 4);
    w.u32(kVersion);
    w.i32(g.dim);
    w.i32(g.size);
    w.i32(g.box_exponent);
    w.i32(ck.field.components());
    w.f64(ck.beta);
    w.f64(ck.time);
    for (const cplx& v : ck.field.raw()) {
        w.f64(v.real());
        w.f64(v.imag());
    }
    w.finish();
}

Checkpoint read_checkpoint(const std::string& path) {
    Reader r(path);
    r.magic("BQCK");
    Grid g;
    g.dim = r.i32();
    g.size = r.i32();
    g.box_exponent = r.i32();
    const int comps = r.i32();
    Checkpoint ck;
    ck.beta = r.f64();
    ck.time = r.f64();
    ck.field = SpectralField(g, comps);
    for (cplx& v : ck.field.raw()) {
        const double re = r.f64();
        v = cplx(re, r.f64());
    }
    return ck;
}

void write_trajectory_csv(const std::string& path, const CoefficientTrajectory& tc, double floor) {
    std::ostringstream os;
    os << std::setprecision(17);
    const int n = tc.spec().grid.dim;
    os << "t,component,eps,j";
    for (int a = 0; a < n; ++a) os << ",k" << a;
    os << ",re,im,abs\n";
    for (std::size_t i = 0; i < tc.size(); ++i)
        tc.sets[i].for_each([&](int c, const WaveletIndex& idx, cplx v) {
            if (std::abs(v) <= floor) return;
            os << tc.times[i] << ',' << c << ',' << idx.eps << ',' << idx.j;
            for (int a = 0; a < n; ++a) os << ',' << idx.k[a];
            os << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
        });
    write_text(path, os.str());
}

void write_czo_csv(const std::string& path, const std::vector<CzoMatrixEntry>& entries, int dim) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "row_eps,row_j";
    for (int a = 0; a < dim; ++a) os << ",row_k" << a;
    os << ",col_eps,col_j";
    for (int a = 0; a < dim; ++a) os << ",col_k" << a;
    os << ",value\n";
    for (const auto& e : entries) {
        os << e.row.eps << ',' << e.row.j;
        for (int a = 0; a < dim; ++a) os << ',' << e.row.k[a];
        os << ',' << e.col.eps << ',' << e.col.j;
        for (int a = 0; a < dim; ++a) os << ',' << e.col.k[a];
        os << ',' << e.value << '\n';
    }
    write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& text) {
    Writer w(path);
    w.bytes(text.data(), text.size());
    w.finish();
}

void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw Error("'" + path + "' is not valid JSON: " + ex.what());
    }
}

}  // namespace besovq::io
