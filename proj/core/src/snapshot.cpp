#include "chemotax/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace chemotax {

namespace {

constexpr char magic[4] = {'C', 'T', 'X', '2'};

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double d) {
    std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

double get_f64(const char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return std::bit_cast<double>(v);
}

void put_field(std::string& buf, const Field& f) {
    for (double v : f.values()) put_f64(buf, v);
}

Field get_field(const char*& p, int nx, int ny) {
    Field f(nx, ny);
    for (std::size_t i = 0; i < f.size(); ++i, p += 8) f[i] = get_f64(p);
    return f;
}

} // namespace

Snapshot make_snapshot(const SimState& state, const DomainSpec& dom,
                       const ModelParams& params) {
    Snapshot s;
    s.nx = static_cast<std::uint32_t>(dom.nx);
    s.ny = static_cast<std::uint32_t>(dom.ny);
    s.hx = dom.hx();
    s.hy = dom.hy();
    s.t = state.t;
    s.tau1 = params.tau1;
    s.tau2 = params.tau2;
    s.chi1 = params.chi1;
    s.chi2 = params.chi2;
    s.chi3 = params.chi3;
    s.u = state.u;
    s.v = state.v;
    s.w = state.w;
    s.z = state.z;
    return s;
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
    std::string buf;
    buf.reserve(80 + 4 * snap.u.size() * 8);
    buf.append(magic, 4);
    put_u32(buf, snap.version);
    put_u32(buf, snap.nx);
    put_u32(buf, snap.ny);
    for (double d : {snap.hx, snap.hy, snap.t, snap.tau1, snap.tau2, snap.chi1,
                     snap.chi2, snap.chi3})
        put_f64(buf, d);
    put_field(buf, snap.u);
    put_field(buf, snap.v);
    put_field(buf, snap.w);
    put_field(buf, snap.z);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidData("write_snapshot: cannot open '" + path + "'");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw InvalidData("write_snapshot: short write to '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidData("read_snapshot: cannot open '" + path + "'");
    std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
    if (buf.size() < 76 || std::memcmp(buf.data(), magic, 4) != 0)
        throw InvalidData("read_snapshot: bad magic in '" + path + "'");

    Snapshot s;
    const char* p = buf.data() + 4;
    s.version = get_u32(p);
    p += 4;
    if (s.version != 1)
        throw InvalidData("read_snapshot: unsupported format version");
    s.nx = get_u32(p);
    p += 4;
    s.ny = get_u32(p);
    p += 4;
    double* meta[] = {&s.hx, &s.hy, &s.t, &s.tau1, &s.tau2, &s.chi1, &s.chi2, &s.chi3};
    for (double* m : meta) {
        *m = get_f64(p);
        p += 8;
    }
    const std::size_t payload = 4ull * s.nx * s.ny * 8ull;
    const std::size_t header = static_cast<std::size_t>(p - buf.data());
    if (buf.size() != header + payload)
        throw InvalidData("read_snapshot: payload length mismatch");
    s.u = get_field(p, s.nx, s.ny);
    s.v = get_field(p, s.nx, s.ny);
    s.w = get_field(p, s.nx, s.ny);
    s.z = get_field(p, s.nx, s.ny);
    return s;
}

} // namespace chemotax
