#include "pns/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace pns {
namespace {

constexpr char kMagic[8] = {'P', 'N', 'S', 'C', 'H', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

void write_field(std::ostream& out, const SpectralField& f) {
    static_assert(sizeof(Complex) == 2 * sizeof(double));
    out.write(reinterpret_cast<const char*>(f.data().data()),
              static_cast<std::streamsize>(f.data().size() * sizeof(Complex)));
}

void read_field(std::istream& in, SpectralField& f) {
    in.read(reinterpret_cast<char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size() * sizeof(Complex)));
}

}  // namespace

void write_checkpoint(const std::string& path, const FluidState& state,
                      const nlohmann::json& extra) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");

    nlohmann::json header = {
        {"version", kVersion},
        {"t", state.t},
        {"grid", {{"d", state.a.grid().d}, {"n", state.a.grid().n}, {"l", state.a.grid().length}}},
        {"viscosity", {{"mu", state.visc.mu}, {"nu", state.visc.nu}}},
    };
    if (!extra.is_null() && !extra.empty()) header["meta"] = extra;
    std::string htext = header.dump();

    out.write(kMagic, sizeof(kMagic));
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(htext.size()));
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    write_field(out, state.a);
    write_field(out, state.u);
    if (!out) throw Error(ErrorKind::IoFailure, "short write to '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "'");

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw Error(ErrorKind::IoFailure, "'" + path + "' is not a checkpoint file");
    std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw Error(ErrorKind::IoFailure,
                    "checkpoint version " + std::to_string(version) + " unsupported");
    std::uint32_t hlen = read_u32(in);
    std::string htext(hlen, '\0');
    in.read(htext.data(), hlen);
    if (!in) throw Error(ErrorKind::IoFailure, "truncated checkpoint header");

    nlohmann::json header = nlohmann::json::parse(htext);
    BoxGrid grid(header["grid"]["d"].get<int>(), header["grid"]["n"].get<int>(),
                 header["grid"]["l"].get<double>());
    Viscosity visc(header["viscosity"]["mu"].get<double>(),
                   header["viscosity"]["nu"].get<double>());

    Checkpoint cp{FluidState(grid, visc), header};
    cp.state.t = header["t"].get<double>();
    read_field(in, cp.state.a);
    read_field(in, cp.state.u);
    if (!in) throw Error(ErrorKind::IoFailure, "truncated checkpoint payload");
    return cp;
}

}  // namespace pns
