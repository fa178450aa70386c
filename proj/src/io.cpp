#include "qtf/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qtf/operators.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian");

namespace qtf {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_block(std::ofstream& os, const std::vector<double>& data) {
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(double)));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

long block_comps(const std::string& name, int dim) {
    if (name == "Q") return 9;
    if (name == "u") return dim;
    if (name == "p") return 1;
    throw std::runtime_error("snapshot: unknown field '" + name + "'");
}

}  // namespace

void write_snapshot(const std::string& path, const SimState& s, bool include_flow) {
    const Grid& g = s.q.g;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    std::ostringstream hdr;
    hdr << "QTF1 dims=" << g.n[0] << "x" << g.n[1];
    if (g.dim == 3) hdr << "x" << g.n[2];
    hdr << " h=" << fmt_g17(g.h[0]) << " fields=Q";
    if (include_flow) hdr << ",u,p";
    hdr << "\n";
    os << hdr.str();
    write_block(os, s.q.v);
    if (include_flow) {
        write_block(os, cell_average(s.u));
        write_block(os, s.p.v);
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

SnapshotFile read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string header;
    std::getline(is, header);
    SnapshotFile f;
    std::istringstream hs(header);
    std::string magic, tok;
    hs >> magic;
    if (magic != "QTF1") throw std::runtime_error("bad snapshot header: " + path);
    while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("bad snapshot token " + tok);
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "dims") {
            auto parts = split(val, 'x');
            if (parts.size() != 2 && parts.size() != 3)
                throw std::runtime_error("bad dims in " + path);
            f.dim = static_cast<int>(parts.size());
            for (size_t i = 0; i < parts.size(); ++i)
                f.dims[i] = std::stoi(parts[i]);
            if (f.dim == 2) f.dims[2] = 1;
        } else if (key == "h") {
            f.h = std::stod(val);
        } else if (key == "fields") {
            f.fields = split(val, ',');
        } else {
            throw std::runtime_error("unknown snapshot key " + key);
        }
    }
    const long cells = static_cast<long>(f.dims[0]) * f.dims[1] * f.dims[2];
    for (const std::string& name : f.fields) {
        std::vector<double> data(static_cast<size_t>(cells * block_comps(name, f.dim)));
        is.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(data.size() * sizeof(double)));
        if (!is) throw std::runtime_error("truncated snapshot: " + path);
        f.blocks[name] = std::move(data);
    }
    return f;
}

TensorField snapshot_q(const SnapshotFile& f, Domain dom) {
    auto it = f.blocks.find("Q");
    if (it == f.blocks.end()) throw std::runtime_error("snapshot has no Q block");
    Grid g = Grid::make(f.dim, f.dims, f.h, dom);
    TensorField q(g);
    q.v = it->second;
    return q;
}

namespace {

void csv_cells(std::ofstream& os, const Grid& g, int ncomp,
               const std::vector<std::string>& names, const double* data) {
    os << "i,j";
    if (g.dim == 3) os << ",k";
    os << ",x,y";
    if (g.dim == 3) os << ",z";
    for (const auto& n : names) os << "," << n;
    os << "\n";
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                os << i << "," << j;
                if (g.dim == 3) os << "," << k;
                os << "," << fmt_g17(g.coord(0, i)) << "," << fmt_g17(g.coord(1, j));
                if (g.dim == 3) os << "," << fmt_g17(g.coord(2, k));
                const long c = g.cell_index(i, j, k);
                for (int q = 0; q < ncomp; ++q)
                    os << "," << fmt_g17(data[c * ncomp + q]);
                os << "\n";
            }
}

}  // namespace

void write_csv(const std::string& path, const ScalarField& f, const std::string& name) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    csv_cells(os, f.g, 1, {name}, f.v.data());
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_csv(const std::string& path, const TensorField& f, const std::string& name) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> names;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            names.push_back(name + std::to_string(r) + std::to_string(c));
    csv_cells(os, f.g, 9, names, f.v.data());
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_csv(const std::string& path, const VectorField& u, const std::string& name) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> names;
    const char* ax = "xyz";
    for (int a = 0; a < u.g.dim; ++a) names.push_back(name + ax[a]);
    std::vector<double> avg = cell_average(u);
    csv_cells(os, u.g, u.g.dim, names, avg.data());
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "t,kinetic,elastic,bulk,total,dissipation,law_residual,monotone\n";
    for (const LedgerRow& r : ledger.rows)
        os << fmt_g17(r.t) << "," << fmt_g17(r.kinetic) << "," << fmt_g17(r.elastic)
           << "," << fmt_g17(r.bulk) << "," << fmt_g17(r.total) << ","
           << fmt_g17(r.dissipation) << "," << fmt_g17(r.law_residual) << ","
           << (r.monotone ? 1 : 0) << "\n";
    if (!os) throw std::runtime_error("write failed: " + path);
}

EnergyLedger read_ledger_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(is, line) ||
        line != "t,kinetic,elastic,bulk,total,dissipation,law_residual,monotone")
        throw std::runtime_error("bad ledger header in " + path);
    EnergyLedger ledger;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto parts = split(line, ',');
        if (parts.size() != 8) throw std::runtime_error("bad ledger row in " + path);
        LedgerRow r;
        r.t = std::stod(parts[0]);
        r.kinetic = std::stod(parts[1]);
        r.elastic = std::stod(parts[2]);
        r.bulk = std::stod(parts[3]);
        r.total = std::stod(parts[4]);
        r.dissipation = std::stod(parts[5]);
        r.law_residual = std::stod(parts[6]);
        r.monotone = parts[7] == "1";
        ledger.rows.push_back(r);
    }
    return ledger;
}

void write_snapshot_manifest(const std::string& path,
                             const std::vector<SnapshotManifestRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "step,t,file\n";
    for (const auto& r : rows)
        os << r.step << "," << fmt_g17(r.t) << "," << r.file << "\n";
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<SnapshotManifestRow> read_snapshot_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != "step,t,file")
        throw std::runtime_error("bad manifest header in " + path);
    std::vector<SnapshotManifestRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto parts = split(line, ',');
        if (parts.size() != 3) throw std::runtime_error("bad manifest row in " + path);
        rows.push_back({std::stol(parts[0]), std::stod(parts[1]), parts[2]});
    }
    return rows;
}

}  // namespace qtf
