#ifndef QTF_IO_HPP
#define QTF_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "qtf/dynamics.hpp"
#include "qtf/grid.hpp"

namespace qtf {

// Field snapshot format: one header line
//   QTF1 dims=<n1>x<n2>[x<n3>] h=<h> fields=<list>
// followed by little-endian float64 blocks in row-major cell order, one
// block per declared field (Q: 9 per cell, u: dim per cell, p: 1).
struct SnapshotFile {
    int dim = 2;
    std::array<int, 3> dims{0, 0, 1};
    double h = 0.0;
    std::vector<std::string> fields;
    std::map<std::string, std::vector<double>> blocks;
};

void write_snapshot(const std::string& path, const SimState& s, bool include_flow);
SnapshotFile read_snapshot(const std::string& path);
TensorField snapshot_q(const SnapshotFile& f, Domain dom);

// CSV export: one row per cell, columns i,j[,k],x,y[,z],<components>.
void write_csv(const std::string& path, const ScalarField& f, const std::string& name);
void write_csv(const std::string& path, const TensorField& f, const std::string& name);
void write_csv(const std::string& path, const VectorField& u, const std::string& name);

// header: t,kinetic,elastic,bulk,total,dissipation,law_residual,monotone
void write_ledger_csv(const std::string& path, const EnergyLedger& ledger);
EnergyLedger read_ledger_csv(const std::string& path);

struct SnapshotManifestRow {
    long step = 0;
    double t = 0.0;
    std::string file;
};
void write_snapshot_manifest(const std::string& path,
                             const std::vector<SnapshotManifestRow>& rows);
std::vector<SnapshotManifestRow> read_snapshot_manifest(const std::string& path);

std::string fmt_g17(double v);

}  // namespace qtf

#endif
