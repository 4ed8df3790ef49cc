#include "cim/instance.hpp"
#include "cim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cim {

CouplingMatrix::CouplingMatrix(int n, std::vector<double> dense_row_major) {
    if (n < 1) throw std::invalid_argument("coupling matrix: n must be >= 1");
    if (dense_row_major.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("coupling matrix: entry count does not match n*n");
    n_ = n;
    dense_ = std::move(dense_row_major);

    for (int i = 0; i < n_; ++i)
        if (entry(i, i) != 0.0) throw std::invalid_argument("coupling matrix: diagonal must be zero");

    symmetric_ = true;
    nnz_ = 0;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const double w = entry(i, j);
            if (w != 0.0) ++nnz_;
            if (j > i && w != entry(j, i)) symmetric_ = false;
        }
    }
    xi_ = recompute_xi(n_, dense_);

    const double density = n_ > 1 ? static_cast<double>(nnz_) / (static_cast<double>(n_) * n_) : 1.0;
    use_csr_ = density < sparse_density_threshold && nnz_ > 0;
    if (use_csr_) {
        csr_ptr_.assign(n_ + 1, 0);
        csr_col_.reserve(nnz_);
        csr_val_.reserve(nnz_);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                const double w = entry(i, j);
                if (w != 0.0) {
                    csr_col_.push_back(j);
                    csr_val_.push_back(w);
                }
            }
            csr_ptr_[i + 1] = static_cast<int>(csr_col_.size());
        }
    }
}

double CouplingMatrix::recompute_xi(int n, const std::vector<double>& dense) {
    double sum_sq = 0.0;
    for (double w : dense) sum_sq += w * w;
    if (sum_sq <= 0.0) return 1.0; // decoupled instance; scale is irrelevant
    return std::sqrt(2.0 * n / sum_sq);
}

namespace {

// Eight-lane accumulation keyed by column index; the reduction order is part
// of the determinism contract shared by the dense and CSR paths.
inline double reduce8(const double* a) {
    return ((a[0] + a[1]) + (a[2] + a[3])) + ((a[4] + a[5]) + (a[6] + a[7]));
}

inline void mvm_dense(const double* J, int n, const double* x, double* z) {
    for (int i = 0; i < n; ++i) {
        const double* __restrict row = J + static_cast<size_t>(i) * n;
        double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0, s6 = 0, s7 = 0;
        int j = 0;
        for (; j + 8 <= n; j += 8) {
            s0 += row[j] * x[j];
            s1 += row[j + 1] * x[j + 1];
            s2 += row[j + 2] * x[j + 2];
            s3 += row[j + 3] * x[j + 3];
            s4 += row[j + 4] * x[j + 4];
            s5 += row[j + 5] * x[j + 5];
            s6 += row[j + 6] * x[j + 6];
            s7 += row[j + 7] * x[j + 7];
        }
        double acc[8] = {s0, s1, s2, s3, s4, s5, s6, s7};
        for (; j < n; ++j) acc[j & 7] += row[j] * x[j];
        z[i] = reduce8(acc);
    }
}

} // namespace

void CouplingMatrix::mvm(const double* x, double* z) const {
    if (!use_csr_) {
        mvm_dense(dense_.data(), n_, x, z);
        return;
    }
    for (int i = 0; i < n_; ++i) {
        double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        for (int idx = csr_ptr_[i]; idx < csr_ptr_[i + 1]; ++idx) {
            const int j = csr_col_[idx];
            acc[j & 7] += csr_val_[idx] * x[j];
        }
        z[i] = reduce8(acc);
    }
}

void CouplingMatrix::mvm_sign(const double* x, double* z) const {
    thread_local std::vector<double> sgn;
    sgn.resize(n_);
    for (int i = 0; i < n_; ++i) sgn[i] = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
    mvm(sgn.data(), z);
}

CouplingMatrix sk_random(int n, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sk_random: n must be >= 2");
    Rng rng(mix64(seed ^ 0x536b52616e646f6dULL));
    std::vector<double> J(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double w = (rng.next_u64() >> 63) ? 1.0 : -1.0;
            J[static_cast<size_t>(i) * n + j] = w;
            J[static_cast<size_t>(j) * n + i] = w;
        }
    }
    return CouplingMatrix(n, std::move(J));
}

CouplingMatrix ferromagnet(int n) {
    if (n < 2) throw std::invalid_argument("ferromagnet: n must be >= 2");
    std::vector<double> J(static_cast<size_t>(n) * n, -1.0);
    for (int i = 0; i < n; ++i) J[static_cast<size_t>(i) * n + i] = 0.0;
    return CouplingMatrix(n, std::move(J));
}

CouplingMatrix torus_pm(int rows, int cols, uint64_t seed) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("torus_pm: grid must be at least 2x2");
    const int n = rows * cols;
    Rng rng(mix64(seed ^ 0x746f727573ULL));
    std::vector<double> J(static_cast<size_t>(n) * n, 0.0);
    auto at = [cols](int r, int c) { return r * cols + c; };
    auto set = [&](int a, int b) {
        const double w = (rng.next_u64() >> 63) ? 1.0 : -1.0;
        J[static_cast<size_t>(a) * n + b] = w;
        J[static_cast<size_t>(b) * n + a] = w;
    };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            set(at(r, c), at((r + 1) % rows, c));
            set(at(r, c), at(r, (c + 1) % cols));
        }
    }
    return CouplingMatrix(n, std::move(J));
}

CouplingMatrix parse_gset(std::istream& in) {
    std::string line;
    int line_no = 0;
    long n = 0, m = 0;

    auto next_content_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_content_line()) throw parse_error(1, "missing header");
    {
        std::istringstream hs(line);
        if (!(hs >> n >> m)) throw parse_error(line_no, "header must be '<nodes> <edges>'");
        std::string extra;
        if (hs >> extra) throw parse_error(line_no, "trailing tokens after header");
        if (n < 1) throw parse_error(line_no, "node count must be positive");
        if (m < 0) throw parse_error(line_no, "edge count must be non-negative");
    }

    std::vector<double> J(static_cast<size_t>(n) * n, 0.0);
    std::vector<bool> seen(static_cast<size_t>(n) * n, false);
    long edges_read = 0;
    while (next_content_line()) {
        std::istringstream es(line);
        long i = 0, j = 0;
        double w = 0.0;
        if (!(es >> i >> j >> w)) throw parse_error(line_no, "expected '<i> <j> <w>'");
        std::string extra;
        if (es >> extra) throw parse_error(line_no, "trailing tokens after edge");
        if (i < 1 || i > n || j < 1 || j > n) throw parse_error(line_no, "vertex index out of range");
        if (i == j) throw parse_error(line_no, "self-loop");
        const size_t a = static_cast<size_t>(i - 1) * n + (j - 1);
        const size_t b = static_cast<size_t>(j - 1) * n + (i - 1);
        if (seen[a]) throw parse_error(line_no, "duplicate edge");
        seen[a] = seen[b] = true;
        J[a] = w;
        J[b] = w;
        ++edges_read;
        if (edges_read > m) throw parse_error(line_no, "more edges than declared in header");
    }
    if (edges_read != m)
        throw parse_error(line_no == 0 ? 1 : line_no,
                          "edge count mismatch: header declares " + std::to_string(m) + ", found " +
                              std::to_string(edges_read));
    return CouplingMatrix(static_cast<int>(n), std::move(J));
}

CouplingMatrix parse_gset_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open instance file: " + path);
    return parse_gset(f);
}

void serialize_gset(const CouplingMatrix& J, std::ostream& out) {
    const int n = J.n();
    size_t edges = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (J.entry(i, j) != 0.0) ++edges;
    out << n << ' ' << edges << '\n';
    char buf[64];
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double w = J.entry(i, j);
            if (w == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%.17g", w);
            out << (i + 1) << ' ' << (j + 1) << ' ' << buf << '\n';
        }
    }
}

double ising_energy(const CouplingMatrix& J, const SpinConfig& s) {
    if (s.n() != J.n()) throw std::invalid_argument("ising_energy: dimension mismatch");
    std::vector<double> f(J.n());
    J.mvm(s.sigma.data(), f.data());
    double e = 0.0;
    for (int i = 0; i < J.n(); ++i) e += s.sigma[i] * f[i];
    return 0.5 * e;
}

double cut_value(const CouplingMatrix& J, const SpinConfig& s) {
    if (s.n() != J.n()) throw std::invalid_argument("cut_value: dimension mismatch");
    double cut = 0.0;
    for (int i = 0; i < J.n(); ++i) {
        auto row_from = [&](int j, double w) {
            if (j > i) cut += w * (1.0 - s.sigma[i] * s.sigma[j]) * 0.5;
        };
        J.for_row(i, row_from);
    }
    return cut;
}

GroundTruth brute_force_ground(const CouplingMatrix& J) {
    const int n = J.n();
    if (n > 24) throw std::invalid_argument("brute_force_ground: n > 24 is not enumerable here");

    // Gray-code walk: one spin flip per visited configuration.
    std::vector<double> sigma(n, 1.0);
    std::vector<double> field(n, 0.0);
    J.mvm(sigma.data(), field.data());
    double energy = 0.0;
    for (int i = 0; i < n; ++i) energy += sigma[i] * field[i];
    energy *= 0.5;

    GroundTruth best;
    best.energy = energy;
    best.degeneracy = 1;
    best.witness.sigma = sigma;

    const uint64_t total = 1ULL << n;
    for (uint64_t k = 1; k < total; ++k) {
        const int bit = __builtin_ctzll(k); // Gray code flips this spin
        energy += -2.0 * sigma[bit] * field[bit];
        sigma[bit] = -sigma[bit];
        const double twos = 2.0 * sigma[bit];
        J.for_row(bit, [&](int j, double w) { field[j] += twos * w; });

        if (energy < best.energy - 1e-12) {
            best.energy = energy;
            best.degeneracy = 1;
            best.witness.sigma = sigma;
        } else if (energy <= best.energy + 1e-12) {
            ++best.degeneracy;
        }
    }
    return best;
}

} // namespace cim
