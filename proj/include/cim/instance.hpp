#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cim {

struct parse_error : std::runtime_error {
    parse_error(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    int line;
};

// Spin configuration; entries are exactly +1.0 or -1.0.
struct SpinConfig {
    std::vector<double> sigma;

    int n() const { return static_cast<int>(sigma.size()); }
};

// sign readout with the 0 -> +1 tie-break
inline double sign_readout(double x) { return x >= 0.0 ? 1.0 : -1.0; }

inline SpinConfig read_spins(const std::vector<double>& x) {
    SpinConfig s;
    s.sigma.resize(x.size());
    for (size_t i = 0; i < x.size(); ++i) s.sigma[i] = sign_readout(x[i]);
    return s;
}

// Symmetric zero-diagonal coupling matrix with its normalization
// xi = sqrt(2n / sum_ij J_ij^2). Dense storage always; a CSR copy is built
// and used for the MVM when the nonzero density is below 10%.
//
// The MVM accumulates column j into accumulator (j mod 8) and reduces the
// eight partials in a fixed tree. The CSR path uses the same mapping, so
// skipping structural zeros gives bit-identical results to the dense path,
// and results never depend on which representation was selected.
class CouplingMatrix {
public:
    static constexpr double sparse_density_threshold = 0.10;

    CouplingMatrix() = default;
    CouplingMatrix(int n, std::vector<double> dense_row_major);

    int n() const { return n_; }
    double xi() const { return xi_; }
    bool symmetric() const { return symmetric_; }
    bool uses_sparse_mvm() const { return use_csr_; }
    size_t nonzeros() const { return nnz_; }

    double entry(int i, int j) const { return dense_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<double>& dense() const { return dense_; }

    // z <- J x
    void mvm(const double* x, double* z) const;
    // z <- J sgn(x) with sgn(0) = 0
    void mvm_sign(const double* x, double* z) const;

    // visit nonzeros of row k (used for incremental field updates)
    template <class F>
    void for_row(int k, F&& f) const {
        if (use_csr_) {
            for (int idx = csr_ptr_[k]; idx < csr_ptr_[k + 1]; ++idx) f(csr_col_[idx], csr_val_[idx]);
        } else {
            const double* row = &dense_[static_cast<size_t>(k) * n_];
            for (int j = 0; j < n_; ++j)
                if (row[j] != 0.0) f(j, row[j]);
        }
    }

    static double recompute_xi(int n, const std::vector<double>& dense);

private:
    int n_ = 0;
    double xi_ = 1.0;
    bool symmetric_ = true;
    bool use_csr_ = false;
    size_t nnz_ = 0;
    std::vector<double> dense_;
    std::vector<int> csr_ptr_, csr_col_;
    std::vector<double> csr_val_;
};

struct GroundTruth {
    double energy = 0.0;
    uint64_t degeneracy = 0;
    SpinConfig witness;
};

// Fully connected +1/-1 couplings ("SK" instances); deterministic in seed.
CouplingMatrix sk_random(int n, uint64_t seed);

// Complete graph with all couplings -1; aligned spins are the optimum.
CouplingMatrix ferromagnet(int n);

// rows x cols periodic grid with +1/-1 edge weights (toroidal max-cut style).
CouplingMatrix torus_pm(int rows, int cols, uint64_t seed);

// "N M" header then M lines "i j w" with 1-based vertex indices.
CouplingMatrix parse_gset(std::istream& in);
CouplingMatrix parse_gset_file(const std::string& path);
void serialize_gset(const CouplingMatrix& J, std::ostream& out);

// E(sigma) = 1/2 sum_{i != j} J_ij sigma_i sigma_j; lower is better.
double ising_energy(const CouplingMatrix& J, const SpinConfig& s);

// cut(sigma) = sum_{i<j} J_ij (1 - sigma_i sigma_j) / 2
double cut_value(const CouplingMatrix& J, const SpinConfig& s);

// Exact optimum by Gray-code enumeration; guarded at n <= 24.
GroundTruth brute_force_ground(const CouplingMatrix& J);

} // namespace cim
