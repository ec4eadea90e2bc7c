#pragma once

// Full density-matrix state for a handful of qubits. Qubit q is bit q of the
// basis index, so qubit 0 is the least significant bit.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qramsim/noise.hpp"

namespace qramsim {

enum class Basis { X, Z };
enum class Gate { X, Y, Z, H, CNOT };

class QubitCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroProbabilityBranch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MeasurementRecord {
    int qubit = 0;
    Basis basis = Basis::Z;
    int outcome = +1;  // +1 for |0> or |+>, -1 for |1> or |->
    double probability = 0.0;
};

struct InvariantReport {
    double trace_error = 0.0;
    double hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;

    bool ok(double tol = 1e-12, double eig_tol = -1e-10) const {
        return trace_error <= tol && hermiticity_error <= tol && min_eigenvalue >= eig_tol;
    }
};

namespace gates {
inline Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 pauli_y() { return {0.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 0.0}; }
inline Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }
inline Mat2 hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, s, s, -s};
}
}  // namespace gates

class DenseState {
public:
    using Matrix = Eigen::MatrixXcd;

    static constexpr int default_qubit_cap = 10;

    /// |0...0><0...0| on `n_qubits` qubits.
    explicit DenseState(int n_qubits, int qubit_cap = default_qubit_cap) : n_(n_qubits), cap_(qubit_cap) {
        if (n_qubits < 0) throw std::invalid_argument("negative qubit count");
        check_cap(n_qubits);
        rho_ = Matrix::Zero(dim(), dim());
        rho_(0, 0) = 1.0;
    }

    static DenseState from_matrix(const Matrix& m, int qubit_cap = default_qubit_cap) {
        if (m.rows() != m.cols()) throw std::invalid_argument("density matrix must be square");
        int n = 0;
        while ((Eigen::Index{1} << n) < m.rows()) ++n;
        if ((Eigen::Index{1} << n) != m.rows()) throw std::invalid_argument("dimension is not a power of two");
        DenseState s(n, qubit_cap);
        s.rho_ = m;
        return s;
    }

    /// (|00> + |11>)/sqrt(2).
    static DenseState bell_phi_plus() {
        DenseState s(2);
        s.rho_(0, 0) = s.rho_(0, 3) = s.rho_(3, 0) = s.rho_(3, 3) = 0.5;
        return s;
    }

    int n_qubits() const { return n_; }
    int qubit_cap() const { return cap_; }
    Eigen::Index dim() const { return Eigen::Index{1} << n_; }
    const Matrix& matrix() const { return rho_; }
    cplx operator()(Eigen::Index i, Eigen::Index j) const { return rho_(i, j); }

    // ---- unitaries -------------------------------------------------------

    /// rho -> U rho U^dagger on qubit q.
    void apply_unitary(const Mat2& u, int q) {
        check_qubit(q);
        left_multiply(rho_, u, q);
        right_multiply_adjoint(rho_, u, q);
    }

    void apply_cnot(int control, int target) {
        check_qubit(control);
        check_qubit(target);
        if (control == target) throw std::invalid_argument("CNOT control and target coincide");
        const Eigen::Index cbit = Eigen::Index{1} << control;
        const Eigen::Index tbit = Eigen::Index{1} << target;
        permute([=](Eigen::Index i) { return (i & cbit) ? (i ^ tbit) : i; });
    }

    void apply_gate(Gate g, const std::vector<int>& targets) {
        const std::size_t need = (g == Gate::CNOT) ? 2 : 1;
        if (targets.size() != need) throw std::invalid_argument("wrong number of gate targets");
        switch (g) {
            case Gate::X: apply_unitary(gates::pauli_x(), targets[0]); break;
            case Gate::Y: apply_unitary(gates::pauli_y(), targets[0]); break;
            case Gate::Z: apply_unitary(gates::pauli_z(), targets[0]); break;
            case Gate::H: apply_unitary(gates::hadamard(), targets[0]); break;
            case Gate::CNOT: apply_cnot(targets[0], targets[1]); break;
        }
    }

    // ---- channels --------------------------------------------------------

    /// rho -> sum_k K rho K^dagger on qubit q.
    void apply_channel(const KrausSet& ks, int q) {
        check_qubit(q);
        Matrix acc = Matrix::Zero(dim(), dim());
        for (const auto& k : ks.operators) {
            Matrix term = rho_;
            left_multiply(term, k, q);
            right_multiply_adjoint(term, k, q);
            acc += term;
        }
        rho_ = std::move(acc);
    }

    /// Ideal CNOT followed by the gate-error channel on control and target.
    void apply_noisy_cnot(int control, int target, double p) {
        apply_cnot(control, target);
        if (p > 0.0) {
            const auto ch = gate_error_channel(p);
            apply_channel(ch, control);
            apply_channel(ch, target);
        }
    }

    /// Memory idling: dephasing then damping with decay probabilities e2, e1.
    void apply_idle(int q, double e1, double e2) {
        if (e2 > 0.0) apply_channel(idle_dephasing(e2), q);
        if (e1 > 0.0) apply_channel(idle_damping(e1), q);
    }

    // ---- measurement -----------------------------------------------------

    double outcome_probability(int q, Basis b, int outcome) const {
        DenseState tmp = *this;
        tmp.project(q, b, outcome);
        return tmp.rho_.trace().real();
    }

    /// Forced-outcome measurement; the state is renormalized.
    MeasurementRecord measure(int q, Basis b, int outcome) {
        check_outcome(outcome);
        DenseState tmp = *this;
        tmp.project(q, b, outcome);
        const double pr = tmp.rho_.trace().real();
        if (pr <= 1e-15) {
            throw ZeroProbabilityBranch("measurement outcome on qubit " + std::to_string(q) + " has zero probability");
        }
        tmp.rho_ /= pr;
        *this = std::move(tmp);
        return {q, b, outcome, pr};
    }

    /// Sampled measurement.
    template <class Rng>
    MeasurementRecord measure(int q, Basis b, Rng& rng) {
        const double p_plus = outcome_probability(q, b, +1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        return measure(q, b, u(rng) < p_plus ? +1 : -1);
    }

    /// Deterministic average over both outcomes, running `correction` on the
    /// -1 branch: rho -> P+ rho P+ + C(P- rho P-).
    void measure_and_correct(int q, Basis b, const std::function<void(DenseState&)>& correction) {
        DenseState minus = *this;
        project(q, b, +1);
        minus.project(q, b, -1);
        correction(minus);
        rho_ += minus.rho_;
    }

    /// Same as above but the branch is chosen by the parity of a set of qubits
    /// in the Z basis (a non-destructive parity check).
    void parity_check_and_correct(const std::vector<int>& qubits,
                                  const std::function<void(DenseState&)>& correction) {
        Eigen::Index mask = 0;
        for (int q : qubits) {
            check_qubit(q);
            mask |= Eigen::Index{1} << q;
        }
        DenseState odd = *this;
        const Eigen::Index d = dim();
        for (Eigen::Index i = 0; i < d; ++i) {
            const bool i_odd = std::popcount(static_cast<unsigned long long>(i & mask)) & 1U;
            for (Eigen::Index j = 0; j < d; ++j) {
                const bool j_odd = std::popcount(static_cast<unsigned long long>(j & mask)) & 1U;
                if (i_odd || j_odd) rho_(i, j) = 0.0;
                if (!(i_odd && j_odd)) odd.rho_(i, j) = 0.0;
            }
        }
        correction(odd);
        rho_ += odd.rho_;
    }

    // ---- structure -------------------------------------------------------

    void trace_out(int q) {
        check_qubit(q);
        const Eigen::Index nd = dim() / 2;
        const Eigen::Index low = (Eigen::Index{1} << q) - 1;
        auto expand = [&](Eigen::Index r, Eigen::Index bit) {
            return ((r & ~low) << 1) | (bit << q) | (r & low);
        };
        Matrix out(nd, nd);
        for (Eigen::Index i = 0; i < nd; ++i) {
            for (Eigen::Index j = 0; j < nd; ++j) {
                out(i, j) = rho_(expand(i, 0), expand(j, 0)) + rho_(expand(i, 1), expand(j, 1));
            }
        }
        rho_ = std::move(out);
        --n_;
    }

    /// Qubits of `a` keep their indices; qubits of `b` follow.
    static DenseState tensor(const DenseState& a, const DenseState& b) {
        const int cap = std::max(a.cap_, b.cap_);
        if (a.n_ + b.n_ > cap) {
            throw QubitCapExceeded("tensor product needs " + std::to_string(a.n_ + b.n_) + " qubits, cap is " +
                                   std::to_string(cap));
        }
        DenseState s(0, cap);
        s.n_ = a.n_ + b.n_;
        const Eigen::Index da = a.dim();
        const Eigen::Index db = b.dim();
        s.rho_ = Matrix::Zero(da * db, da * db);
        for (Eigen::Index ib = 0; ib < db; ++ib)
            for (Eigen::Index jb = 0; jb < db; ++jb) {
                const cplx w = b.rho_(ib, jb);
                if (w == cplx{}) continue;
                s.rho_.block(ib * da, jb * da, da, da) = w * a.rho_;
            }
        return s;
    }

    void swap_qubits(int a, int b) {
        check_qubit(a);
        check_qubit(b);
        if (a == b) return;
        const Eigen::Index ba = Eigen::Index{1} << a;
        const Eigen::Index bb = Eigen::Index{1} << b;
        permute([=](Eigen::Index i) {
            const bool xa = i & ba;
            const bool xb = i & bb;
            return xa == xb ? i : (i ^ ba ^ bb);
        });
    }

    /// Moves qubit `from` to position `to`, shifting the qubits in between.
    void move_qubit(int from, int to) {
        while (from < to) {
            swap_qubits(from, from + 1);
            ++from;
        }
        while (from > to) {
            swap_qubits(from, from - 1);
            --from;
        }
    }

    // ---- GHZ helpers -----------------------------------------------------

    /// <GHZ| rho |GHZ> with |GHZ> = (|0...0> + |1...1>)/sqrt(2).
    double ghz_fidelity() const {
        const Eigen::Index last = dim() - 1;
        return 0.5 * (rho_(0, 0).real() + rho_(last, last).real() + 2.0 * rho_(0, last).real());
    }

    /// (rho + T_AD(rho))/2 with T_AD(rho)_{ij} = rho_{N-1-j, N-1-i}.
    void symmetrize_antidiagonal() {
        const Eigen::Index last = dim() - 1;
        Matrix out(dim(), dim());
        for (Eigen::Index i = 0; i <= last; ++i)
            for (Eigen::Index j = 0; j <= last; ++j) out(i, j) = 0.5 * (rho_(i, j) + rho_(last - j, last - i));
        rho_ = std::move(out);
    }

    /// Half-weight X on every qubit of `qubits`: the randomized correction
    /// restricted to a sub-register.
    void twirl_x(const std::vector<int>& qubits) {
        Eigen::Index mask = 0;
        for (int q : qubits) {
            check_qubit(q);
            mask |= Eigen::Index{1} << q;
        }
        Matrix flipped(dim(), dim());
        for (Eigen::Index i = 0; i < dim(); ++i)
            for (Eigen::Index j = 0; j < dim(); ++j) flipped(i, j) = rho_(i ^ mask, j ^ mask);
        rho_ = 0.5 * (rho_ + flipped);
    }

    InvariantReport invariants() const {
        InvariantReport r;
        r.trace_error = std::abs(rho_.trace() - cplx{1.0, 0.0});
        r.hermiticity_error = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
        const Matrix herm = 0.5 * (rho_ + rho_.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
        r.min_eigenvalue = solver.eigenvalues().minCoeff();
        return r;
    }

private:
    int n_ = 0;
    int cap_ = default_qubit_cap;
    Matrix rho_;

    void check_cap(int n) const {
        if (n > cap_) {
            throw QubitCapExceeded("state needs " + std::to_string(n) + " qubits, cap is " + std::to_string(cap_));
        }
    }

    void check_qubit(int q) const {
        if (q < 0 || q >= n_) throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
    }

    static void check_outcome(int outcome) {
        if (outcome != 1 && outcome != -1) throw std::invalid_argument("measurement outcome must be +1 or -1");
    }

    // rho -> M rho, with M acting on qubit q.
    static void left_multiply(Matrix& m, const Mat2& u, int q) {
        const Eigen::Index bit = Eigen::Index{1} << q;
        for (Eigen::Index i0 = 0; i0 < m.rows(); ++i0) {
            if (i0 & bit) continue;
            const Eigen::Index i1 = i0 | bit;
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                const cplx a = m(i0, c);
                const cplx b = m(i1, c);
                m(i0, c) = u[0] * a + u[1] * b;
                m(i1, c) = u[2] * a + u[3] * b;
            }
        }
    }

    // rho -> rho M^dagger.
    static void right_multiply_adjoint(Matrix& m, const Mat2& u, int q) {
        const Eigen::Index bit = Eigen::Index{1} << q;
        const cplx c00 = std::conj(u[0]), c01 = std::conj(u[1]), c10 = std::conj(u[2]), c11 = std::conj(u[3]);
        for (Eigen::Index j0 = 0; j0 < m.cols(); ++j0) {
            if (j0 & bit) continue;
            const Eigen::Index j1 = j0 | bit;
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                const cplx a = m(r, j0);
                const cplx b = m(r, j1);
                // (rho M^dagger)_{r,j} = sum_k rho_{r,k} conj(M_{j,k})
                m(r, j0) = a * c00 + b * c01;
                m(r, j1) = a * c10 + b * c11;
            }
        }
    }

    template <class Perm>
    void permute(Perm pi) {
        Matrix out(dim(), dim());
        for (Eigen::Index i = 0; i < dim(); ++i)
            for (Eigen::Index j = 0; j < dim(); ++j) out(pi(i), pi(j)) = rho_(i, j);
        rho_ = std::move(out);
    }

    void project(int q, Basis b, int outcome) {
        check_qubit(q);
        check_outcome(outcome);
        if (b == Basis::X) apply_unitary(gates::hadamard(), q);
        const Eigen::Index bit = Eigen::Index{1} << q;
        const bool keep_one = outcome == -1;
        for (Eigen::Index i = 0; i < dim(); ++i)
            for (Eigen::Index j = 0; j < dim(); ++j) {
                const bool ok = (((i & bit) != 0) == keep_one) && (((j & bit) != 0) == keep_one);
                if (!ok) rho_(i, j) = 0.0;
            }
        if (b == Basis::X) apply_unitary(gates::hadamard(), q);
    }
};

// Value-returning wrappers.

inline DenseState apply_gate(DenseState s, Gate g, const std::vector<int>& targets) {
    s.apply_gate(g, targets);
    return s;
}

inline DenseState apply_channel(DenseState s, const KrausSet& ks, int target) {
    s.apply_channel(ks, target);
    return s;
}

inline std::pair<MeasurementRecord, DenseState> measure(DenseState s, int qubit, Basis b, int forced_outcome) {
    auto rec = s.measure(qubit, b, forced_outcome);
    return {rec, std::move(s)};
}

inline DenseState symmetrize_antidiagonal(DenseState s) {
    s.symmetrize_antidiagonal();
    return s;
}

}  // namespace qramsim
