#include "states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "eigen_solver.hpp"
#include "numeric.hpp"

namespace qrl {

int block_gamma(int last_block) {
    int g = 0;
    for (int n = 5; n <= last_block; ++n) g += n;
    return g;
}

std::int64_t corner_pair_count(int n) { return (std::int64_t(1) << n) / n; }

ComplexMatrix entangled_block(int n) {
    if (n < 3) throw_domain("entangled_block: requires n >= 3");
    if (n > caps::max_block_index) throw_capacity("entangled_block: n exceeds block cap");
    std::int64_t dim = std::int64_t(1) << n;
    std::int64_t r = corner_pair_count(n);
    double w = std::ldexp(1.0, -n);
    ComplexMatrix m = ComplexMatrix::sparse_zero(static_cast<int>(dim), static_cast<int>(dim));
    for (std::int64_t i = 0; i < dim; ++i) {
        std::int64_t mirror = dim - 1 - i;
        if (i < r || i >= dim - r) {
            if (i <= mirror) {
                m.set(static_cast<int>(i), static_cast<int>(i), w);
                m.set(static_cast<int>(i), static_cast<int>(mirror), w);
                m.set(static_cast<int>(mirror), static_cast<int>(mirror), w);
                m.set(static_cast<int>(mirror), static_cast<int>(i), w);
            }
        } else {
            m.set(static_cast<int>(i), static_cast<int>(i), w);
        }
    }
    return m;
}

ComplexMatrix entangled_block_support(int n) {
    std::int64_t dim = std::int64_t(1) << n;
    std::int64_t r = corner_pair_count(n);
    ComplexMatrix m = ComplexMatrix::sparse_zero(static_cast<int>(dim), static_cast<int>(dim));
    for (std::int64_t i = 0; i < dim; ++i) {
        std::int64_t mirror = dim - 1 - i;
        if (i < r || i >= dim - r) {
            m.set(static_cast<int>(i), static_cast<int>(i), 0.5);
            m.set(static_cast<int>(i), static_cast<int>(mirror), 0.5);
        } else {
            m.set(static_cast<int>(i), static_cast<int>(i), 1.0);
        }
    }
    return m;
}

std::vector<std::pair<double, std::int64_t>> entangled_block_eigenvalues(int n) {
    std::int64_t r = corner_pair_count(n);
    std::int64_t dim = std::int64_t(1) << n;
    return {{std::ldexp(1.0, 1 - n), r}, {std::ldexp(1.0, -n), dim - 2 * r}, {0.0, r}};
}

std::string state_kind_name(StateKind k) {
    switch (k) {
        case StateKind::Tracial: return "tracial";
        case StateKind::Classical: return "classical";
        case StateKind::Bernoulli: return "bernoulli";
        case StateKind::BlockProduct: return "chapter4";
        case StateKind::DiagonalDensity: return "diagonal_f";
        case StateKind::Explicit: return "explicit";
    }
    return "?";
}

double DensityFn::antiderivative(double x) const {
    if (x <= 0.0) return 0.0;  // limit value at the singular endpoint
    double u = 1.0 - std::log(x);
    return id == "f1" ? 1.0 / u : 1.0 / (u * u);
}

double DensityFn::density(double x) const {
    double u = 1.0 - std::log(x);
    return id == "f1" ? 1.0 / (x * u * u) : 2.0 / (x * u * u * u);
}

DensityFn density_fn_from_id(const std::string& id) {
    if (id != "f1" && id != "f2") throw_domain("density_fn: unknown id '" + id + "'");
    return DensityFn{id};
}

// ---------------------------------------------------------------------------
// Level

Level Level::dense(DensityMatrix rho) {
    Level l;
    l.rep_ = Rep::Dense;
    l.qubits_ = rho.qubits;
    l.dense_ = std::move(rho);
    return l;
}

Level Level::diagonal(int qubits, std::vector<double> weights) {
    if (static_cast<std::int64_t>(weights.size()) != (std::int64_t(1) << qubits))
        throw_domain("level: diagonal weight count mismatch");
    Level l;
    l.rep_ = Rep::Diagonal;
    l.qubits_ = qubits;
    l.diag_ = std::move(weights);
    return l;
}

Level Level::pure_product(std::vector<std::array<cplx, 2>> factors) {
    Level l;
    l.rep_ = Rep::PureProduct;
    l.qubits_ = static_cast<int>(factors.size());
    l.factors_ = std::move(factors);
    return l;
}

Level Level::block_factored(int last_full_block, int tail_qubits) {
    Level l;
    l.rep_ = Rep::BlockFactored;
    l.last_full_block_ = last_full_block;
    l.tail_qubits_ = tail_qubits;
    l.qubits_ = block_gamma(last_full_block) + tail_qubits;
    return l;
}

double Level::diag_entry(std::int64_t idx) const {
    switch (rep_) {
        case Rep::Dense: return dense_.mat.at(static_cast<int>(idx), static_cast<int>(idx)).real();
        case Rep::Diagonal: return diag_[static_cast<std::size_t>(idx)];
        case Rep::PureProduct: {
            double v = 1.0;
            for (int i = 0; i < qubits_; ++i)
                v *= std::norm(factors_[static_cast<std::size_t>(i)][(idx >> i) & 1]);
            return v;
        }
        case Rep::BlockFactored: return std::ldexp(1.0, -qubits_);  // uniform diagonal
    }
    return 0.0;
}

namespace {

std::vector<cplx> product_vector(const std::vector<std::array<cplx, 2>>& factors, int from, int to) {
    std::vector<cplx> v = {1.0};
    for (int i = from; i < to; ++i)
        v = kron_vec(v, {factors[static_cast<std::size_t>(i)][0], factors[static_cast<std::size_t>(i)][1]});
    return v;
}

}  // namespace

double Level::quadratic_form(const std::vector<std::array<cplx, 2>>& factors) const {
    if (static_cast<int>(factors.size()) != qubits_)
        throw_domain("quadratic_form: factor count mismatch");
    switch (rep_) {
        case Rep::Dense: {
            auto v = product_vector(factors, 0, qubits_);
            cplx q = dense_.mat.quadratic_form(v);
            if (std::abs(q.imag()) > 1e-10) throw_invariant("quadratic_form: complex result");
            return q.real();
        }
        case Rep::Diagonal: {
            auto v = product_vector(factors, 0, qubits_);
            KahanSum s;
            for (std::int64_t i = 0; i < dim(); ++i)
                s.add(diag_[static_cast<std::size_t>(i)] * std::norm(v[static_cast<std::size_t>(i)]));
            return s.value();
        }
        case Rep::PureProduct: {
            double p = 1.0;
            for (int i = 0; i < qubits_; ++i) {
                cplx ip = std::conj(factors[static_cast<std::size_t>(i)][0]) * factors_[static_cast<std::size_t>(i)][0] +
                          std::conj(factors[static_cast<std::size_t>(i)][1]) * factors_[static_cast<std::size_t>(i)][1];
                p *= std::norm(ip);
            }
            return p;
        }
        case Rep::BlockFactored: {
            double p = 1.0;
            int pos = 0;
            for (int nb = 5; nb <= last_full_block_; ++nb) {
                auto w = product_vector(factors, pos, pos + nb);
                cplx q = entangled_block(nb).quadratic_form(w);
                if (std::abs(q.imag()) > 1e-10) throw_invariant("quadratic_form: complex result");
                p *= q.real();
                pos += nb;
            }
            if (tail_qubits_ > 0) {
                double norm2 = 1.0;
                for (int i = pos; i < pos + tail_qubits_; ++i) {
                    const auto& f = factors[static_cast<std::size_t>(i)];
                    norm2 *= std::norm(f[0]) + std::norm(f[1]);
                }
                p *= std::ldexp(norm2, -tail_qubits_);
            }
            return p;
        }
    }
    return 0.0;
}

DensityMatrix Level::to_density() const {
    std::int64_t d = dim();
    if (d > caps::max_dense_dim)
        throw_capacity("level: dense materialization capped at dimension " +
                       std::to_string(caps::max_dense_dim));
    switch (rep_) {
        case Rep::Dense: return dense_;
        case Rep::Diagonal: {
            ComplexMatrix m = ComplexMatrix::zero(static_cast<int>(d), static_cast<int>(d));
            for (std::int64_t i = 0; i < d; ++i)
                m.set(static_cast<int>(i), static_cast<int>(i), diag_[static_cast<std::size_t>(i)]);
            return density_from(qubits_, std::move(m));
        }
        case Rep::PureProduct: {
            auto v = product_vector(factors_, 0, qubits_);
            ComplexMatrix m = ComplexMatrix::zero(static_cast<int>(d), static_cast<int>(d));
            for (std::int64_t r = 0; r < d; ++r)
                for (std::int64_t c = 0; c < d; ++c)
                    m.set(static_cast<int>(r), static_cast<int>(c),
                          v[static_cast<std::size_t>(r)] * std::conj(v[static_cast<std::size_t>(c)]));
            return density_from(qubits_, std::move(m));
        }
        case Rep::BlockFactored: {
            ComplexMatrix acc = ComplexMatrix::identity(1);
            for (int nb = 5; nb <= last_full_block_; ++nb) acc = kron(acc, entangled_block(nb));
            if (tail_qubits_ > 0) {
                std::int64_t td = std::int64_t(1) << tail_qubits_;
                ComplexMatrix tail =
                    ComplexMatrix::sparse_identity(static_cast<int>(td)).scaled(std::ldexp(1.0, -tail_qubits_));
                acc = kron(acc, tail);
            }
            return density_from(qubits_, acc.dense_copy());
        }
    }
    throw_domain("level: unreachable");
}

std::vector<double> Level::eigenvalues_desc() const {
    switch (rep_) {
        case Rep::Dense: return hermitian_eigvals(dense_.mat);
        case Rep::Diagonal: {
            std::vector<double> v = diag_;
            std::sort(v.begin(), v.end(), std::greater<>());
            return v;
        }
        case Rep::PureProduct: {
            std::vector<double> v(static_cast<std::size_t>(dim()), 0.0);
            v[0] = 1.0;
            return v;
        }
        case Rep::BlockFactored: {
            if (qubits_ > caps::max_diag_qubits)
                throw_capacity("level: eigenvalue expansion capped at 2^20 entries");
            std::vector<double> v = {std::ldexp(1.0, -tail_qubits_)};
            auto expand = [&](const std::vector<std::pair<double, std::int64_t>>& block) {
                std::vector<double> next;
                next.reserve(v.size() * 4);
                for (double x : v)
                    for (const auto& [val, mult] : block)
                        for (std::int64_t m = 0; m < mult; ++m) next.push_back(x * val);
                v = std::move(next);
            };
            for (int nb = 5; nb <= last_full_block_; ++nb) expand(entangled_block_eigenvalues(nb));
            // tail contributes 2^tail copies of everything
            std::vector<double> full;
            full.reserve(static_cast<std::size_t>(dim()));
            for (std::int64_t t = 0; t < (std::int64_t(1) << tail_qubits_); ++t)
                full.insert(full.end(), v.begin(), v.end());
            std::sort(full.begin(), full.end(), std::greater<>());
            return full;
        }
    }
    return {};
}

double Level::entropy() const {
    switch (rep_) {
        case Rep::Dense: {
            auto vals = hermitian_eigvals(dense_.mat);
            KahanSum s;
            for (double v : vals) s.add(-xlog2x(v));
            return s.value();
        }
        case Rep::Diagonal: {
            KahanSum s;
            for (double v : diag_) s.add(-xlog2x(v));
            return s.value();
        }
        case Rep::PureProduct: return 0.0;
        case Rep::BlockFactored: {
            double h = static_cast<double>(tail_qubits_);
            for (int nb = 5; nb <= last_full_block_; ++nb) {
                KahanSum s;
                for (const auto& [val, mult] : entangled_block_eigenvalues(nb))
                    s.add(-static_cast<double>(mult) * xlog2x(val));
                h += s.value();
            }
            return h;
        }
    }
    return 0.0;
}

Level Level::partial_trace() const {
    if (qubits_ < 2) throw_domain("level: cannot trace below one qubit");
    switch (rep_) {
        case Rep::Dense:
            return Level::dense(partial_trace_last(dense_));
        case Rep::Diagonal: {
            std::int64_t h = dim() / 2;
            std::vector<double> out(static_cast<std::size_t>(h));
            for (std::int64_t i = 0; i < h; ++i)
                out[static_cast<std::size_t>(i)] =
                    diag_[static_cast<std::size_t>(i)] + diag_[static_cast<std::size_t>(i + h)];
            return Level::diagonal(qubits_ - 1, std::move(out));
        }
        case Rep::PureProduct: {
            auto f = factors_;
            f.pop_back();
            return Level::pure_product(std::move(f));
        }
        case Rep::BlockFactored: {
            if (tail_qubits_ > 0) return Level::block_factored(last_full_block_, tail_qubits_ - 1);
            if (last_full_block_ <= 5) return Level::block_factored(4, qubits_ - 1);
            return Level::block_factored(last_full_block_ - 1, last_full_block_ - 1);
        }
    }
    throw_domain("level: unreachable");
}

double Level::max_abs_diff(const Level& other) const {
    if (qubits_ != other.qubits_) throw_domain("level: qubit count mismatch");
    if (rep_ == Rep::Diagonal && other.rep_ == Rep::Diagonal) {
        double m = 0.0;
        for (std::size_t i = 0; i < diag_.size(); ++i)
            m = std::max(m, std::abs(diag_[i] - other.diag_[i]));
        return m;
    }
    if (rep_ == Rep::PureProduct && other.rep_ == Rep::PureProduct && factors_ == other.factors_)
        return 0.0;
    if (rep_ == Rep::BlockFactored && other.rep_ == Rep::BlockFactored &&
        last_full_block_ == other.last_full_block_ && tail_qubits_ == other.tail_qubits_)
        return 0.0;
    return to_density().mat.max_abs_diff(other.to_density().mat);
}

// ---------------------------------------------------------------------------
// StatePrefix

StatePrefix StatePrefix::tracial(int depth) {
    if (depth < 1) throw_domain("tracial: depth must be >= 1");
    if (depth > 1'000'000) throw_capacity("tracial: depth too large");
    StatePrefix s;
    s.desc_ = {StateKind::Tracial, depth, "", 0.5, "", 0};
    return s;
}

StatePrefix StatePrefix::classical(const std::string& bits, int depth) {
    for (char c : bits)
        if (c != '0' && c != '1') throw_parse("classical: bits must be 0/1");
    if (depth < 1) throw_domain("classical: depth must be >= 1");
    if (static_cast<int>(bits.size()) < depth)
        throw_domain("classical: bit string shorter than requested depth");
    StatePrefix s;
    s.desc_ = {StateKind::Classical, depth, bits, 0.5, "", 0};
    return s;
}

StatePrefix StatePrefix::bernoulli(double p, int depth) {
    if (!(p > 0.0 && p < 1.0)) throw_domain("bernoulli: p must lie in (0,1)");
    if (depth < 1) throw_domain("bernoulli: depth must be >= 1");
    if (depth > 1'000'000) throw_capacity("bernoulli: depth too large");
    StatePrefix s;
    s.desc_ = {StateKind::Bernoulli, depth, "", p, "", 0};
    return s;
}

StatePrefix StatePrefix::block_product(int last_block) {
    if (last_block < 5) throw_domain("block product: last block must be >= 5");
    if (last_block > caps::max_block_index)
        throw_capacity("block product: last block exceeds cap " +
                       std::to_string(caps::max_block_index));
    StatePrefix s;
    s.desc_ = {StateKind::BlockProduct, block_gamma(last_block), "", 0.5, "", last_block};
    return s;
}

StatePrefix StatePrefix::diagonal_density(const std::string& fn_id, int depth) {
    density_fn_from_id(fn_id);
    if (depth < 1) throw_domain("diagonal density: depth must be >= 1");
    if (depth > caps::max_diag_qubits)
        throw_capacity("diagonal density: depth capped at " + std::to_string(caps::max_diag_qubits));
    StatePrefix s;
    s.desc_ = {StateKind::DiagonalDensity, depth, "", 0.5, fn_id, 0};
    return s;
}

StatePrefix StatePrefix::from_dense_levels(std::vector<DensityMatrix> levels) {
    if (levels.empty()) throw_domain("explicit state: no levels");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].qubits != static_cast<int>(i) + 1)
            throw_domain("explicit state: level qubit counts must be 1..N");
        levels[i].validate_basic();
    }
    StatePrefix s;
    s.desc_ = {StateKind::Explicit, static_cast<int>(levels.size()), "", 0.5, "", 0};
    s.explicit_levels_ = std::move(levels);
    return s;
}

std::vector<double> StatePrefix::diagonal_weights(int n) const {
    if (n > caps::max_diag_qubits)
        throw_capacity("state: diagonal level capped at 2^" + std::to_string(caps::max_diag_qubits));
    std::int64_t d = std::int64_t(1) << n;
    std::vector<double> w(static_cast<std::size_t>(d));
    switch (desc_.kind) {
        case StateKind::Tracial: {
            double v = std::ldexp(1.0, -n);
            std::fill(w.begin(), w.end(), v);
            break;
        }
        case StateKind::Bernoulli: {
            std::vector<double> pz(static_cast<std::size_t>(n) + 1), po(static_cast<std::size_t>(n) + 1);
            for (int k = 0; k <= n; ++k) {
                pz[static_cast<std::size_t>(k)] = std::pow(desc_.p, k);
                po[static_cast<std::size_t>(k)] = std::pow(1.0 - desc_.p, k);
            }
            for (std::int64_t i = 0; i < d; ++i) {
                int ones = std::popcount(static_cast<std::uint64_t>(i));
                w[static_cast<std::size_t>(i)] = pz[static_cast<std::size_t>(n - ones)] * po[static_cast<std::size_t>(ones)];
            }
            break;
        }
        case StateKind::DiagonalDensity: {
            DensityFn fn = density_fn_from_id(desc_.fn_id);
            double width = std::ldexp(1.0, -n);
            for (std::int64_t i = 0; i < d; ++i) {
                double left = 0.0;
                for (int b = 0; b < n; ++b)
                    if ((i >> b) & 1) left += std::ldexp(1.0, -(b + 1));
                w[static_cast<std::size_t>(i)] = fn.antiderivative(left + width) - fn.antiderivative(left);
            }
            break;
        }
        default: throw_domain("state: no diagonal representation for this kind");
    }
    return w;
}

Level StatePrefix::level(int n) const {
    if (n < 1 || n > desc_.depth) throw_domain("state: level out of range 1..depth");
    switch (desc_.kind) {
        case StateKind::Tracial:
        case StateKind::Bernoulli:
        case StateKind::DiagonalDensity: return Level::diagonal(n, diagonal_weights(n));
        case StateKind::Classical: {
            std::vector<std::array<cplx, 2>> f(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                int bit = desc_.bits[static_cast<std::size_t>(i)] - '0';
                f[static_cast<std::size_t>(i)] = {cplx(bit == 0 ? 1.0 : 0.0, 0.0), cplx(bit == 1 ? 1.0 : 0.0, 0.0)};
            }
            return Level::pure_product(std::move(f));
        }
        case StateKind::BlockProduct: {
            int m = 4, g = 0;
            while (m + 1 <= desc_.last_block && g + m + 1 <= n) {
                ++m;
                g += m;
            }
            return Level::block_factored(m, n - g);
        }
        case StateKind::Explicit: return Level::dense(explicit_levels_[static_cast<std::size_t>(n) - 1]);
    }
    throw_domain("state: unreachable");
}

DensityMatrix StatePrefix::dense_level(int n) const { return level(n).to_density(); }

CoherenceReport StatePrefix::check_coherence(int max_level) const {
    int top = max_level > 0 ? std::min(max_level, desc_.depth) : desc_.depth;
    CoherenceReport rep;
    if (desc_.kind == StateKind::BlockProduct) {
        // Factored path: deviation of PT(rho_k) from rho_{k-1} factorizes as
        // (prod of retained block max-entries) x (tail deviation). The only
        // non-trivial tail step is tracing a completed block down to the
        // uniform matrix, checked per block by index summation.
        for (int k = 2; k <= top; ++k) {
            Level cur = level(k);
            double dev = 0.0;
            int m = cur.last_full_block();
            if (cur.tail_qubits() == 0 && m >= 5) {
                double scale = 1.0;
                for (int nb = 5; nb < m; ++nb) scale *= std::ldexp(1.0, -nb);
                ComplexMatrix pt = partial_trace_last(entangled_block(m));
                std::int64_t hd = std::int64_t(1) << (m - 1);
                ComplexMatrix uniform =
                    ComplexMatrix::sparse_identity(static_cast<int>(hd)).scaled(std::ldexp(1.0, 1 - m));
                dev = scale * pt.max_abs_diff(uniform);
            }
            // tracing inside a uniform tail is exact
            rep.rows.push_back({k, dev});
        }
    } else {
        Level prev = level(1);
        for (int k = 2; k <= top; ++k) {
            Level cur = level(k);
            double dev = cur.partial_trace().max_abs_diff(prev);
            rep.rows.push_back({k, dev});
            prev = std::move(cur);
        }
    }
    for (const auto& row : rep.rows) {
        rep.max_deviation = std::max(rep.max_deviation, row.deviation);
        if (row.deviation > tol_coherence && rep.first_failure == 0) rep.first_failure = row.level;
    }
    rep.pass = rep.first_failure == 0;
    return rep;
}

bool StatePrefix::has_product_form() const {
    return desc_.kind == StateKind::Tracial || desc_.kind == StateKind::Classical ||
           desc_.kind == StateKind::Bernoulli;
}

double StatePrefix::product_bit_prob(int position, int bit, const std::array<cplx, 2>& b0,
                                     const std::array<cplx, 2>& b1) const {
    const auto& b = bit == 0 ? b0 : b1;
    switch (desc_.kind) {
        case StateKind::Tracial: return 0.5;
        case StateKind::Bernoulli:
            return desc_.p * std::norm(b[0]) + (1.0 - desc_.p) * std::norm(b[1]);
        case StateKind::Classical: {
            int x = desc_.bits[static_cast<std::size_t>(position) - 1] - '0';
            return std::norm(b[static_cast<std::size_t>(x)]);
        }
        default: throw_domain("state: not in product form");
    }
}

double StatePrefix::entropy_of_level(int n) const { return level(n).entropy(); }

}  // namespace qrl
