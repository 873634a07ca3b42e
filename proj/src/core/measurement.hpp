#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qtests.hpp"
#include "states.hpp"

namespace qrl {

struct QubitBasis {
    std::array<cplx, 2> zero{cplx(1.0, 0.0), cplx(0.0, 0.0)};
    std::array<cplx, 2> one{cplx(0.0, 0.0), cplx(1.0, 0.0)};
};

// One orthonormal 2-d basis per qubit position (1-based). Generators:
// standard, hadamard, periodic over a finite list, or an explicit list.
class MeasurementSystem {
public:
    static MeasurementSystem standard();
    static MeasurementSystem hadamard();
    static MeasurementSystem periodic(std::vector<QubitBasis> cycle);
    static MeasurementSystem explicit_list(std::vector<QubitBasis> bases);

    const QubitBasis& at(int position) const;  // 1-based
    const std::string& name() const { return name_; }
    bool is_standard() const { return kind_ == Kind::Standard; }

private:
    enum class Kind { Standard, Hadamard, Periodic, Explicit };
    Kind kind_ = Kind::Standard;
    std::vector<QubitBasis> list_;
    std::string name_ = "standard";

    static void validate_pair(const QubitBasis& b);
};

std::int64_t bits_to_index(const std::vector<int>& bits);
std::vector<int> index_to_bits(std::int64_t idx, int n);
std::string bits_to_string(const std::vector<int>& bits);

// p(tau) = <v|rho_n|v> for the product vector v matching the outcomes in
// `bits`; closed form for product-form states, quadratic form otherwise.
double premeasure(const StatePrefix& state, const MeasurementSystem& basis,
                  const std::vector<int>& bits);

struct CylinderPremeasure {
    int depth = 0;
    std::vector<std::vector<double>> table;  // table[len][index], len 0..depth
    double additivity_deviation = 0.0;

    double prob(const std::vector<int>& bits) const;  // clamped to [0,1]
};

CylinderPremeasure build_premeasure(const StatePrefix& state, const MeasurementSystem& basis,
                                    int depth);

// Sequential qubit-wise sampling; bit i is drawn from the cylinder-mass
// ratio p(tau 1)/p(tau), one uniform variate per bit, splitmix64 stream.
std::string sample_bits(const StatePrefix& state, const MeasurementSystem& basis, int n,
                        std::uint64_t seed);

// Mean over positions of the probability of reading a one.
double lln_statistic(const Level& level);

// n^-1 Tr(rho_n L_n) with L_n the diagonal negative-log-weight operator of
// the bernoulli(p) product measure.
double empirical_entropy(const Level& level, double p);

// -log2 of the bernoulli(p) weight of a bit string (zeros weighted p).
double neg_log2_bernoulli(const std::string& bits, double p);

// Classical test levels pulled back through the measurement system: each
// string becomes the product vector of its basis elements.
RandomnessTest pullback_test(const std::vector<std::map<int, std::vector<std::int64_t>>>& members,
                             const MeasurementSystem& basis);

// Fraction of aligned length-`block` blocks equal to all zeros.
double block_frequency(const std::string& bits, int block);

}  // namespace qrl
