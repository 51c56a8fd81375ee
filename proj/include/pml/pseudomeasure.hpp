// Copyright 2026 The pseudomeasure-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pml/cylinder.hpp"
#include "pml/semigroup.hpp"

namespace pml {

/// Finitely additive complex set function on cylinder events.
///
/// Three representations: generated by a semigroup, a finite linear
/// combination of other pseudomeasures, or an explicit (partial) table.
/// Values are immutable and cheap to copy.
class Pseudomeasure {
public:
    struct SemigroupBacked {
        Semigroup semigroup;
    };
    struct LinearCombination {
        std::vector<Complex> coeffs;
        std::vector<Pseudomeasure> parts;
    };
    struct TableBacked {
        std::vector<std::pair<CylinderSet, Complex>> entries;
    };
    using Variant = std::variant<SemigroupBacked, LinearCombination, TableBacked>;

    static Pseudomeasure zero(const Grid& grid);
    static Pseudomeasure table(const Grid& grid, std::vector<std::pair<CylinderSet, Complex>> entries);

    const Grid& grid() const { return node_->grid; }
    const Variant& variant() const { return node_->variant; }

    /// Value on one cylinder event. Arity-1 events evaluate to the Lebesgue
    /// measure of the base for semigroup-backed pseudomeasures.
    Complex eval(const CylinderSet& a) const;

private:
    struct Node {
        Grid grid;
        Variant variant;
    };
    explicit Pseudomeasure(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    friend Pseudomeasure from_semigroup(const Semigroup& sg);
    friend Pseudomeasure combine(const std::vector<Complex>& coeffs, const std::vector<Pseudomeasure>& parts);

    std::shared_ptr<const Node> node_;
};

/// mu_U(A^{t_1..t_m}_{B_1..B_m}) = ( U(t_m - t_{m-1}) P_{B_{m-1}} ... U(t_2 - t_1) chi_{B_1}, chi_{B_m} ).
Pseudomeasure from_semigroup(const Semigroup& sg);

/// sum_i coeffs[i] * parts[i]. Throws InvalidArgument on empty or mismatched lists.
Pseudomeasure combine(const std::vector<Complex>& coeffs, const std::vector<Pseudomeasure>& parts);

Complex eval(const Pseudomeasure& mu, const CylinderSet& a);

/// Sum over the parts; a complemented element evaluates through the
/// normalization mu(A) = 1 - mu(Omega \ A).
Complex eval(const Pseudomeasure& mu, const RingElement& a);

/// beta^{t_0..t_m}_{mu; B_1..B_{m-1}} on H x H.
struct SesquilinearForm {
    Pseudomeasure mu;
    std::vector<double> times;
    std::vector<BaseSet> mid_bases;
};

/// Expands f and g over cell indicators and sums c_k conj(a_j) mu(A^{t_0..t_m}_{{k}, B.., {j}}).
Complex sesquilinear_eval(const SesquilinearForm& form, const StateVector& f, const StateVector& g);

/// Operator A with (A u, v) = beta(u, v). Needs times.size() >= 2 (nondecreasing)
/// and mid_bases.size() == times.size() - 2.
Matrix reconstruct_operator(const Pseudomeasure& mu, const std::vector<double>& times,
                            const std::vector<BaseSet>& mid_bases = {});

/// Same operator assembled entry by entry from evaluations on single-cell
/// cylinders; works for every representation. O(N^2) evaluations.
Matrix reconstruct_operator_by_probes(const Pseudomeasure& mu, const std::vector<double>& times,
                                      const std::vector<BaseSet>& mid_bases = {});

struct PropertyReport {
    std::string property;
    double max_residual = 0.0;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    nlohmann::json witness;

    nlohmann::json to_json() const;
};

/// One instance of the Markov identity: times t_0 <= ... <= t_n, bases at
/// the interior times, split at interior position `split` (1 <= split <= n-1).
struct MarkovSample {
    std::vector<double> times;
    std::vector<BaseSet> mid_bases;
    std::size_t split = 1;
};

/// max || A^{t_split..t_n} P_{B_split} A^{t_0..t_split} - A^{t_0..t_n} ||_op over samples.
PropertyReport check_markov(const Pseudomeasure& mu, const std::vector<MarkovSample>& samples);

/// max |mu(A) - mu(A shifted by s)| over samples. Throws for s < 0.
PropertyReport check_stationary(const Pseudomeasure& mu, double shift, const std::vector<CylinderSet>& samples);

CylinderSet shift_times(const CylinderSet& a, double shift);

/// Norm of the sesquilinear form, i.e. the spectral norm of the reconstructed operator.
double continuity_constant_a(const Pseudomeasure& mu, const std::vector<double>& times,
                             const std::vector<BaseSet>& mid_bases = {});

struct ContinuityBound {
    double constant = 0.0;
    std::size_t samples = 0;
    std::size_t skipped = 0;
};

/// Least M with |mu(A^{t_0..t_m}_{B_0..B_m})| <= M^m prod mu_L(B_k) over the
/// sampled base tuples (each of size times.size()). Tuples with a null base
/// are skipped and counted.
ContinuityBound continuity_constant_b(const Pseudomeasure& mu, const std::vector<double>& times,
                                      const std::vector<std::vector<BaseSet>>& base_samples);

}  // namespace pml
