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

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pml/pseudomeasure.hpp"
#include "pml/semigroup.hpp"

namespace pml {

/// Finitely additive probability on an ordered finite parameter list E.
///
/// Every kind resolves to a weight per index of E. Cesaro and tail-selector
/// kinds put their mass on the end of the list, the finite stand-in for
/// measures concentrated near the limit point of E.
class ParamMeasure {
public:
    enum class Kind { weights, cesaro, tail_selector };

    /// Throws InvalidArgument on negative weights or a sum differing from 1 by more than 1e-12.
    static ParamMeasure weights(std::vector<double> parameters, std::vector<double> weights);
    static ParamMeasure dirac(std::vector<double> parameters, std::size_t index);
    static ParamMeasure uniform(std::vector<double> parameters);
    /// Uniform over the last `window` entries.
    static ParamMeasure cesaro(std::vector<double> parameters, std::size_t window);
    /// Uniform over the last `window` indices i with i % modulus == residue.
    /// Throws if the prefix holds fewer than `window` such indices.
    static ParamMeasure tail_selector(std::vector<double> parameters, std::size_t modulus, std::size_t residue,
                                      std::size_t window = 1);
    /// lambda * a + (1 - lambda) * b on a common parameter list.
    static ParamMeasure mix(double lambda, const ParamMeasure& a, const ParamMeasure& b);

    Kind kind() const { return kind_; }
    const std::vector<double>& parameters() const { return parameters_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return parameters_.size(); }
    std::string describe() const { return label_; }

    /// sum_i w_i f(i), skipping null weights, summed pairwise in index order.
    Complex integrate(const std::function<Complex(std::size_t)>& f) const;
    Vector integrate(const std::vector<Vector>& values) const;
    Matrix integrate(const std::vector<Matrix>& values) const;

private:
    ParamMeasure(Kind kind, std::vector<double> parameters, std::vector<double> weights, std::string label);

    Kind kind_;
    std::vector<double> parameters_;
    std::vector<double> weights_;
    std::string label_;
};

struct ParamMeasureSpec {
    std::string kind = "uniform";  // uniform | weights | dirac | cesaro | tail_selector
    std::vector<double> weights;
    std::size_t index = 0;
    std::size_t window = 1;
    std::size_t modulus = 2;
    std::size_t residue = 0;
};

ParamMeasure make_param_measure(std::vector<double> parameters, const ParamMeasureSpec& spec);

/// Weak (Pettis) mean of a random semigroup sampled at fixed times.
struct MeanEvolution {
    Grid grid;
    std::vector<double> times;
    std::vector<Matrix> matrices;

    /// Matrix at a sampled time (matched within 1e-9); throws InvalidArgument otherwise.
    const Matrix& at(double t) const;
    std::string to_csv() const;
};

/// M(t) = sum_eps w(eps) U_eps(t).
MeanEvolution mean_evolution(const RandomSemigroup& xi, const ParamMeasure& nu, const std::vector<double>& times);

/// ||M(t + s) - M(t) M(s)||_op; t, s and t + s must be sampled.
double memory_defect(const MeanEvolution& me, double t, double s);

/// A -> sum_eps w(eps) mu_eps(A).
Pseudomeasure mean_pseudomeasure(const std::vector<Pseudomeasure>& family, const ParamMeasure& nu);
Pseudomeasure mean_pseudomeasure(const RandomSemigroup& xi, const ParamMeasure& nu);

/// (nu * mu)(A_E x A_Omega) = sum over eps in A_E of w(eps) mu_eps(A_Omega).
/// `subset` holds indices into E; repeated indices count once.
Complex product_measure_eval(const ParamMeasure& nu, const std::vector<Pseudomeasure>& family,
                             const std::vector<std::size_t>& subset, const RingElement& a);

struct LimitPoint {
    std::string selector;
    Vector mean;
    /// Distance from the mean to the closest element in the tail of the list.
    double tail_distance = 0.0;
    bool accumulation_point = false;
};

struct LimitPointReport {
    std::vector<LimitPoint> points;
    /// Largest pairwise distance between selector means.
    double spread = 0.0;
    /// Length of the sampled prefix the verdicts refer to.
    std::size_t prefix_length = 0;

    nlohmann::json to_json() const;
};

/// Mean of `values` under each selector, with a verdict on whether that mean
/// is an accumulation point of the sampled tail (the last `tail_fraction`
/// of the list): tail_distance < tolerance * max(1, sup ||v||).
LimitPointReport limit_points(const std::vector<Vector>& values, const std::vector<ParamMeasure>& selectors,
                              double tolerance = 1e-9, double tail_fraction = 0.5);

struct SpaceTimeProbe {
    double t = 0.0;
    std::size_t cell = 0;
};

/// Value u_eps(t, x) of member `index` at a probe.
using FieldSampler = std::function<Complex(std::size_t index, const SpaceTimeProbe& probe)>;

/// Field u_eps(t) = U_eps(t) u0 of each family member.
FieldSampler semigroup_field(const RandomSemigroup& xi, const StateVector& initial);

/// Weighted value histogram at one probe over a bins x bins grid of the complex plane.
struct YoungHistogram {
    SpaceTimeProbe probe;
    std::vector<double> re_edges;
    std::vector<double> im_edges;
    /// masses[i * bins + j]: real bin i, imaginary bin j.
    std::vector<double> masses;
    bool widened = false;

    /// sum of masses * f(bin center).
    Complex integrate(const std::function<Complex(Complex)>& f) const;
    Complex mean() const;
};

struct YoungMeasure {
    std::vector<YoungHistogram> histograms;

    nlohmann::json to_json() const;
};

struct YoungOptions {
    int bins = 64;
    /// Optional fixed range {re_lo, re_hi, im_lo, im_hi}; widened (and
    /// flagged) when a value falls outside. Empty means the observed range.
    std::vector<double> range;
};

YoungMeasure young_measure(const FieldSampler& field, const ParamMeasure& nu, const std::vector<SpaceTimeProbe>& probes,
                           const YoungOptions& options = {});

/// Weighted parameter average of f(u_eps(t, x)) at one probe.
Complex young_average(const FieldSampler& field, const ParamMeasure& nu, const SpaceTimeProbe& probe,
                      const std::function<Complex(Complex)>& f);

}  // namespace pml
