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

#include "pml/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pml/parallel.hpp"

namespace pml {

namespace {

// Pairwise summation over [lo, hi) in a fixed order.
template <class T, class Term>
T pairwise(std::size_t lo, std::size_t hi, const Term& term, const T& zero) {
    if (hi - lo == 0) return zero;
    if (hi - lo == 1) return term(lo);
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(lo, mid, term, zero) + pairwise(mid, hi, term, zero);
}

std::vector<std::size_t> support(const std::vector<double>& weights) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] != 0.0) idx.push_back(i);
    }
    return idx;
}

}  // namespace

ParamMeasure::ParamMeasure(Kind kind, std::vector<double> parameters, std::vector<double> weights, std::string label)
    : kind_(kind), parameters_(std::move(parameters)), weights_(std::move(weights)), label_(std::move(label)) {
    if (parameters_.empty()) throw InvalidArgument("parameter measure needs a nonempty parameter list");
    if (weights_.size() != parameters_.size()) throw InvalidArgument("parameter measure needs one weight per parameter");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw InvalidArgument("parameter measure weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("parameter measure weights must sum to 1");
}

ParamMeasure ParamMeasure::weights(std::vector<double> parameters, std::vector<double> weights) {
    return ParamMeasure(Kind::weights, std::move(parameters), std::move(weights), "weights");
}

ParamMeasure ParamMeasure::dirac(std::vector<double> parameters, std::size_t index) {
    if (index >= parameters.size()) throw InvalidArgument("dirac index out of range");
    std::vector<double> w(parameters.size(), 0.0);
    w[index] = 1.0;
    return ParamMeasure(Kind::weights, std::move(parameters), std::move(w), "dirac[" + std::to_string(index) + "]");
}

ParamMeasure ParamMeasure::uniform(std::vector<double> parameters) {
    const std::size_t n = parameters.size();
    if (n == 0) throw InvalidArgument("parameter measure needs a nonempty parameter list");
    return ParamMeasure(Kind::weights, std::move(parameters), std::vector<double>(n, 1.0 / static_cast<double>(n)),
                        "uniform");
}

ParamMeasure ParamMeasure::cesaro(std::vector<double> parameters, std::size_t window) {
    const std::size_t n = parameters.size();
    if (window < 1 || window > n) throw InvalidArgument("cesaro window must lie in [1, |E|]");
    std::vector<double> w(n, 0.0);
    for (std::size_t i = n - window; i < n; ++i) w[i] = 1.0 / static_cast<double>(window);
    return ParamMeasure(Kind::cesaro, std::move(parameters), std::move(w), "cesaro[" + std::to_string(window) + "]");
}

ParamMeasure ParamMeasure::tail_selector(std::vector<double> parameters, std::size_t modulus, std::size_t residue,
                                         std::size_t window) {
    if (modulus < 1 || residue >= modulus) throw InvalidArgument("tail selector needs 0 <= residue < modulus");
    if (window < 1) throw InvalidArgument("tail selector window must be positive");
    std::vector<std::size_t> picked;
    for (std::size_t i = parameters.size(); i-- > 0 && picked.size() < window;) {
        if (i % modulus == residue) picked.push_back(i);
    }
    if (picked.size() < window) throw InvalidArgument("prefix too short for the tail selector window");
    std::vector<double> w(parameters.size(), 0.0);
    for (auto i : picked) w[i] = 1.0 / static_cast<double>(window);
    return ParamMeasure(Kind::tail_selector, std::move(parameters), std::move(w),
                        "tail[" + std::to_string(residue) + " mod " + std::to_string(modulus) + "]");
}

ParamMeasure ParamMeasure::mix(double lambda, const ParamMeasure& a, const ParamMeasure& b) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("mixing weight must lie in [0, 1]");
    if (a.parameters_ != b.parameters_) throw InvalidArgument("mixed measures need the same parameter list");
    std::vector<double> w(a.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = lambda * a.weights_[i] + (1.0 - lambda) * b.weights_[i];
    return ParamMeasure(Kind::weights, a.parameters_, std::move(w), "mix");
}

Complex ParamMeasure::integrate(const std::function<Complex(std::size_t)>& f) const {
    const auto idx = support(weights_);
    return pairwise(0, idx.size(), [&](std::size_t k) { return weights_[idx[k]] * f(idx[k]); }, Complex(0.0));
}

Vector ParamMeasure::integrate(const std::vector<Vector>& values) const {
    if (values.size() != size()) throw InvalidArgument("integrand length does not match the parameter list");
    const auto idx = support(weights_);
    const Vector zero = Vector::Zero(values.front().size());
    return pairwise(0, idx.size(), [&](std::size_t k) -> Vector { return weights_[idx[k]] * values[idx[k]]; }, zero);
}

Matrix ParamMeasure::integrate(const std::vector<Matrix>& values) const {
    if (values.size() != size()) throw InvalidArgument("integrand length does not match the parameter list");
    const auto idx = support(weights_);
    const Matrix zero = Matrix::Zero(values.front().rows(), values.front().cols());
    return pairwise(0, idx.size(), [&](std::size_t k) -> Matrix { return weights_[idx[k]] * values[idx[k]]; }, zero);
}

ParamMeasure make_param_measure(std::vector<double> parameters, const ParamMeasureSpec& spec) {
    if (spec.kind == "uniform") return ParamMeasure::uniform(std::move(parameters));
    if (spec.kind == "weights") return ParamMeasure::weights(std::move(parameters), spec.weights);
    if (spec.kind == "dirac") return ParamMeasure::dirac(std::move(parameters), spec.index);
    if (spec.kind == "cesaro") return ParamMeasure::cesaro(std::move(parameters), spec.window);
    if (spec.kind == "tail_selector") {
        return ParamMeasure::tail_selector(std::move(parameters), spec.modulus, spec.residue, spec.window);
    }
    throw InvalidArgument("unknown parameter measure kind '" + spec.kind + "'");
}

const Matrix& MeanEvolution::at(double t) const {
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(times[k] - t) <= 1e-9) return matrices[k];
    }
    throw InvalidArgument("time " + std::to_string(t) + " is not sampled in the mean evolution");
}

std::string MeanEvolution::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,row,col,re,im\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        const Matrix& m = matrices[k];
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                os << times[k] << ',' << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
            }
        }
    }
    return os.str();
}

MeanEvolution mean_evolution(const RandomSemigroup& xi, const ParamMeasure& nu, const std::vector<double>& times) {
    if (nu.size() != xi.size()) throw InvalidArgument("parameter measure and random semigroup disagree on |E|");
    const auto idx = support(nu.weights());
    // Build the members that carry weight up front; afterwards reads are concurrent.
    parallel_for(idx.size(), [&](std::size_t k) { (void)xi.member(idx[k]); });

    MeanEvolution me{xi.grid(), times, std::vector<Matrix>(times.size())};
    parallel_for(times.size(), [&](std::size_t k) {
        const auto n = static_cast<Eigen::Index>(xi.grid().size());
        me.matrices[k] = pairwise(
            0, idx.size(),
            [&](std::size_t j) -> Matrix { return nu.weights()[idx[j]] * xi.member(idx[j]).propagate(times[k]); },
            Matrix(Matrix::Zero(n, n)));
    });
    return me;
}

double memory_defect(const MeanEvolution& me, double t, double s) {
    return operator_norm(me.at(t + s) - me.at(t) * me.at(s));
}

Pseudomeasure mean_pseudomeasure(const std::vector<Pseudomeasure>& family, const ParamMeasure& nu) {
    if (family.size() != nu.size()) throw InvalidArgument("parameter measure and family disagree on |E|");
    std::vector<Complex> coeffs;
    std::vector<Pseudomeasure> parts;
    for (auto i : support(nu.weights())) {
        coeffs.emplace_back(nu.weights()[i]);
        parts.push_back(family[i]);
    }
    return combine(coeffs, parts);
}

Pseudomeasure mean_pseudomeasure(const RandomSemigroup& xi, const ParamMeasure& nu) {
    std::vector<Pseudomeasure> family;
    family.reserve(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        // Members without weight are never evaluated; a zero stand-in avoids building them.
        family.push_back(nu.weights()[i] != 0.0 ? from_semigroup(xi.member(i)) : Pseudomeasure::zero(xi.grid()));
    }
    return mean_pseudomeasure(family, nu);
}

Complex product_measure_eval(const ParamMeasure& nu, const std::vector<Pseudomeasure>& family,
                             const std::vector<std::size_t>& subset, const RingElement& a) {
    if (family.size() != nu.size()) throw InvalidArgument("parameter measure and family disagree on |E|");
    const std::set<std::size_t> members(subset.begin(), subset.end());
    std::vector<std::size_t> idx;
    for (auto i : members) {
        if (i >= nu.size()) throw InvalidArgument("parameter subset index out of range");
        if (nu.weights()[i] != 0.0) idx.push_back(i);
    }
    return pairwise(0, idx.size(), [&](std::size_t k) { return nu.weights()[idx[k]] * eval(family[idx[k]], a); },
                    Complex(0.0));
}

nlohmann::json LimitPointReport::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points) {
        nlohmann::json mean = nlohmann::json::array();
        for (Eigen::Index k = 0; k < p.mean.size(); ++k) mean.push_back({p.mean[k].real(), p.mean[k].imag()});
        pts.push_back({{"selector", p.selector},
                       {"mean", mean},
                       {"tail_distance", p.tail_distance},
                       {"accumulation_point", p.accumulation_point}});
    }
    return {{"points", pts}, {"spread", spread}, {"prefix_length", prefix_length},
            {"note", "verdicts concern the sampled prefix only"}};
}

LimitPointReport limit_points(const std::vector<Vector>& values, const std::vector<ParamMeasure>& selectors,
                              double tolerance, double tail_fraction) {
    if (values.empty()) throw InvalidArgument("limit points need a nonempty list");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw InvalidArgument("tail fraction must lie in (0, 1]");
    double scale = 1.0;
    for (const auto& v : values) scale = std::max(scale, v.norm());
    const auto tail_len = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(values.size()))));
    const std::size_t tail_start = values.size() - tail_len;

    LimitPointReport report;
    report.prefix_length = values.size();
    for (const auto& sel : selectors) {
        LimitPoint p;
        p.selector = sel.describe();
        p.mean = sel.integrate(values);
        p.tail_distance = INFINITY;
        for (std::size_t k = tail_start; k < values.size(); ++k) {
            p.tail_distance = std::min(p.tail_distance, (p.mean - values[k]).norm());
        }
        p.accumulation_point = p.tail_distance < tolerance * scale;
        report.points.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        for (std::size_t j = i + 1; j < report.points.size(); ++j) {
            report.spread = std::max(report.spread, (report.points[i].mean - report.points[j].mean).norm());
        }
    }
    return report;
}

FieldSampler semigroup_field(const RandomSemigroup& xi, const StateVector& initial) {
    if (!(initial.grid() == xi.grid())) throw GridMismatch();
    return [xi, initial](std::size_t index, const SpaceTimeProbe& probe) {
        const Vector u = xi.member(index).apply(probe.t, initial.values());
        return u[static_cast<Eigen::Index>(probe.cell)];
    };
}

Complex YoungHistogram::integrate(const std::function<Complex(Complex)>& f) const {
    const std::size_t bins = re_edges.size() - 1;
    Complex sum = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        for (std::size_t j = 0; j < bins; ++j) {
            const double m = masses[i * bins + j];
            if (m == 0.0) continue;
            const Complex center(0.5 * (re_edges[i] + re_edges[i + 1]), 0.5 * (im_edges[j] + im_edges[j + 1]));
            sum += m * f(center);
        }
    }
    return sum;
}

Complex YoungHistogram::mean() const {
    return integrate([](Complex z) { return z; });
}

nlohmann::json YoungMeasure::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& h : histograms) {
        out.push_back({{"probe", {{"t", h.probe.t}, {"cell", h.probe.cell}}},
                       {"bin_edges", {{"re", h.re_edges}, {"im", h.im_edges}}},
                       {"masses", h.masses},
                       {"widened", h.widened}});
    }
    return out;
}

namespace {

std::vector<double> edges(double lo, double hi, int bins) {
    std::vector<double> e(static_cast<std::size_t>(bins) + 1);
    for (int k = 0; k <= bins; ++k) e[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / bins;
    return e;
}

std::size_t bin_of(double x, const std::vector<double>& e) {
    const std::size_t bins = e.size() - 1;
    const double pos = (x - e.front()) / (e.back() - e.front()) * static_cast<double>(bins);
    return std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, pos)));
}

}  // namespace

YoungMeasure young_measure(const FieldSampler& field, const ParamMeasure& nu, const std::vector<SpaceTimeProbe>& probes,
                           const YoungOptions& options) {
    if (options.bins < 1) throw InvalidArgument("young measure needs at least one bin");
    if (!options.range.empty() && options.range.size() != 4) {
        throw InvalidArgument("young measure range must be {re_lo, re_hi, im_lo, im_hi}");
    }
    const auto idx = support(nu.weights());
    YoungMeasure ym;
    ym.histograms.resize(probes.size());
    parallel_for(probes.size(), [&](std::size_t p) {
        std::vector<Complex> vals(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) vals[k] = field(idx[k], probes[p]);

        double re_lo = INFINITY, re_hi = -INFINITY, im_lo = INFINITY, im_hi = -INFINITY;
        for (auto z : vals) {
            re_lo = std::min(re_lo, z.real());
            re_hi = std::max(re_hi, z.real());
            im_lo = std::min(im_lo, z.imag());
            im_hi = std::max(im_hi, z.imag());
        }
        YoungHistogram h;
        h.probe = probes[p];
        if (!options.range.empty()) {
            const auto& r = options.range;
            h.widened = re_lo < r[0] || re_hi > r[1] || im_lo < r[2] || im_hi > r[3];
            re_lo = std::min(re_lo, r[0]);
            re_hi = std::max(re_hi, r[1]);
            im_lo = std::min(im_lo, r[2]);
            im_hi = std::max(im_hi, r[3]);
        }
        // Pad so values on the upper edge fall inside, and give point masses a nonzero bin width.
        const double pad_re = std::max(1e-9, 1e-9 * (re_hi - re_lo)), pad_im = std::max(1e-9, 1e-9 * (im_hi - im_lo));
        h.re_edges = edges(re_lo - pad_re, re_hi + pad_re, options.bins);
        h.im_edges = edges(im_lo - pad_im, im_hi + pad_im, options.bins);
        const auto bins = static_cast<std::size_t>(options.bins);
        h.masses.assign(bins * bins, 0.0);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            h.masses[bin_of(vals[k].real(), h.re_edges) * bins + bin_of(vals[k].imag(), h.im_edges)] +=
                nu.weights()[idx[k]];
        }
        ym.histograms[p] = std::move(h);
    });
    return ym;
}

Complex young_average(const FieldSampler& field, const ParamMeasure& nu, const SpaceTimeProbe& probe,
                      const std::function<Complex(Complex)>& f) {
    return nu.integrate([&](std::size_t i) { return f(field(i, probe)); });
}

}  // namespace pml
