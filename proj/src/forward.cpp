#include "seedbank/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "seedbank/errors.hpp"
#include "seedbank/kernels.hpp"
#include "seedbank/parallel.hpp"

namespace seedbank {

namespace {

constexpr std::uint64_t kMaxWindowVertices = 200'000'000;

struct Dsu {
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> size;

    explicit Dsu(std::size_t n) : parent(n), size(n, 1) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::int32_t>(i);
    }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]]; // path halving
            x = parent[x];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
    std::int32_t add() {
        const auto id = static_cast<std::int32_t>(parent.size());
        parent.push_back(id);
        size.push_back(1);
        return id;
    }
};

struct CoordHash {
    std::size_t operator()(const std::pair<std::int64_t, std::uint32_t>& c) const noexcept {
        auto h = static_cast<std::uint64_t>(c.first) * 0x9E3779B97F4A7C15ULL;
        h ^= (h >> 29);
        h += c.second;
        h *= 0xBF58476D1CE4E5B9ULL;
        return static_cast<std::size_t>(h ^ (h >> 32));
    }
};

double bernoulli_variance(double p) { return p * (1.0 - p); }

} // namespace

double GenealogyWindow::external_parent_fraction() const {
    const std::int64_t bottom = bottom_generation();
    std::uint64_t external = 0;
    for (const std::int64_t g : parent_generation)
        if (g < bottom) ++external;
    return static_cast<double>(external) / static_cast<double>(parent_generation.size());
}

GenealogyWindow build_genealogy(std::uint32_t population, std::uint32_t window_depth,
                                std::uint32_t burn_in, const AgeDistribution& dist,
                                RngStream& rng) {
    if (population < 1) throw invalid_parameter_error("genealogy window requires N >= 1");
    if (window_depth < 1) throw invalid_parameter_error("genealogy window requires T >= 1");
    GenealogyWindow w;
    w.population = population;
    w.window_depth = window_depth;
    w.burn_in = burn_in;
    const std::uint64_t vertices = w.rows() * population;
    if (vertices > kMaxWindowVertices)
        throw resource_error("genealogy window exceeds the memory budget (N*(T+B+1) too large)");
    w.parent_generation.resize(vertices);
    w.parent_label.resize(vertices);
    const std::int64_t bottom = w.bottom_generation();
    std::size_t v = 0;
    for (std::int64_t gen = bottom; gen <= 0; ++gen) {
        for (std::uint32_t label = 1; label <= population; ++label, ++v) {
            const auto age = static_cast<std::int64_t>(dist.sample(rng));
            w.parent_generation[v] = gen - age;
            w.parent_label[v] = static_cast<std::uint32_t>(rng.next_below(population)) + 1;
        }
    }
    return w;
}

ComponentLabeling label_components(const GenealogyWindow& window) {
    return label_components(window, window.bottom_generation(), 0);
}

ComponentLabeling label_components(const GenealogyWindow& window, std::int64_t lo_gen,
                                   std::int64_t hi_gen) {
    if (lo_gen < window.bottom_generation() || hi_gen > 0 || lo_gen > hi_gen)
        throw invalid_parameter_error("component range outside the materialized window");
    const std::uint32_t N = window.population;
    const auto range_rows = static_cast<std::uint64_t>(hi_gen - lo_gen + 1);
    const std::size_t range_vertices = range_rows * N;

    Dsu dsu(range_vertices);
    std::unordered_map<std::pair<std::int64_t, std::uint32_t>, std::int32_t, CoordHash> externals;
    std::vector<std::pair<std::int64_t, std::uint32_t>> external_order;

    auto range_index = [&](std::int64_t gen, std::uint32_t label) {
        return static_cast<std::size_t>(gen - lo_gen) * N + (label - 1);
    };

    std::size_t v = 0;
    for (std::int64_t gen = lo_gen; gen <= hi_gen; ++gen) {
        for (std::uint32_t label = 1; label <= N; ++label, ++v) {
            const std::size_t full = window.vertex(gen, label);
            const std::int64_t pg = window.parent_generation[full];
            const std::uint32_t pl = window.parent_label[full];
            if (pg >= lo_gen) {
                dsu.unite(static_cast<std::int32_t>(v),
                          static_cast<std::int32_t>(range_index(pg, pl)));
            } else {
                const auto key = std::make_pair(pg, pl);
                auto it = externals.find(key);
                if (it == externals.end()) {
                    it = externals.emplace(key, dsu.add()).first;
                    external_order.push_back(key);
                }
                dsu.unite(static_cast<std::int32_t>(v), it->second);
            }
        }
    }

    ComponentLabeling out;
    out.lo_gen = lo_gen;
    out.hi_gen = hi_gen;
    out.population = N;
    out.component.resize(range_vertices);
    std::vector<std::int32_t> root_to_component(dsu.parent.size(), -1);
    std::int32_t next_component = 0;
    auto component_of = [&](std::int32_t id) {
        const std::int32_t root = dsu.find(id);
        if (root_to_component[root] < 0) root_to_component[root] = next_component++;
        return root_to_component[root];
    };
    for (std::size_t i = 0; i < range_vertices; ++i)
        out.component[i] = component_of(static_cast<std::int32_t>(i));
    for (std::size_t e = 0; e < external_order.size(); ++e) {
        const auto& key = external_order[e];
        out.external_roots.push_back(
            {key.first, key.second, component_of(externals.at(key))});
    }
    out.component_count = static_cast<std::uint32_t>(next_component);
    return out;
}

TypeField assign_types(const ComponentLabeling& labeling, double p, RngStream& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw invalid_parameter_error("type probability p must be in [0,1]");
    TypeField field;
    field.p = p;
    field.lo_gen = labeling.lo_gen;
    field.hi_gen = labeling.hi_gen;
    field.population = labeling.population;
    field.component_type.resize(labeling.component_count);
    for (std::uint32_t c = 0; c < labeling.component_count; ++c)
        field.component_type[c] = rng.bernoulli(p) ? 1 : 0;
    field.type_a.resize(labeling.component.size());
    for (std::size_t i = 0; i < labeling.component.size(); ++i)
        field.type_a[i] = field.component_type[labeling.component[i]];
    return field;
}

std::vector<double> frequency_series(const TypeField& types, std::int64_t from_gen,
                                     std::int64_t to_gen) {
    if (from_gen < types.lo_gen || to_gen > types.hi_gen || from_gen > to_gen)
        throw invalid_parameter_error("frequency range outside the typed window");
    std::vector<double> y;
    y.reserve(static_cast<std::size_t>(to_gen - from_gen + 1));
    const std::uint32_t N = types.population;
    for (std::int64_t gen = from_gen; gen <= to_gen; ++gen) {
        const std::size_t row = static_cast<std::size_t>(gen - types.lo_gen) * N;
        std::uint32_t count = 0;
        for (std::uint32_t k = 0; k < N; ++k) count += types.type_a[row + k];
        y.push_back(static_cast<double>(count) / static_cast<double>(N));
    }
    return y;
}

TypeField propagate_types_conditional(const GenealogyWindow& window,
                                      const BoundaryTypes& boundary) {
    const std::int64_t b = boundary.boundary_generation;
    const std::int64_t bottom = window.bottom_generation();
    if (b < bottom || b >= 0)
        throw invalid_parameter_error("boundary generation must lie inside the window");
    const std::uint32_t N = window.population;

    TypeField field;
    field.p = std::numeric_limits<double>::quiet_NaN();
    field.lo_gen = b + 1;
    field.hi_gen = 0;
    field.population = N;
    const auto above_rows = static_cast<std::uint64_t>(-b);
    field.type_a.assign(above_rows * N, 0);

    // -1 unknown, else 0/1; indexed like field.type_a
    std::vector<std::int8_t> resolved(above_rows * N, -1);
    auto above_index = [&](std::int64_t gen, std::uint32_t label) {
        return static_cast<std::size_t>(gen - (b + 1)) * N + (label - 1);
    };

    std::vector<std::size_t> chain;
    for (std::int64_t gen = b + 1; gen <= 0; ++gen) {
        for (std::uint32_t label = 1; label <= N; ++label) {
            std::int64_t g = gen;
            std::uint32_t l = label;
            chain.clear();
            std::int8_t type = -1;
            while (true) {
                const std::size_t idx = above_index(g, l);
                if (resolved[idx] >= 0) {
                    type = resolved[idx];
                    break;
                }
                chain.push_back(idx);
                const std::size_t full = window.vertex(g, l);
                const std::int64_t pg = window.parent_generation[full];
                const std::uint32_t pl = window.parent_label[full];
                if (pg < bottom) {
                    const auto it = boundary.external.find({pg, pl});
                    if (it == boundary.external.end()) {
                        std::ostringstream os;
                        os << "boundary types do not cover external root (generation " << pg
                           << ", label " << pl << ")";
                        throw invalid_parameter_error(os.str());
                    }
                    type = it->second ? 1 : 0;
                    break;
                }
                if (pg <= b) {
                    const std::size_t pidx = window.vertex(pg, pl);
                    if (!boundary.vertex_provided[pidx]) {
                        std::ostringstream os;
                        os << "boundary types do not cover vertex (generation " << pg
                           << ", label " << pl << ")";
                        throw invalid_parameter_error(os.str());
                    }
                    type = boundary.vertex_type_a[pidx] ? 1 : 0;
                    break;
                }
                g = pg;
                l = pl;
            }
            for (const std::size_t idx : chain) {
                resolved[idx] = type;
                field.type_a[idx] = static_cast<std::uint8_t>(type);
            }
        }
    }
    return field;
}

BoundaryTypes draw_boundary_types_by_component(const GenealogyWindow& window,
                                               std::int64_t boundary_generation, double p,
                                               RngStream& rng) {
    const ComponentLabeling sub =
        label_components(window, window.bottom_generation(), boundary_generation);
    std::vector<std::uint8_t> component_type(sub.component_count);
    for (std::uint32_t c = 0; c < sub.component_count; ++c)
        component_type[c] = rng.bernoulli(p) ? 1 : 0;

    BoundaryTypes out;
    out.boundary_generation = boundary_generation;
    out.vertex_type_a.assign(window.rows() * window.population, 0);
    out.vertex_provided.assign(window.rows() * window.population, 0);
    for (std::int64_t gen = window.bottom_generation(); gen <= boundary_generation; ++gen) {
        for (std::uint32_t label = 1; label <= window.population; ++label) {
            const std::size_t full = window.vertex(gen, label);
            out.vertex_provided[full] = 1;
            out.vertex_type_a[full] = component_type[sub.component_at(gen, label)];
        }
    }
    for (const auto& root : sub.external_roots)
        out.external[{root.generation, root.label}] = component_type[root.component] != 0;
    return out;
}

double exact_covariance(std::uint64_t population, const RenewalSequence& seq, std::uint64_t lag,
                        double p) {
    const TailSum squares = sum_q_squared(seq);
    if (!squares.converged(1e-3))
        throw regime_error("covariance formula requires sum q_n^2 convergent (alpha < 1/2)");
    const double s1 = squares.value - 1.0;
    const double numerator = lag == 0 ? s1 : cross_sum(seq, lag).value;
    return bernoulli_variance(p) * numerator / (static_cast<double>(population) + s1);
}

double exact_covariance(std::uint64_t population, const AgeDistribution& dist, std::uint64_t lag,
                        double p, std::uint64_t horizon) {
    if (!(p >= 0.0 && p <= 1.0)) throw invalid_parameter_error("p must be in [0,1]");
    if (dist.kind() == AgeKind::power_law && !dist.finite_mean()) {
        const double alpha = dist.alpha();
        if (alpha == 0.5)
            throw regime_error("alpha = 1/2 is a boundary case with no asserted behavior");
        if (alpha < 0.5)
            return exact_covariance(population, compute_renewal_sequence(dist, horizon), lag, p);
    }
    // Finite mean or alpha > 1/2: ancestral lines meet almost surely.
    return bernoulli_variance(p);
}

double exact_variance(std::uint64_t population, const RenewalSequence& seq, double p) {
    const TailSum squares = sum_q_squared(seq);
    if (!squares.converged(1e-3))
        throw regime_error("variance formula requires sum q_n^2 convergent (alpha < 1/2)");
    const double s0 = squares.value;
    return bernoulli_variance(p) * s0 / (static_cast<double>(population) + s0 - 1.0);
}

double limiting_correlation(const RenewalSequence& seq, std::uint64_t lag) {
    const TailSum squares = sum_q_squared(seq);
    if (!squares.converged(1e-3))
        throw regime_error("limiting correlation requires sum q_n^2 convergent (alpha < 1/2)");
    return cross_sum(seq, lag).value / (squares.value + 1.0);
}

double asymptotic_correlation(double alpha, std::uint64_t lag, const RenewalSequence& seq,
                              bool include_type_variance_factor, double p) {
    const double cross = tauberian_cross_sum_asymptote(alpha, lag);
    const double factor = include_type_variance_factor ? bernoulli_variance(p) : 1.0;
    return factor * cross / (sum_q_squared(seq).value + 1.0);
}

double asymptotic_correlation_adjusted(double alpha, std::uint64_t lag,
                                       const RenewalSequence& seq,
                                       bool include_type_variance_factor, double p) {
    return asymptotic_correlation(alpha, lag, seq, include_type_variance_factor, p) /
           (2.0 * std::cos(M_PI * alpha));
}

CorrelationReport estimate_correlation_mc(const CorrelationRequest& request) {
    if (request.replicates < 2)
        throw invalid_parameter_error("correlation estimation requires >= 2 replicates");
    if (!(request.p >= 0.0 && request.p <= 1.0))
        throw invalid_parameter_error("p must be in [0,1]");
    const std::int64_t g0 = -static_cast<std::int64_t>(request.window_depth / 2);
    for (const std::uint64_t lag : request.lags)
        if (g0 + static_cast<std::int64_t>(lag) > 0)
            throw invalid_parameter_error("lags must stay inside the window (lag <= T/2)");

    struct Row {
        double y0;
        std::vector<double> ylag;
        double external_fraction;
    };
    const auto rows = map_replicates<Row>(
        request.replicates, request.threads, [&](std::uint64_t rep) {
            RngStream rng = replicate_stream(request.master_seed, rep);
            const GenealogyWindow window = build_genealogy(
                static_cast<std::uint32_t>(request.population), request.window_depth,
                request.burn_in, request.dist, rng);
            const ComponentLabeling labeling = label_components(window);
            const TypeField types = assign_types(labeling, request.p, rng);
            Row row;
            row.external_fraction = window.external_parent_fraction();
            const auto y_at = [&](std::int64_t gen) {
                return frequency_series(types, gen, gen).front();
            };
            row.y0 = y_at(g0);
            row.ylag.reserve(request.lags.size());
            for (const std::uint64_t lag : request.lags)
                row.ylag.push_back(y_at(g0 + static_cast<std::int64_t>(lag)));
            return row;
        });

    const auto reps = static_cast<double>(request.replicates);
    CorrelationReport report;
    report.replicates = request.replicates;
    report.measurement_generation = g0;

    double mean0 = 0.0, ext = 0.0;
    for (const Row& row : rows) {
        mean0 += row.y0;
        ext += row.external_fraction;
    }
    mean0 /= reps;
    report.external_parent_fraction = ext / reps;

    double var0 = 0.0, m4 = 0.0;
    for (const Row& row : rows) {
        const double d = row.y0 - mean0;
        var0 += d * d;
        m4 += d * d * d * d;
    }
    var0 /= (reps - 1.0);
    m4 /= reps;
    report.mean_y = mean0;
    report.mean_y_std_error = std::sqrt(var0 / reps);
    report.var_y = var0;
    report.var_y_std_error = std::sqrt(std::max(0.0, m4 - var0 * var0) / reps);

    const bool have_exact = request.exact_horizon > 0;
    RenewalSequence seq;
    bool formulas_apply = false;
    if (have_exact) {
        seq = compute_renewal_sequence(request.dist, request.exact_horizon);
        formulas_apply = sum_q_squared(seq).converged(1e-3);
    }
    report.exact_var = (have_exact && formulas_apply)
                           ? exact_variance(request.population, seq, request.p)
                           : std::numeric_limits<double>::quiet_NaN();

    for (std::size_t li = 0; li < request.lags.size(); ++li) {
        LagStat stat;
        stat.lag = request.lags[li];
        double meanl = 0.0;
        for (const Row& row : rows) meanl += row.ylag[li];
        meanl /= reps;
        double cov = 0.0, second = 0.0;
        for (const Row& row : rows) {
            const double prod = (row.y0 - mean0) * (row.ylag[li] - meanl);
            cov += prod;
            second += prod * prod;
        }
        cov /= (reps - 1.0);
        second /= reps;
        stat.cov = cov;
        stat.cov_std_error = std::sqrt(std::max(0.0, second - cov * cov) / reps);
        double varl = 0.0;
        for (const Row& row : rows) varl += (row.ylag[li] - meanl) * (row.ylag[li] - meanl);
        varl /= (reps - 1.0);
        stat.corr = (var0 > 0.0 && varl > 0.0) ? cov / std::sqrt(var0 * varl) : 0.0;

        if (have_exact && formulas_apply) {
            stat.exact_cov = exact_covariance(request.population, seq, stat.lag, request.p);
            // unresolved sub-window coincidences: depth available from the
            // measurement generation to the window bottom, minus the lag
            const std::int64_t bottom =
                -static_cast<std::int64_t>(request.window_depth) - request.burn_in;
            const auto depth = static_cast<std::uint64_t>(g0 - bottom);
            const std::uint64_t usable = depth > stat.lag ? depth - stat.lag : 0;
            const std::uint64_t H = seq.horizon();
            double tail_cross = 0.0;
            if (usable + stat.lag <= H)
                tail_cross = kernels::dot(seq.q.data() + usable,
                                          seq.q.data() + usable + stat.lag,
                                          H - stat.lag - usable + 1);
            stat.bias_bound = bernoulli_variance(request.p) * tail_cross /
                              static_cast<double>(request.population);
        } else {
            stat.exact_cov = std::numeric_limits<double>::quiet_NaN();
            stat.bias_bound = std::numeric_limits<double>::quiet_NaN();
        }
        report.lags.push_back(stat);
    }
    return report;
}

} // namespace seedbank
