#include "cfsmote/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "cfsmote/csv.hpp"
#include "cfsmote/neighbors.hpp"
#include "cfsmote/rng.hpp"

namespace cfsmote {

namespace {

void require_labeled(const Dataset& data, const char* op) {
    if (!data.fully_labeled()) throw DataError(std::string(op) + ": dataset has unlabeled instances");
}

std::string padded_id(const std::string& prefix, std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06zu", n);
    return prefix + "-" + buf;
}

}  // namespace

std::vector<double> PairValidity::default_tolerances(const Dataset& data) {
    if (data.empty()) throw DataError("default_tolerances: empty dataset");
    const std::size_t dim = data.schema().feature_count();
    std::vector<double> tol(dim, 0.0);
    const double n = static_cast<double>(data.size());
    for (std::size_t f = 0; f < dim; ++f) {
        double sum = 0.0;
        double sumsq = 0.0;
        for (const Instance& inst : data.instances()) {
            sum += inst.features[f];
            sumsq += inst.features[f] * inst.features[f];
        }
        const double mean = sum / n;
        const double var = std::max(0.0, sumsq / n - mean * mean);
        tol[f] = 0.1 * std::sqrt(var);
    }
    return tol;
}

std::vector<NativePair> mine_native_pairs(const Dataset& data, const PairValidity& validity) {
    require_labeled(data, "mine_native_pairs");
    const std::vector<std::size_t> majority = data.indices_with(ClassLabel::Majority);
    const std::vector<std::size_t> minority = data.indices_with(ClassLabel::Minority);
    if (majority.empty()) throw MethodError("mine_native_pairs: majority class is empty");
    if (minority.empty()) throw MethodError("mine_native_pairs: minority class is empty");

    std::vector<double> tol = validity.feature_tolerance;
    if (tol.empty()) {
        tol = PairValidity::default_tolerances(data);
    } else if (tol.size() != data.schema().feature_count()) {
        throw DataError("mine_native_pairs: tolerance vector length does not match schema");
    }
    for (double t : tol) {
        if (t < 0.0) throw DataError("mine_native_pairs: negative tolerance");
    }

    const auto& instances = data.instances();
    std::vector<NativePair> pairs;
    for (std::size_t maj : majority) {
        // 1-NN among the minority class, ties to the lower instance index
        std::size_t best = minority.front();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t min_idx : minority) {
            const double d = distance(instances[maj].features, instances[min_idx].features);
            if (d < best_dist) {
                best_dist = d;
                best = min_idx;
            }
        }

        NativePair pair;
        pair.majority_index = maj;
        pair.minority_index = best;
        pair.pair_distance = best_dist;
        for (std::size_t f = 0; f < data.schema().feature_count(); ++f) {
            const double gap = std::abs(instances[maj].features[f] - instances[best].features[f]);
            if (gap > tol[f]) {
                pair.difference_features.push_back(f);
            } else {
                pair.match_features.push_back(f);
            }
        }
        if (pair.difference_features.size() > validity.max_difference_features) continue;
        if (validity.max_pair_distance && pair.pair_distance > *validity.max_pair_distance) continue;
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<std::size_t> filter_unpaired(const Dataset& data, const std::vector<NativePair>& pairs) {
    require_labeled(data, "filter_unpaired");
    std::vector<bool> paired(data.size(), false);
    for (const NativePair& pair : pairs) paired[pair.majority_index] = true;
    std::vector<std::size_t> unpaired;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.instances()[i].label == ClassLabel::Majority && !paired[i]) unpaired.push_back(i);
    }
    return unpaired;
}

std::vector<SyntheticCounterfactual> generate_cfa(const Dataset& data, const std::vector<NativePair>& pairs,
                                                  const std::vector<std::size_t>& unpaired, std::size_t budget,
                                                  const std::string& id_prefix) {
    require_labeled(data, "generate_cfa");
    if (pairs.empty()) throw MethodError("generate_cfa: no valid native pairs to template from");
    const auto& instances = data.instances();

    // nearest paired majority instance for every unpaired instance
    struct Ranked {
        std::size_t unpaired_index;
        std::size_t pair_slot;
        double dist;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(unpaired.size());
    for (std::size_t src : unpaired) {
        std::size_t best_slot = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < pairs.size(); ++s) {
            const double d = distance(instances[src].features, instances[pairs[s].majority_index].features);
            if (d < best_dist) {
                best_dist = d;
                best_slot = s;
            }
        }
        ranked.push_back(Ranked{src, best_slot, best_dist});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.unpaired_index < b.unpaired_index;
    });
    if (ranked.size() > budget) ranked.resize(budget);

    std::vector<SyntheticCounterfactual> out;
    out.reserve(ranked.size());
    for (std::size_t n = 0; n < ranked.size(); ++n) {
        const Ranked& r = ranked[n];
        const NativePair& tpl = pairs[r.pair_slot];
        const Instance& source = instances[r.unpaired_index];
        const Instance& counter = instances[tpl.minority_index];

        Instance synth;
        synth.id = padded_id(id_prefix, n);
        synth.features = source.features;  // match features stay at x' values
        for (std::size_t f : tpl.difference_features) synth.features[f] = counter.features[f];
        synth.target = counter.target;  // minority outcome travels with the difference features
        synth.label = ClassLabel::Minority;

        out.push_back(SyntheticCounterfactual{std::move(synth), r.unpaired_index, tpl});
    }
    return out;
}

DiceContext DiceContext::fit(const Dataset& data) {
    if (data.empty()) throw DataError("DiceContext::fit: empty dataset");
    const std::size_t dim = data.schema().feature_count();
    DiceContext ctx;
    ctx.feature_min.assign(dim, std::numeric_limits<double>::infinity());
    ctx.feature_max.assign(dim, -std::numeric_limits<double>::infinity());
    ctx.feature_mad.assign(dim, 1.0);
    std::vector<double> column(data.size());
    for (std::size_t f = 0; f < dim; ++f) {
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double v = data.instances()[i].features[f];
            ctx.feature_min[f] = std::min(ctx.feature_min[f], v);
            ctx.feature_max[f] = std::max(ctx.feature_max[f], v);
            column[i] = v;
        }
        auto median_of = [](std::vector<double>& values) {
            const std::size_t mid = values.size() / 2;
            std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
            double m = values[mid];
            if (values.size() % 2 == 0) {
                const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
                m = 0.5 * (m + lower);
            }
            return m;
        };
        const double med = median_of(column);
        std::vector<double> dev(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) dev[i] = std::abs(column[i] - med);
        const double mad = median_of(dev);
        ctx.feature_mad[f] = mad > 0.0 ? mad : 1.0;
    }
    return ctx;
}

namespace {

double scaled_l1(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& mad) {
    double sum = 0.0;
    for (std::size_t f = 0; f < a.size(); ++f) sum += std::abs(a[f] - b[f]) / mad[f];
    return sum;
}

}  // namespace

std::vector<Instance> generate_dice_lite(const Dataset& data, const ClassBoundary& boundary, const DiceContext& ctx,
                                         std::size_t query_index, std::size_t n_cf, const DiceConfig& config,
                                         std::uint64_t seed, const std::string& id_prefix) {
    require_labeled(data, "generate_dice_lite");
    if (query_index >= data.size()) throw DataError("generate_dice_lite: query index out of range");
    const Instance& query = data.instances()[query_index];
    if (query.label != ClassLabel::Majority) {
        throw DataError("generate_dice_lite: query '" + query.id + "' is not a majority instance");
    }
    if (n_cf == 0) throw DataError("generate_dice_lite: n_cf must be >= 1");
    const std::vector<std::size_t> minority = data.indices_with(ClassLabel::Minority);
    if (minority.empty()) throw MethodError("generate_dice_lite: no true minority instances for target transfer");

    const FeatureSchema& schema = data.schema();
    const std::size_t dim = schema.feature_count();

    // candidate perturbations of the query
    std::vector<std::vector<double>> candidates;
    if (config.grid_step) {
        const double step = *config.grid_step;
        if (step <= 0.0) throw DataError("generate_dice_lite: grid step must be positive");
        for (std::size_t f = 0; f < dim; ++f) {
            for (double v = ctx.feature_min[f]; v <= ctx.feature_max[f] + 1e-12; v += step) {
                std::vector<double> cand = query.features;
                cand[f] = v;
                candidates.push_back(std::move(cand));
            }
        }
    } else {
        rng::Stream stream(seed);
        candidates.reserve(config.pool_size);
        for (std::size_t c = 0; c < config.pool_size; ++c) {
            std::vector<double> cand = query.features;
            bool perturbed = false;
            while (!perturbed) {
                for (std::size_t f = 0; f < dim; ++f) {
                    if (stream.unit() < 0.5) {
                        cand[f] = stream.range(ctx.feature_min[f], ctx.feature_max[f]);
                        perturbed = true;
                    }
                }
            }
            candidates.push_back(std::move(cand));
        }
    }

    // keep the ones that cross into the minority region
    struct Scored {
        std::vector<double> features;
        double proximity;
    };
    std::vector<Scored> crossing;
    Instance probe = query;
    for (auto& cand : candidates) {
        probe.features = cand;
        if (!boundary.is_minority(schema, probe)) continue;
        const double prox = scaled_l1(cand, query.features, ctx.feature_mad);
        crossing.push_back(Scored{std::move(cand), prox});
    }
    if (crossing.empty()) return {};  // reported by the caller, not fatal

    std::vector<std::size_t> order(crossing.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return crossing[a].proximity < crossing[b].proximity; });

    // best proximity first, then greedily maximize the minimum scaled-L1
    // distance to the already selected set
    std::vector<std::size_t> selected;
    selected.push_back(order.front());
    while (selected.size() < n_cf && selected.size() < crossing.size()) {
        double best_score = -1.0;
        std::size_t best_cand = 0;
        bool found = false;
        for (std::size_t idx : order) {
            if (std::find(selected.begin(), selected.end(), idx) != selected.end()) continue;
            double min_gap = std::numeric_limits<double>::infinity();
            for (std::size_t s : selected) {
                min_gap = std::min(min_gap, scaled_l1(crossing[idx].features, crossing[s].features, ctx.feature_mad));
            }
            if (min_gap > best_score) {
                best_score = min_gap;
                best_cand = idx;
                found = true;
            }
        }
        if (!found) break;
        selected.push_back(best_cand);
    }

    std::vector<Instance> out;
    out.reserve(selected.size());
    for (std::size_t n = 0; n < selected.size(); ++n) {
        Instance synth;
        synth.id = padded_id(id_prefix, n);
        synth.features = crossing[selected[n]].features;
        // target transfers from the nearest true minority instance
        std::size_t nearest = minority.front();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m : minority) {
            const double d = distance(synth.features, data.instances()[m].features);
            if (d < best) {
                best = d;
                nearest = m;
            }
        }
        synth.target = data.instances()[nearest].target;
        synth.label = ClassLabel::Minority;
        out.push_back(std::move(synth));
    }
    return out;
}

std::vector<Instance> generate_dice_lite(const Dataset& data, const ClassBoundary& boundary, std::size_t query_index,
                                         std::size_t n_cf, const DiceConfig& config, std::uint64_t seed) {
    return generate_dice_lite(data, boundary, DiceContext::fit(data), query_index, n_cf, config, seed);
}

void write_counterfactuals_csv(std::ostream& out, const Dataset& data,
                               const std::vector<SyntheticCounterfactual>& syncf) {
    const FeatureSchema& schema = data.schema();
    out << "id";
    for (const auto& name : schema.feature_names) out << ',' << name;
    out << ',' << schema.target_name << ",label,source_id,template_majority_id,template_minority_id,generator\n";
    for (const SyntheticCounterfactual& cf : syncf) {
        out << cf.instance.id;
        for (double v : cf.instance.features) out << ',' << csv::format_double(v);
        out << ',' << csv::format_double(cf.instance.target);
        out << ",minority";
        out << ',' << data.instances()[cf.source_unpaired_index].id;
        out << ',' << data.instances()[cf.template_pair.majority_index].id;
        out << ',' << data.instances()[cf.template_pair.minority_index].id;
        out << ",cfa\n";
    }
}

}  // namespace cfsmote
