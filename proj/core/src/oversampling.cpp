#include "cfsmote/oversampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cfsmote/csv.hpp"
#include "cfsmote/neighbors.hpp"
#include "cfsmote/rng.hpp"

namespace cfsmote {

std::string_view method_name(Method method) {
    switch (method) {
        case Method::Baseline: return "baseline";
        case Method::Smote: return "smote";
        case Method::BorderlineSmote: return "b_smote";
        case Method::GeometricSmote: return "g_smote";
        case Method::DiceSmote: return "dice_smote";
        case Method::CfaSmote: return "cfa_smote";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view text) {
    std::string norm(text);
    std::replace(norm.begin(), norm.end(), '-', '_');
    if (norm == "baseline") return Method::Baseline;
    if (norm == "smote") return Method::Smote;
    if (norm == "b_smote" || norm == "borderline_smote") return Method::BorderlineSmote;
    if (norm == "g_smote" || norm == "geometric_smote") return Method::GeometricSmote;
    if (norm == "dice_smote") return Method::DiceSmote;
    if (norm == "cfa_smote") return Method::CfaSmote;
    return std::nullopt;
}

std::size_t requested_count(const Dataset& data, const TargetCount& target) {
    if (!target.parity) return target.count;
    const ClassStats stats = class_stats(data);
    return stats.majority_count > stats.minority_count ? stats.majority_count - stats.minority_count : 0;
}

Instance smote_interpolate(const Instance& seed_point, const Instance& neighbor, double delta, std::string id) {
    Instance out;
    out.id = std::move(id);
    out.features.resize(seed_point.features.size());
    for (std::size_t f = 0; f < seed_point.features.size(); ++f) {
        out.features[f] = seed_point.features[f] + delta * (neighbor.features[f] - seed_point.features[f]);
    }
    out.target = seed_point.target + delta * (neighbor.target - seed_point.target);
    out.label = ClassLabel::Minority;
    return out;
}

namespace {

std::string padded_id(std::string_view prefix, std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06zu", n);
    return std::string(prefix) + "-" + buf;
}

void require_labeled(const Dataset& data, const char* op) {
    if (!data.fully_labeled()) throw DataError(std::string(op) + ": dataset has unlabeled instances");
}

// k nearest neighbors of each seed among `among`, self excluded by pointer
// identity, ascending distance with ties to the lower `among` position.
std::vector<std::vector<std::size_t>> knn_lists(const std::vector<const Instance*>& seeds,
                                                const std::vector<const Instance*>& among, std::size_t k) {
    std::vector<std::vector<std::size_t>> lists(seeds.size());
    std::vector<std::pair<double, std::size_t>> dists;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        dists.clear();
        for (std::size_t a = 0; a < among.size(); ++a) {
            if (among[a] == seeds[s]) continue;
            dists.emplace_back(distance(seeds[s]->features, among[a]->features), a);
        }
        const std::size_t take = std::min(k, dists.size());
        std::partial_sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(take), dists.end());
        lists[s].reserve(take);
        for (std::size_t i = 0; i < take; ++i) lists[s].push_back(dists[i].second);
    }
    return lists;
}

// The shared SMOTE stage: n interpolations with seeds drawn uniformly from
// `seeds` and neighbors uniformly from each seed's k-NN within `among`.
// A singleton pool duplicates its only point when allowed.
void smote_stage(const std::vector<const Instance*>& seeds, const std::vector<const Instance*>& among, std::size_t n,
                 std::size_t k, rng::Stream& stream, std::string_view generator, std::string_view id_prefix,
                 bool allow_singleton, AugmentationResult& result) {
    if (n == 0) return;
    if (seeds.empty()) throw MethodError(std::string(generator) + ": empty seed pool");
    if (!allow_singleton && among.size() < 2) {
        throw MethodError(std::string(generator) + ": minority class has < 2 instances");
    }
    if (among.size() == 1) result.diagnostics.degenerate_single_syncf = true;

    const std::size_t k_eff = std::min(k, among.size() > 0 ? among.size() - 1 : 0);
    if (k_eff < k) result.diagnostics.k_clamped = true;
    const std::vector<std::vector<std::size_t>> lists = knn_lists(seeds, among, std::max<std::size_t>(k_eff, 1));

    const std::size_t base = result.synthetic.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = stream.index(seeds.size());
        const Instance& seed_point = *seeds[s];
        const Instance* neighbor = &seed_point;  // singleton pool duplicates the point
        if (!lists[s].empty()) neighbor = among[lists[s][stream.index(lists[s].size())]];
        const double delta = stream.unit();

        result.synthetic.push_back(smote_interpolate(seed_point, *neighbor, delta, padded_id(id_prefix, base + i)));
        SyntheticProvenance prov;
        prov.generator = std::string(generator);
        prov.source_id = seed_point.id;
        prov.neighbor_id = neighbor->id;
        prov.delta = delta;
        result.provenance.push_back(std::move(prov));
    }
}

std::vector<const Instance*> label_pool(const Dataset& data, ClassLabel label) {
    std::vector<const Instance*> pool;
    for (const Instance& inst : data.instances()) {
        if (inst.label == label) pool.push_back(&inst);
    }
    return pool;
}

double measure_validity(const Dataset& data, const ClassBoundary& boundary,
                        const std::vector<Instance>& synthetic) {
    if (synthetic.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::size_t hits = 0;
    for (const Instance& inst : synthetic) {
        if (boundary.is_minority(data.schema(), inst)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(synthetic.size());
}

}  // namespace

AugmentationResult smote(const Dataset& data, std::size_t n, std::size_t k, std::uint64_t seed) {
    require_labeled(data, "smote");
    if (k == 0) throw DataError("smote: k must be >= 1");
    AugmentationResult result;
    if (n == 0) return result;
    const std::vector<const Instance*> minority = label_pool(data, ClassLabel::Minority);
    rng::Stream stream(seed);
    smote_stage(minority, minority, n, k, stream, "smote", "smote", /*allow_singleton=*/false, result);
    return result;
}

std::vector<std::size_t> borderline_danger_set(const Dataset& data, std::size_t m) {
    require_labeled(data, "borderline_smote");
    if (m == 0) throw DataError("borderline_smote: m must be >= 1");
    const std::size_t m_eff = std::min(m, data.size() > 0 ? data.size() - 1 : 0);

    std::vector<std::size_t> danger;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Instance& inst = data.instances()[i];
        if (inst.label != ClassLabel::Minority) continue;
        std::vector<std::pair<double, std::size_t>> dists;
        dists.reserve(data.size() - 1);
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (j == i) continue;
            dists.emplace_back(distance(inst.features, data.instances()[j].features), j);
        }
        std::partial_sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(m_eff), dists.end());
        std::size_t majority_neighbors = 0;
        for (std::size_t r = 0; r < m_eff; ++r) {
            if (data.instances()[dists[r].second].label == ClassLabel::Majority) ++majority_neighbors;
        }
        // DANGER iff m/2 <= majority neighbors < m
        if (2 * majority_neighbors >= m_eff && majority_neighbors < m_eff) danger.push_back(i);
    }
    return danger;
}

AugmentationResult borderline_smote(const Dataset& data, std::size_t n, std::size_t m, std::size_t k,
                                    std::uint64_t seed) {
    require_labeled(data, "borderline_smote");
    if (k == 0) throw DataError("borderline_smote: k must be >= 1");
    AugmentationResult result;
    if (n == 0) return result;

    const std::vector<const Instance*> minority = label_pool(data, ClassLabel::Minority);
    if (minority.size() < 2) throw MethodError("borderline_smote: minority class has < 2 instances");

    const std::vector<std::size_t> danger_idx = borderline_danger_set(data, m);
    std::vector<const Instance*> seeds;
    seeds.reserve(danger_idx.size());
    for (std::size_t i : danger_idx) seeds.push_back(&data.instances()[i]);

    rng::Stream stream(seed);
    if (seeds.empty()) {
        // reported, not fatal: plain SMOTE stands in
        result.diagnostics.danger_empty_fallback = true;
        smote_stage(minority, minority, n, k, stream, "b_smote", "b-smote", false, result);
    } else {
        smote_stage(seeds, minority, n, k, stream, "b_smote", "b-smote", false, result);
    }
    return result;
}

AugmentationResult gsmote(const Dataset& data, std::size_t n, std::size_t k, double truncation, double deformation,
                          std::uint64_t seed) {
    require_labeled(data, "gsmote");
    if (k == 0) throw DataError("gsmote: k must be >= 1");
    if (truncation < -1.0 || truncation > 1.0) throw DataError("gsmote: truncation must be in [-1, 1]");
    if (deformation < 0.0 || deformation > 1.0) throw DataError("gsmote: deformation must be in [0, 1]");
    AugmentationResult result;
    if (n == 0) return result;

    const std::vector<const Instance*> minority = label_pool(data, ClassLabel::Minority);
    if (minority.size() < 2) throw MethodError("gsmote: minority class has < 2 instances");

    const std::size_t dim = data.schema().feature_count();
    const std::size_t k_eff = std::min(k, minority.size() - 1);
    if (k_eff < k) result.diagnostics.k_clamped = true;
    const std::vector<std::vector<std::size_t>> lists = knn_lists(minority, minority, k_eff);

    rng::Stream stream(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = stream.index(minority.size());
        const Instance& center = *minority[s];
        const Instance& surface = *minority[lists[s][stream.index(lists[s].size())]];
        const double radius = distance(center.features, surface.features);

        // point in the unit ball: random direction, radius u^(1/d)
        std::vector<double> u(dim, 0.0);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (std::size_t f = 0; f < dim; ++f) {
                u[f] = stream.normal();
                norm += u[f] * u[f];
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        const double r = std::pow(stream.unit(), 1.0 / static_cast<double>(dim));
        for (double& v : u) v = v / norm * r;

        Instance synth;
        synth.id = padded_id("g-smote", i);
        synth.label = ClassLabel::Minority;
        synth.target = center.target;

        if (radius == 0.0) {
            synth.features = center.features;
        } else {
            std::vector<double> axis(dim);
            for (std::size_t f = 0; f < dim; ++f) axis[f] = (surface.features[f] - center.features[f]) / radius;

            double proj = 0.0;
            for (std::size_t f = 0; f < dim; ++f) proj += u[f] * axis[f];
            // reflect when the parallel component opposes the truncation sign
            if ((truncation > 0.0 && proj < truncation - 1.0) || (truncation < 0.0 && proj > truncation + 1.0)) {
                for (std::size_t f = 0; f < dim; ++f) u[f] -= 2.0 * proj * axis[f];
                proj = -proj;
            }
            // shrink the perpendicular component
            for (std::size_t f = 0; f < dim; ++f) {
                const double parallel = proj * axis[f];
                u[f] = parallel + (1.0 - deformation) * (u[f] - parallel);
            }
            synth.features.resize(dim);
            for (std::size_t f = 0; f < dim; ++f) synth.features[f] = center.features[f] + radius * u[f];
        }

        result.synthetic.push_back(std::move(synth));
        SyntheticProvenance prov;
        prov.generator = "g_smote";
        prov.source_id = center.id;
        prov.neighbor_id = surface.id;
        result.provenance.push_back(std::move(prov));
    }
    return result;
}

AugmentationResult cfa_smote(const Dataset& data, const AugmenterConfig& config) {
    require_labeled(data, "cfa_smote");
    AugmentationResult result;
    const std::size_t deficit = requested_count(data, config.target_count);
    if (deficit == 0) return result;

    const std::vector<NativePair> pairs = mine_native_pairs(data, config.pair_validity);
    if (pairs.empty()) throw MethodError("cfa_smote: no valid native pairs");
    const std::vector<std::size_t> unpaired = filter_unpaired(data, pairs);
    const std::vector<SyntheticCounterfactual> syncf = generate_cfa(data, pairs, unpaired, deficit);
    if (syncf.empty()) {
        throw MethodError("cfa_smote: no unpaired majority instances, SYN-CF is empty");
    }

    result.diagnostics.native_pairs = pairs.size();
    result.diagnostics.unpaired_count = unpaired.size();
    result.diagnostics.syncf_count = syncf.size();

    result.synthetic.reserve(deficit);
    for (const SyntheticCounterfactual& cf : syncf) {
        result.synthetic.push_back(cf.instance);
        SyntheticProvenance prov;
        prov.generator = "cfa";
        prov.source_id = data.instances()[cf.source_unpaired_index].id;
        prov.template_majority_id = data.instances()[cf.template_pair.majority_index].id;
        prov.template_minority_id = data.instances()[cf.template_pair.minority_index].id;
        result.provenance.push_back(std::move(prov));
    }

    const std::size_t remaining = deficit - syncf.size();
    if (remaining > 0) {
        // the synthetic counterfactuals are the sole SMOTE inputs
        std::vector<const Instance*> pool;
        pool.reserve(syncf.size());
        for (std::size_t i = 0; i < syncf.size(); ++i) pool.push_back(&result.synthetic[i]);
        rng::Stream stream(config.seed);
        smote_stage(pool, pool, remaining, config.smote_k, stream, "cfa_smote", "cfa-smote",
                    /*allow_singleton=*/true, result);
        result.diagnostics.smote_stage_count = remaining;
    }
    if (config.boundary) {
        result.diagnostics.minority_validity_rate = measure_validity(data, *config.boundary, result.synthetic);
    }
    return result;
}

AugmentationResult dice_smote(const Dataset& data, const AugmenterConfig& config) {
    require_labeled(data, "dice_smote");
    AugmentationResult result;
    const std::size_t deficit = requested_count(data, config.target_count);
    if (deficit == 0) return result;
    if (!config.boundary) throw DataError("dice_smote: a class boundary is required as the DiCE-lite oracle");

    const DiceContext ctx = DiceContext::fit(data);
    result.synthetic.reserve(deficit);
    std::size_t made = 0;
    for (std::size_t i = 0; i < data.size() && made < deficit; ++i) {
        if (data.instances()[i].label != ClassLabel::Majority) continue;
        std::vector<Instance> cfs = generate_dice_lite(data, *config.boundary, ctx, i, 1, config.dice,
                                                       rng::derive(config.seed, "dice-query", i));
        if (cfs.empty()) continue;  // this query found no boundary crossing
        Instance cf = std::move(cfs.front());
        cf.id = padded_id("dice", made);
        result.synthetic.push_back(std::move(cf));
        SyntheticProvenance prov;
        prov.generator = "dice_lite";
        prov.source_id = data.instances()[i].id;
        result.provenance.push_back(std::move(prov));
        ++made;
    }
    if (made == 0) throw MethodError("dice_smote: DiCE-lite produced no counterfactuals within the sampling budget");
    result.diagnostics.syncf_count = made;

    const std::size_t remaining = deficit - made;
    if (remaining > 0) {
        std::vector<const Instance*> pool;
        pool.reserve(made);
        for (std::size_t i = 0; i < made; ++i) pool.push_back(&result.synthetic[i]);
        rng::Stream stream(rng::derive(config.seed, "dice-smote-stage"));
        smote_stage(pool, pool, remaining, config.smote_k, stream, "dice_smote", "dice-smote",
                    /*allow_singleton=*/true, result);
        result.diagnostics.smote_stage_count = remaining;
    }
    result.diagnostics.minority_validity_rate = measure_validity(data, *config.boundary, result.synthetic);
    return result;
}

AugmentationResult run_augmenter(const Dataset& data, const AugmenterConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    AugmentationResult result;
    const std::size_t n = requested_count(data, config.target_count);
    switch (config.method) {
        case Method::Baseline:
            break;
        case Method::Smote:
            result = smote(data, n, config.smote_k, config.seed);
            break;
        case Method::BorderlineSmote:
            result = borderline_smote(data, n, config.borderline_m, config.smote_k, config.seed);
            break;
        case Method::GeometricSmote:
            result = gsmote(data, n, config.smote_k, config.gsmote_truncation, config.gsmote_deformation, config.seed);
            break;
        case Method::CfaSmote:
            result = cfa_smote(data, config);
            break;
        case Method::DiceSmote:
            result = dice_smote(data, config);
            break;
    }
    result.diagnostics.wall_seconds =
        std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() - start).count();
    if (config.boundary) {
        result.diagnostics.minority_validity_rate = measure_validity(data, *config.boundary, result.synthetic);
    }
    return result;
}

Dataset augmented_dataset(const Dataset& original, const AugmentationResult& result) {
    std::vector<Instance> combined = original.instances();
    combined.insert(combined.end(), result.synthetic.begin(), result.synthetic.end());
    return Dataset(original.schema(), std::move(combined));
}

Dataset augment(const Dataset& data, const AugmenterConfig& config) {
    return augmented_dataset(data, run_augmenter(data, config));
}

void write_augmented_csv(std::ostream& out, const Dataset& original, const AugmentationResult& result) {
    const FeatureSchema& schema = original.schema();
    out << "id";
    for (const auto& name : schema.feature_names) out << ',' << name;
    out << ',' << schema.target_name
        << ",label,synthetic,generator,source_id,template_majority_id,template_minority_id\n";

    auto write_row = [&](const Instance& inst, const SyntheticProvenance* prov) {
        out << inst.id;
        for (double v : inst.features) out << ',' << csv::format_double(v);
        out << ',' << csv::format_double(inst.target);
        out << ',' << (inst.label ? to_string(*inst.label) : std::string_view{});
        if (prov) {
            out << ",1," << prov->generator << ',' << prov->source_id << ',' << prov->template_majority_id << ','
                << prov->template_minority_id;
        } else {
            out << ",0,,,,";
        }
        out << '\n';
    };
    for (const Instance& inst : original.instances()) write_row(inst, nullptr);
    for (std::size_t i = 0; i < result.synthetic.size(); ++i) write_row(result.synthetic[i], &result.provenance[i]);
}

}  // namespace cfsmote
