#include "blr/ptas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "blr/errors.hpp"
#include "blr/sampling.hpp"

namespace blr {

using u128 = unsigned __int128;

namespace {

constexpr std::uint64_t kMaxReservoirSlots = std::uint64_t{1} << 22;
constexpr std::uint64_t kMaxGridExponent = 100000;
constexpr std::uint64_t kSamplingSubstream = 0x5A17;
constexpr std::uint64_t kBudgetSubstream = 0xB0D6;

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        const std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Ratio Ratio::of(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw InvalidParameterError("ratio with zero denominator");
    if (num == 0) return {0, 1};
    const std::uint64_t g = gcd_u64(num, den);
    return {num / g, den / g};
}

Ratio Ratio::parse(std::string_view text) {
    const auto bad = [&] {
        return InvalidParameterError("cannot parse ratio '" + std::string(text) + "'");
    };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        std::uint64_t num = 0, den = 0;
        try {
            num = std::stoull(std::string(text.substr(0, slash)));
            den = std::stoull(std::string(text.substr(slash + 1)));
        } catch (const std::exception&) {
            throw bad();
        }
        if (den == 0) throw bad();
        return Ratio::of(num, den);
    }
    const auto dot = text.find('.');
    std::string_view whole = dot == std::string_view::npos ? text : text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos
                                ? std::string_view{}
                                : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw bad();
    if (frac.size() > 18)
        throw InvalidParameterError("ratio with more than 18 decimal digits");
    std::string digits = std::string(whole) + std::string(frac);
    for (char c : digits)
        if (c < '0' || c > '9') throw bad();
    std::uint64_t num = 0;
    try {
        num = std::stoull(digits);
    } catch (const std::exception&) {
        throw bad();
    }
    std::uint64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return Ratio::of(num, den);
}

namespace {

void check_epsilon(const Ratio& epsilon) {
    if (epsilon.num == 0 || 2 * epsilon.num > epsilon.den)
        throw InvalidParameterError("epsilon must lie in (0, 1/2]");
}

}  // namespace

PtasParams default_params(std::size_t k, Ratio epsilon, double alpha) {
    if (k == 0) throw InvalidParameterError("default_params: k must be >= 1");
    check_epsilon(epsilon);
    if (alpha < 1.0)
        throw InvalidParameterError("default_params: alpha must be >= 1");
    const double eps = epsilon.value();
    // eps <= 1/2 keeps k/eps >= 2, so the logarithm stays positive.
    const double tau = std::ceil(k / (eps * eps) * std::log(k / eps));
    const double eta = std::ceil(tau * alpha * k / (eps * eps));
    PtasParams params;
    params.epsilon = epsilon;
    params.tau = static_cast<std::uint64_t>(tau);
    params.eta = static_cast<std::uint64_t>(eta);
    params.zeta = (32 * epsilon.den + epsilon.num - 1) / epsilon.num;
    params.alpha = alpha;
    return params;
}

WeightGrid::WeightGrid(std::uint64_t n, Ratio epsilon) {
    if (n == 0) throw InvalidParameterError("weight grid needs n >= 1");
    check_epsilon(epsilon);
    // 1 + eps/2 = (2q + p) / (2q), reduced.
    const Ratio base = Ratio::of(2 * epsilon.den + epsilon.num, 2 * epsilon.den);
    base_num_ = base.num;
    base_den_ = base.den;
    BigUint p{1};
    BigUint q{1};
    for (std::uint64_t j = 0;; ++j) {
        numerators_.push_back(p);
        denominators_.push_back(q);
        BigUint scaled = q;
        scaled.mul_u64(n);
        if (p >= scaled) break;  // (1+eps/2)^j >= n: grid covers every size
        if (j >= kMaxGridExponent)
            throw LimitsExceededError("weight grid: epsilon too small for this n");
        p = p * BigUint(base_num_);
        q = q * BigUint(base_den_);
    }
}

std::vector<BigUint> WeightGrid::cleared_weights(
    std::span<const std::size_t> exponents) const {
    std::size_t max_e = 0;
    for (auto e : exponents) max_e = std::max(max_e, e);
    std::vector<BigUint> weights;
    weights.reserve(exponents.size());
    for (auto e : exponents)
        weights.push_back(numerators_[e] * denominators_[max_e - e]);
    return weights;
}

namespace {

// Per-coordinate tuple selection shared by the public optimizer and the
// candidate search. `ones[j][i]` counts samples of subset j with bit i set;
// writes the chosen bits into row-major words (k rows of words_per_row).
template <typename WeightAt>
void select_center_words(const RelationSet& relations,
                         const std::vector<std::vector<std::uint32_t>>& ones,
                         const std::vector<std::uint64_t>& sizes,
                         const WeightAt& weighted, std::size_t words_per_row,
                         std::vector<std::uint64_t>& out_words) {
    const std::size_t k = relations.k();
    const std::size_t d = relations.d();
    std::fill(out_words.begin(), out_words.end(), 0);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& list = relations.coord(i);
        std::uint64_t best_tuple = 0;
        bool have_best = false;
        auto best_f = weighted(0, 0);  // zero accumulator of the right type
        for (const auto& entry : list) {
            auto f = weighted(0, 0);
            for (std::size_t j = 0; j < k; ++j) {
                const std::uint64_t mismatches =
                    (entry.tuple >> j) & 1 ? sizes[j] - ones[j][i] : ones[j][i];
                f += weighted(j, mismatches);
            }
            if (!have_best || f < best_f) {
                best_f = std::move(f);
                best_tuple = entry.tuple;
                have_best = true;
            }
        }
        for (std::size_t j = 0; j < k; ++j)
            if ((best_tuple >> j) & 1)
                out_words[j * words_per_row + (i >> 6)] |= std::uint64_t{1}
                                                           << (i & 63);
    }
}

CenterSet centers_from_words(std::span<const std::uint64_t> words, std::size_t k,
                             std::size_t d, std::size_t words_per_row) {
    std::vector<BitRow> centers;
    centers.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        BitRow row(d);
        std::copy_n(words.begin() + j * words_per_row, words_per_row,
                    row.word_data());
        centers.push_back(std::move(row));
    }
    return CenterSet(std::move(centers));
}

struct WeightSet {
    bool fits_u64 = true;
    std::vector<std::uint64_t> small;
    std::vector<BigUint> big;
};

WeightSet to_weight_set(std::span<const BigUint> weights) {
    WeightSet ws;
    ws.big.assign(weights.begin(), weights.end());
    for (const auto& w : weights) {
        if (!w.fits_u64()) {
            ws.fits_u64 = false;
            break;
        }
    }
    if (ws.fits_u64) {
        ws.small.reserve(weights.size());
        for (const auto& w : weights) ws.small.push_back(w.to_u64());
    }
    return ws;
}

void run_selection(const RelationSet& relations,
                   const std::vector<std::vector<std::uint32_t>>& ones,
                   const std::vector<std::uint64_t>& sizes, const WeightSet& ws,
                   std::size_t words_per_row,
                   std::vector<std::uint64_t>& out_words) {
    if (ws.fits_u64) {
        // Fits in 128 bits: weights < 2^64, counts <= 2^32, k <= 64 terms.
        select_center_words(
            relations, ones, sizes,
            [&](std::size_t j, std::uint64_t count) -> u128 {
                return static_cast<u128>(ws.small[j]) * count;
            },
            words_per_row, out_words);
    } else {
        select_center_words(
            relations, ones, sizes,
            [&](std::size_t j, std::uint64_t count) -> BigUint {
                BigUint term = ws.big[j];
                term.mul_u64(count);
                return term;
            },
            words_per_row, out_words);
    }
}

}  // namespace

CenterSet best_centers(const RelationSet& relations,
                       std::span<const std::vector<BitRow>> samples,
                       std::span<const BigUint> weights) {
    const std::size_t k = relations.k();
    const std::size_t d = relations.d();
    if (samples.size() != k || weights.size() != k)
        throw ShapeMismatchError("best_centers: need k sample multisets and k weights");
    for (const auto& s : samples) {
        if (s.empty()) throw EmptyInputError("best_centers: empty sample multiset");
        for (const auto& row : s)
            if (row.width() != d)
                throw WidthMismatchError("best_centers: sample width differs from d");
    }

    std::vector<std::vector<std::uint32_t>> ones(k, std::vector<std::uint32_t>(d, 0));
    std::vector<std::uint64_t> sizes(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
        sizes[j] = samples[j].size();
        for (const auto& row : samples[j])
            for (std::size_t i = 0; i < d; ++i)
                ones[j][i] += row.bit(i);
    }

    const std::size_t words_per_row = (d + 63) / 64;
    std::vector<std::uint64_t> words(k * words_per_row, 0);
    run_selection(relations, ones, sizes, to_weight_set(weights), words_per_row,
                  words);
    return centers_from_words(words, k, d, words_per_row);
}

CenterSet best_centers(const RelationSet& relations,
                       std::span<const std::vector<BitRow>> samples,
                       std::span<const std::uint64_t> weights) {
    std::vector<BigUint> big(weights.begin(), weights.end());
    return best_centers(relations, samples, big);
}

namespace {

// Candidate generation state shared across the weight tuples of one subset
// allocation.
struct CandidateSink {
    const RelationSet& relations;
    std::size_t words_per_row;
    std::vector<std::uint64_t> scratch_words;
    std::unordered_set<std::string> seen;
    std::vector<CenterSet> candidates;
    GoodCentersDiagnostics& diag;
    const std::function<void(const CenterSet&)>& observer;

    void emit(const std::vector<std::vector<std::uint32_t>>& ones,
              const std::vector<std::uint64_t>& sizes, const WeightSet& ws) {
        ++diag.candidates_generated;
        run_selection(relations, ones, sizes, ws, words_per_row, scratch_words);
        std::string key(reinterpret_cast<const char*>(scratch_words.data()),
                        scratch_words.size() * sizeof(std::uint64_t));
        if (seen.insert(std::move(key)).second) {
            auto centers = centers_from_words(scratch_words, relations.k(),
                                              relations.d(), words_per_row);
            if (observer) observer(centers);
            candidates.push_back(std::move(centers));
        }
    }
};

// Next exponent tuple in ascending lexicographic order (last digit fastest);
// false once the odometer wraps back to all zeros.
bool advance_exponents(std::vector<std::size_t>& exponents, std::size_t g) {
    std::size_t pos = exponents.size();
    while (pos-- > 0) {
        if (++exponents[pos] < g) return true;
        exponents[pos] = 0;
    }
    return false;
}

// ones[j][i] for an allocation over packed values.
void counts_from_alloc(const SubsetEnumerator::Alloc& alloc,
                       const std::vector<BitRow>& values, std::size_t d,
                       std::vector<std::vector<std::uint32_t>>& ones) {
    for (std::size_t j = 0; j < alloc.size(); ++j) {
        auto& row_counts = ones[j];
        std::fill(row_counts.begin(), row_counts.end(), 0);
        for (const auto& [value_idx, copies] : alloc[j]) {
            const BitRow& value = values[value_idx];
            for (std::size_t i = 0; i < d; ++i)
                if (value.bit(i)) row_counts[i] += copies;
        }
    }
}

}  // namespace

GoodCentersResult good_centers(
    PointStream& stream, const RelationSet& relations, const CenterSet& baseline,
    const PtasParams& params, SeededRng rng,
    const std::function<void(const CenterSet&)>& candidate_observer) {
    const std::size_t k = relations.k();
    const std::size_t d = relations.d();
    if (baseline.k() == 0)
        throw EmptyInputError("good_centers: empty baseline center set");
    if (stream.width() != d || baseline.width() != d)
        throw ShapeMismatchError("good_centers: stream/baseline width differs from relation d");
    check_epsilon(params.epsilon);
    if (params.tau == 0 || params.eta == 0 || params.zeta == 0)
        throw InvalidParameterError("good_centers: tau, eta, zeta must be >= 1");
    if (params.candidate_budget && *params.candidate_budget == 0)
        throw InvalidParameterError("good_centers: candidate budget must be positive");
    if (!stream.size_known())
        throw InvalidParameterError(
            "good_centers: stream size unknown; run the baseline pass first");
    const std::uint64_t n = stream.size();
    if (n == 0) throw EmptyInputError("good_centers: empty dataset");

    const u128 slots_needed = static_cast<u128>(params.zeta) * params.eta * k;
    if (slots_needed > kMaxReservoirSlots)
        throw LimitsExceededError("good_centers: zeta*eta*k reservoir too large");
    const std::uint64_t slots = static_cast<std::uint64_t>(slots_needed);

    // Pass A: every repetition's sample batch from one reservoir bank.
    const auto samples = d2_reservoir_sample(stream, baseline, slots,
                                             rng.fork(kSamplingSubstream));

    const WeightGrid grid(n, params.epsilon);
    const std::size_t g = grid.size();

    GoodCentersDiagnostics diag;
    diag.grid_size = g;

    // Weight vectors depend only on the exponent tuple; cache them when the
    // k-fold product is small enough to enumerate up front.
    std::vector<std::size_t> exponents(k, 0);
    std::vector<WeightSet> cached_weights;
    bool use_cache = true;
    {
        std::uint64_t combos = 1;
        for (std::size_t j = 0; j < k; ++j) {
            combos *= g;
            if (combos > (std::uint64_t{1} << 20)) {
                use_cache = false;
                break;
            }
        }
        if (use_cache) {
            cached_weights.reserve(combos);
            std::fill(exponents.begin(), exponents.end(), 0);
            do {
                cached_weights.push_back(
                    to_weight_set(grid.cleared_weights(exponents)));
            } while (advance_exponents(exponents, g));
        }
    }

    const std::size_t words_per_row = (d + 63) / 64;
    CandidateSink sink{relations,
                       words_per_row,
                       std::vector<std::uint64_t>(k * words_per_row, 0),
                       {},
                       {},
                       diag,
                       candidate_observer};

    std::vector<std::vector<std::uint32_t>> ones(k, std::vector<std::uint32_t>(d, 0));
    std::vector<std::uint64_t> sizes(k, params.tau);

    const std::uint64_t batch = params.eta * k;
    const std::uint64_t tau_copies = params.tau * k;

    for (std::uint64_t rep = 0; rep < params.zeta; ++rep) {
        // M = this repetition's D^2 batch plus tau*k copies of each baseline
        // center, multiplicities capped at k*tau (no tuple uses more).
        std::map<BitRow, std::uint64_t> tallies;
        for (std::uint64_t s = rep * batch; s < (rep + 1) * batch; ++s)
            ++tallies[samples[s]];
        for (const auto& b : baseline.centers) tallies[b] += tau_copies;
        std::vector<BitRow> values;
        std::vector<std::uint32_t> counts;
        values.reserve(tallies.size());
        counts.reserve(tallies.size());
        for (auto& [value, count] : tallies) {
            values.push_back(value);
            counts.push_back(static_cast<std::uint32_t>(
                std::min<std::uint64_t>(count, tau_copies)));
        }
        SubsetEnumerator enumerator(std::move(values), std::move(counts), k,
                                    params.tau);

        const auto process_combo = [&](const SubsetEnumerator::Alloc& alloc,
                                       std::span<const std::size_t> expo,
                                       std::size_t expo_index) {
            counts_from_alloc(alloc, enumerator.values(), d, ones);
            if (use_cache) {
                sink.emit(ones, sizes, cached_weights[expo_index]);
            } else {
                sink.emit(ones, sizes, to_weight_set(grid.cleared_weights(expo)));
            }
        };

        bool truncated = false;
        std::uint64_t prefix_budget = 0;
        std::uint64_t random_budget = 0;
        if (params.candidate_budget) {
            BigUint combos = enumerator.total_count();
            for (std::size_t j = 0; j < k; ++j)
                combos.mul_u64(static_cast<std::uint64_t>(g));
            if (combos > BigUint(*params.candidate_budget)) {
                truncated = true;
                prefix_budget = (*params.candidate_budget + 1) / 2;
                random_budget = *params.candidate_budget / 2;
                diag.budget_truncated = true;
            }
        }

        if (!truncated) {
            enumerator.enumerate([&](const SubsetEnumerator::Alloc& alloc) {
                ++diag.subsets_enumerated;
                std::fill(exponents.begin(), exponents.end(), 0);
                std::size_t expo_index = 0;
                do {
                    process_combo(alloc, exponents, expo_index);
                    ++expo_index;
                } while (advance_exponents(exponents, g));
                return true;
            });
            continue;
        }

        // Deterministic prefix over the (subset, weight) cross product.
        std::uint64_t emitted = 0;
        enumerator.enumerate([&](const SubsetEnumerator::Alloc& alloc) {
            ++diag.subsets_enumerated;
            std::fill(exponents.begin(), exponents.end(), 0);
            std::size_t expo_index = 0;
            do {
                process_combo(alloc, exponents, expo_index);
                ++expo_index;
                if (++emitted >= prefix_budget) return false;
            } while (advance_exponents(exponents, g));
            return true;
        });

        // Uniform distinct combos from the remainder, in sorted rank order.
        BigUint total_combos = enumerator.total_count();
        for (std::size_t j = 0; j < k; ++j)
            total_combos.mul_u64(static_cast<std::uint64_t>(g));
        BigUint span = total_combos;
        span -= BigUint(prefix_budget);
        SeededRng budget_rng = rng.fork(kBudgetSubstream + rep);
        std::set<BigUint> ranks;
        while (ranks.size() < random_budget) {
            BigUint r = BigUint::random_below(
                span, [&] { return budget_rng.next_u64(); });
            r += BigUint(prefix_budget);
            ranks.insert(std::move(r));
        }
        for (const auto& rank : ranks) {
            BigUint quotient = rank;
            std::size_t expo_index = 0;
            for (std::size_t j = k; j-- > 0;) {
                const std::uint64_t digit = quotient.divmod_u64(g);
                exponents[j] = static_cast<std::size_t>(digit);
            }
            if (use_cache) {
                expo_index = 0;
                for (std::size_t j = 0; j < k; ++j)
                    expo_index = expo_index * g + exponents[j];
            }
            const auto alloc = enumerator.unrank(quotient);
            ++diag.subsets_enumerated;
            process_combo(alloc, exponents, expo_index);
        }
    }

    // Pass B: cost every candidate at once; cheapest wins, first on ties.
    const auto costs = multi_cost(sink.candidates, stream);
    std::size_t best = 0;
    for (std::size_t i = 1; i < costs.size(); ++i)
        if (costs[i] < costs[best]) best = i;

    diag.candidates_distinct = sink.candidates.size();
    diag.passes_consumed = 2;
    return {sink.candidates[best], costs[best], diag};
}

std::vector<std::size_t> assign_clusters(PointStream& stream,
                                         const CenterSet& centers) {
    if (centers.k() == 0)
        throw EmptyInputError("assign_clusters: empty center set");
    std::vector<std::size_t> labels;
    stream.for_each_row([&](const BitRow& row) {
        labels.push_back(nearest_center(row, centers).first);
    });
    return labels;
}

}  // namespace blr
